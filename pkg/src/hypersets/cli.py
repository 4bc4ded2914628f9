"""Command-line front end: solve, eq, aut, wf, group, search-separation, repl.

Exit codes: 0 success, 1 syntax error, 2 semantic error, 3 size cap
exceeded, 10 "unequal" from eq, 11 "no witness" from search-separation.
Identical seeds and flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from .apg import DEFAULT_ISO_CAP
from .boffa import Universe
from .canon import Semantics, automorphisms, canonicalize, equal, is_rigid, to_dot
from .errors import (
    AtomOutsideBoffa,
    DuplicateDefinition,
    GroupTooLarge,
    HslSyntaxError,
    HypersetError,
    NotEndExtension,
    NotExtensional,
    NotInjective,
    NotWellFounded,
    OrderTooLarge,
    SizeLimitExceeded,
    UndefinedName,
)
from .grouplab import (
    GroupTable,
    PRESET_NAMES,
    aut_group_of,
    build_A_G,
    groups_isomorphic,
    preset_group,
)
from .hsl import HslProgram, flatten, flatten_into, parse, unparse
from .random_graphs import random_apg
from .wflab import all_automorphisms, build_universe, classify_map, extend_map

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_SEMANTIC = 2
EXIT_CAP = 3
EXIT_UNEQUAL = 10
EXIT_NO_WITNESS = 11

MODES = ("afa", "safa", "fafa", "boffa")


@dataclass
class Config:
    mode: str = "afa"
    iso_cap: int = DEFAULT_ISO_CAP
    seed: int = 0
    output: str = "text"  # text | json | dot

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"invalid mode {self.mode!r}")
        if self.iso_cap <= 0:
            raise ValueError("size caps must be positive")

    @property
    def semantics(self) -> Semantics:
        if self.mode == "boffa":
            raise ValueError("boffa mode has no canonicalizing semantics")
        return Semantics(self.mode)


def _default_cap() -> int:
    env = os.environ.get("HS_CAP")
    return int(env) if env else DEFAULT_ISO_CAP


def _read_program(path: str) -> HslProgram:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse(text)


def _solve_names(program: HslProgram, cfg: Config):
    """Per-name canonical pictures plus an equality relation on names.

    Pure modes canonicalize each flattened graph; Boffa mode inserts into a
    fresh universe, where equality is id equality.
    """
    if cfg.mode == "boffa":
        u = Universe()
        ids = flatten_into(program, u)
        names = list(ids)
        pics = {name: u.picture_of(ids[name]) for name in names}
        same = lambda a, b: ids[a] == ids[b]  # noqa: E731
        return names, pics, same
    graphs = flatten(program)
    names = list(graphs)
    pics = {
        name: canonicalize(graphs[name], cfg.semantics, cap=cfg.iso_cap).canonical
        for name in names
    }
    same = lambda a, b: equal(graphs[a], graphs[b], cfg.semantics, cap=cfg.iso_cap)  # noqa: E731
    return names, pics, same


def cmd_solve(args) -> int:
    cfg = Config(mode=args.mode, iso_cap=args.cap, output="json" if args.json else "text")
    program = _read_program(args.file)
    names, pics, same = _solve_names(program, cfg)

    pairs = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            pairs.append((a, b, same(a, b)))

    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            for name in names:
                fh.write(to_dot(pics[name], name=name))

    if cfg.output == "json":
        doc = {
            "mode": cfg.mode,
            "sets": {name: unparse(pics[name]) for name in names},
            "pairs": [{"a": a, "b": b, "equal": e} for a, b, e in pairs],
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
        return EXIT_OK

    out = []
    for name in names:
        out.append(f"set {name}")
        out.append(unparse(pics[name]).rstrip("\n"))
        out.append("")
    for a, b, e in pairs:
        out.append(f"{'equal' if e else 'distinct'} {a} {b}")
    print("\n".join(out).rstrip("\n"))
    return EXIT_OK


def cmd_eq(args) -> int:
    cfg = Config(mode=args.mode, iso_cap=args.cap)
    program = _read_program(args.file)
    if cfg.mode == "boffa":
        u = Universe()
        ids = flatten_into(program, u)
        for name in (args.name1, args.name2):
            if name not in ids:
                raise UndefinedName(f"name {name!r} is not defined")
        verdict = ids[args.name1] == ids[args.name2]
    else:
        graphs = flatten(program)
        for name in (args.name1, args.name2):
            if name not in graphs:
                raise UndefinedName(f"name {name!r} is not defined")
        verdict = equal(graphs[args.name1], graphs[args.name2], cfg.semantics, cap=cfg.iso_cap)
    print("equal" if verdict else "unequal")
    return EXIT_OK if verdict else EXIT_UNEQUAL


def cmd_aut(args) -> int:
    cfg = Config(mode=args.mode, iso_cap=args.cap)
    program = _read_program(args.file)
    if cfg.mode == "boffa":
        u = Universe()
        ids = flatten_into(program, u)
        if args.name not in ids:
            raise UndefinedName(f"name {args.name!r} is not defined")
        pic = u.picture_of(ids[args.name])
    else:
        graphs = flatten(program)
        if args.name not in graphs:
            raise UndefinedName(f"name {args.name!r} is not defined")
        pic = canonicalize(graphs[args.name], cfg.semantics, cap=cfg.iso_cap).canonical
    group = automorphisms(pic, cap=cfg.iso_cap)
    if args.json:
        print(json.dumps(
            {"name": args.name, "order": group.order,
             "generators": [list(p) for p in group.generators]},
            indent=2, sort_keys=True))
    else:
        print(f"automorphism order {group.order}")
        for p in group.generators:
            print("generator " + " ".join(str(x) for x in p))
    return EXIT_OK


def _parse_cycles(text: str, n: int) -> dict[int, int]:
    """Cycle notation over atom indices: (0 1 2)(3 4)."""
    sigma = {i: i for i in range(n)}
    body = text.strip()
    if not body:
        return sigma
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"bad cycle notation {text!r}")
    for chunk in body[1:-1].split(")("):
        idx = [int(tok) for tok in chunk.replace(",", " ").split()]
        if any(not (0 <= i < n) for i in idx):
            raise ValueError(f"cycle mentions unknown atom in {text!r}")
        for i, j in zip(idx, idx[1:] + idx[:1]):
            sigma[i] = j
    return sigma


def cmd_wf(args) -> int:
    u = build_universe(args.atoms, args.levels, cap=args.cap)
    doc = {
        "atoms": args.atoms,
        "levels": args.levels,
        "level_sizes": [len(level) for level in u.levels],
    }
    if args.perm is not None:
        sigma = _parse_cycles(args.perm, args.atoms)
        rep = classify_map(u, extend_map(u, sigma))
        doc["map"] = {
            "verdict": rep.verdict,
            "membership_exact": rep.membership_exact,
            "pure_sets_fixed": rep.pure_sets_fixed,
            "rank_preserved": rep.rank_preserved,
            "fixed_points": rep.fixed_points,
        }
    elif args.embed_into is not None:
        if args.embed_into < args.atoms:
            raise ValueError("--embed-into needs at least as many atoms")
        target = build_universe(args.embed_into, args.levels, cap=args.cap)
        sigma = {i: i for i in range(args.atoms)}
        rep = classify_map(u, extend_map(u, sigma, into=target))
        doc["map"] = {
            "verdict": rep.verdict,
            "membership_exact": rep.membership_exact,
            "pure_sets_fixed": rep.pure_sets_fixed,
            "rank_preserved": rep.rank_preserved,
            "fixed_points": rep.fixed_points,
        }
    else:
        doc["automorphism_count"] = all_automorphisms(u).count

    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"atoms {doc['atoms']} levels {doc['levels']}")
    print("level sizes " + " ".join(str(s) for s in doc["level_sizes"]))
    if "map" in doc:
        m = doc["map"]
        print(f"verdict {m['verdict']}")
        print(f"membership exact {m['membership_exact']}")
        print(f"pure sets fixed {m['pure_sets_fixed']}")
        print(f"rank preserved {m['rank_preserved']}")
        if m["fixed_points"] is not None:
            print(f"fixed points {m['fixed_points']}")
    if "automorphism_count" in doc:
        print(f"automorphism count {doc['automorphism_count']}")
    return EXIT_OK


def _load_group(args) -> GroupTable:
    if args.preset:
        return preset_group(args.preset)
    with open(args.table, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("order") != len(data["table"]):
        raise ValueError("order field does not match table size")
    return GroupTable.from_rows(data["table"])


def cmd_group(args) -> int:
    group = _load_group(args)
    art = build_A_G(group, cap=args.group_cap)
    rep = aut_group_of(art, cap=args.cap)
    iso = groups_isomorphic(rep.table, group)
    pic = art.universe.picture_of(art.root)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(pic, name="A_G"))
    doc = {
        "group_order": group.order,
        "automorphism_count": rep.automorphism_count,
        "isomorphic_to_input": iso,
        "picture_nodes": pic.node_count,
    }
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"group order {group.order}")
        print(f"automorphism count {rep.automorphism_count}")
        print(f"isomorphic to input {iso}")
        print(f"picture nodes {pic.node_count}")
    return EXIT_OK


def cmd_search_separation(args) -> int:
    if args.mode_a == args.mode_b:
        raise ValueError("modes must differ")
    cfg_a = Config(mode=args.mode_a, iso_cap=args.cap)
    cfg_b = Config(mode=args.mode_b, iso_cap=args.cap)
    rng = random.Random(args.seed)
    for trial in range(args.budget):
        g1 = random_apg(rng, args.max_nodes)
        g2 = random_apg(rng, args.max_nodes)
        ea = equal(g1, g2, cfg_a.semantics, cap=cfg_a.iso_cap)
        eb = equal(g1, g2, cfg_b.semantics, cap=cfg_b.iso_cap)
        if ea != eb:
            print(f"# witness at trial {trial}: "
                  f"{args.mode_a} says {ea}, {args.mode_b} says {eb}")
            print("# graph A")
            print(unparse(g1).rstrip("\n"))
            print("# graph B")
            print(unparse(g2).replace("x", "y").rstrip("\n"))
            return EXIT_OK
    print(f"no witness within budget {args.budget}")
    return EXIT_NO_WITNESS


def _term_text(term) -> str:
    from .hsl import NameRef, NatTerm, SetTerm, TupleTerm

    if isinstance(term, NameRef):
        return term.name
    if isinstance(term, NatTerm):
        return str(term.value)
    if isinstance(term, SetTerm):
        return "{" + ", ".join(_term_text(t) for t in term.elems) + "}"
    if isinstance(term, TupleTerm):
        return "<" + ", ".join(_term_text(t) for t in term.elems) + ">"
    raise TypeError(f"unknown term {term!r}")


def cmd_repl(args) -> int:
    from .hsl import AtomDecl

    cfg = Config(mode=args.mode, iso_cap=args.cap)
    statements: dict[str, object] = {}  # name -> statement; later lines replace
    out = sys.stdout

    def program_text() -> str:
        chunks = []
        for stmt in statements.values():
            if isinstance(stmt, AtomDecl):
                chunks.append(f"atom {stmt.name};")
            else:
                chunks.append(f"{stmt.name} = {_term_text(stmt.term)};")
        return "\n".join(chunks)

    def solve_name(name: str):
        program = parse(program_text())
        if cfg.mode == "boffa":
            u = Universe()
            ids = flatten_into(program, u)
            if name not in ids:
                raise UndefinedName(f"name {name!r} is not defined")
            return u.picture_of(ids[name])
        graphs = flatten(program)
        if name not in graphs:
            raise UndefinedName(f"name {name!r} is not defined")
        return canonicalize(graphs[name], cfg.semantics, cap=cfg.iso_cap).canonical

    def eq_names(a: str, b: str) -> bool:
        program = parse(program_text())
        if cfg.mode == "boffa":
            u = Universe()
            ids = flatten_into(program, u)
            for name in (a, b):
                if name not in ids:
                    raise UndefinedName(f"name {name!r} is not defined")
            return ids[a] == ids[b]
        graphs = flatten(program)
        for name in (a, b):
            if name not in graphs:
                raise UndefinedName(f"name {name!r} is not defined")
        return equal(graphs[a], graphs[b], cfg.semantics, cap=cfg.iso_cap)

    for raw in sys.stdin:
        line = raw.strip()
        if not line:
            continue
        try:
            if line == ":quit":
                break
            elif line.startswith(":mode"):
                _, mode = line.split()
                cfg = Config(mode=mode, iso_cap=cfg.iso_cap)
                out.write(f"mode {mode}\n")
            elif line.startswith(":eq"):
                _, a, b = line.split()
                out.write(("equal" if eq_names(a, b) else "unequal") + "\n")
            elif line.startswith(":canon"):
                _, name = line.split()
                out.write(unparse(solve_name(name)))
            elif line.startswith(":aut"):
                _, name = line.split()
                out.write(f"order {automorphisms(solve_name(name), cap=cfg.iso_cap).order}\n")
            elif line.startswith(":rigid"):
                _, name = line.split()
                out.write(("rigid" if is_rigid(solve_name(name), cap=cfg.iso_cap) else "not rigid") + "\n")
            elif line.startswith(":picture"):
                _, name, path = line.split()
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(to_dot(solve_name(name), name=name))
                out.write(f"wrote {path}\n")
            elif line.startswith(":"):
                out.write(f"unknown directive {line.split()[0]}\n")
            else:
                for stmt in parse(line).statements:
                    statements[stmt.name] = stmt
        except HypersetError as exc:
            out.write(f"error: {exc}\n")
        except ValueError as exc:
            out.write(f"error: {exc}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hypersets",
        description="A desk-scale laboratory for non-well-founded set theory.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, mode=True):
        if mode:
            p.add_argument("--mode", choices=MODES, default="afa")
        p.add_argument("--cap", type=int, default=_default_cap(),
                       help="size cap for isomorphism-flavoured searches")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("solve", help="canonicalize every named set in a program")
    p.add_argument("file", help=".hs-set program, or - for stdin")
    add_common(p)
    p.add_argument("--dot", help="write DOT pictures to this path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eq", help="decide equality of two named sets")
    p.add_argument("file")
    p.add_argument("name1")
    p.add_argument("name2")
    add_common(p)
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("aut", help="automorphism group of a named set")
    p.add_argument("file")
    p.add_argument("name")
    add_common(p)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("wf", help="cumulative hierarchy over Quine atoms")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--perm", help="atom permutation in cycle notation, e.g. '(0 1)'")
    p.add_argument("--embed-into", type=int,
                   help="embed into a stage over this many atoms")
    p.add_argument("--report", action="store_true",
                   help="print the verification report (the default)")
    p.add_argument("--cap", type=int, default=1 << 16)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_wf)

    p = sub.add_parser("group", help="build A_G and verify Aut(A_G) = G")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESET_NAMES)
    src.add_argument("--table", help='JSON file {"order": n, "table": [[...]]}')
    p.add_argument("--group-cap", type=int, default=8)
    add_common(p, mode=False)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("search-separation",
                       help="random search for graphs where two modes disagree")
    p.add_argument("mode_a", choices=MODES[:3])
    p.add_argument("mode_b", choices=MODES[:3])
    p.add_argument("--max-nodes", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--cap", type=int, default=_default_cap())
    p.set_defaults(func=cmd_search_separation)

    p = sub.add_parser("repl", help="interactive session reading stdin")
    add_common(p)
    p.set_defaults(func=cmd_repl)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HslSyntaxError, DuplicateDefinition) as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except (SizeLimitExceeded, GroupTooLarge, OrderTooLarge) as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (
        UndefinedName,
        AtomOutsideBoffa,
        NotExtensional,
        NotEndExtension,
        NotInjective,
        NotWellFounded,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
