"""The hyperset language: systems of possibly self-referential set equations.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    stmt := NAME "=" term ";" | "atom" NAME ";"
    term := NAME | "{" [term ("," term)*] "}"
          | "<" term "," term {"," term} ">" | NAT

Tuples desugar to right-nested Kuratowski pairs, naturals to von Neumann
numerals.  Forward references are allowed; that is the point of set
equations.  ``atom`` declarations are only meaningful under Boffa
semantics, where they mint labeled Quine atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .apg import Apg, trim_to_accessible
from .boffa import Universe
from .errors import (
    AtomOutsideBoffa,
    DuplicateDefinition,
    HslSyntaxError,
    UndefinedName,
)

FILE_EXTENSION = ".hs-set"


@dataclass(frozen=True)
class NameRef:
    name: str


@dataclass(frozen=True)
class SetTerm:
    elems: tuple["Term", ...]


@dataclass(frozen=True)
class TupleTerm:
    elems: tuple["Term", ...]  # length >= 2


@dataclass(frozen=True)
class NatTerm:
    value: int


Term = Union[NameRef, SetTerm, TupleTerm, NatTerm]


@dataclass(frozen=True)
class Definition:
    name: str
    term: Term


@dataclass(frozen=True)
class AtomDecl:
    name: str


Statement = Union[Definition, AtomDecl]


@dataclass(frozen=True)
class HslProgram:
    statements: tuple[Statement, ...]

    @property
    def defined_names(self) -> list[str]:
        return [s.name for s in self.statements if isinstance(s, Definition)]

    @property
    def atom_names(self) -> list[str]:
        return [s.name for s in self.statements if isinstance(s, AtomDecl)]


# --- parsing ----------------------------------------------------------------

_PUNCT = set("{}<>=,;")


def _tokenize(text: str):
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in _PUNCT:
            yield (c, c, line, col)
            col += 1
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("NAT", int(text[i:j]), line, col)
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            yield ("ATOMKW" if word == "atom" else "NAME", word, line, col)
            col += j - i
            i = j
            continue
        raise HslSyntaxError(f"unexpected character {c!r}", line, col)
    yield ("EOF", None, line, col)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        kind_, value, line, col = self.peek()
        if kind_ != kind:
            shown = repr(value) if value is not None else "end of input"
            raise HslSyntaxError(f"expected {kind!r}, found {shown}", line, col)
        return self.advance()

    def program(self) -> HslProgram:
        statements: list[Statement] = []
        seen: set[str] = set()
        while self.peek()[0] != "EOF":
            kind, _, line, col = self.peek()
            if kind == "ATOMKW":
                self.advance()
                name = self.expect("NAME")[1]
                self.expect(";")
                stmt: Statement = AtomDecl(name)
            elif kind == "NAME":
                name = self.advance()[1]
                self.expect("=")
                term = self.term()
                self.expect(";")
                stmt = Definition(name, term)
            else:
                raise HslSyntaxError("expected a definition or atom declaration", line, col)
            if stmt.name in seen:
                raise DuplicateDefinition(f"name {stmt.name!r} defined twice")
            seen.add(stmt.name)
            statements.append(stmt)
        return HslProgram(tuple(statements))

    def term(self) -> Term:
        kind, value, line, col = self.peek()
        if kind == "NAME":
            self.advance()
            return NameRef(value)
        if kind == "NAT":
            self.advance()
            return NatTerm(value)
        if kind == "{":
            self.advance()
            elems: list[Term] = []
            if self.peek()[0] != "}":
                elems.append(self.term())
                while self.peek()[0] == ",":
                    self.advance()
                    elems.append(self.term())
            self.expect("}")
            return SetTerm(tuple(elems))
        if kind == "<":
            self.advance()
            elems = [self.term()]
            while self.peek()[0] == ",":
                self.advance()
                elems.append(self.term())
            self.expect(">")
            if len(elems) < 2:
                raise HslSyntaxError("tuples need at least two components", line, col)
            return TupleTerm(tuple(elems))
        shown = repr(value) if value is not None else "end of input"
        raise HslSyntaxError(f"expected a term, found {shown}", line, col)


def parse(text: str) -> HslProgram:
    return _Parser(text).program()


# --- flattening -------------------------------------------------------------

class _GraphBuilder:
    """Desugars a program into one big membership graph over node keys."""

    def __init__(self, program: HslProgram):
        self.children: dict = {}
        self.serial = 0
        self.alias: dict[str, object] = {}  # name -> node key or alias chain
        known = set(program.defined_names) | set(program.atom_names)
        for stmt in program.statements:
            if isinstance(stmt, AtomDecl):
                key = ("atom", stmt.name)
                self.children[key] = [key]
                self.alias[stmt.name] = key
        for stmt in program.statements:
            if isinstance(stmt, Definition):
                self.alias[stmt.name] = self._term_key(stmt.term, known)
        self._resolve_aliases()

    def _fresh(self, tag: str):
        self.serial += 1
        return (tag, self.serial)

    def _term_key(self, term: Term, known: set[str]):
        if isinstance(term, NameRef):
            if term.name not in known:
                raise UndefinedName(f"name {term.name!r} is never defined")
            return ("name", term.name)
        if isinstance(term, SetTerm):
            key = self._fresh("set")
            self.children[key] = [self._term_key(t, known) for t in term.elems]
            return key
        if isinstance(term, TupleTerm):
            rest = term.elems
            right = self._term_key(rest[-1], known)
            for t in reversed(rest[:-1]):
                right = self._pair(self._term_key(t, known), right)
            return right
        if isinstance(term, NatTerm):
            return self._numeral(term.value)
        raise TypeError(f"unknown term {term!r}")

    def _pair(self, a, b):
        """Kuratowski pair {{a}, {a, b}}; collapses to {{a}} when a is b."""
        w1 = self._fresh("set")
        self.children[w1] = [a]
        p = self._fresh("set")
        if a == b:
            self.children[p] = [w1]
        else:
            w2 = self._fresh("set")
            self.children[w2] = [a, b]
            self.children[p] = [w1, w2]
        return p

    def _numeral(self, k: int):
        base = self.serial + 1
        self.serial += k + 1
        for i in range(k + 1):
            self.children[("num", base, i)] = [("num", base, j) for j in range(i)]
        return ("num", base, k)

    def _resolve_aliases(self):
        def target(name: str):
            seen = []
            key: object = ("name", name)
            while isinstance(key, tuple) and key[0] == "name":
                nm = key[1]
                if nm in seen:
                    cycle = " -> ".join(seen + [nm])
                    raise ValueError(f"alias cycle {cycle} has no unique solution")
                seen.append(nm)
                key = self.alias[nm]
            return key

        resolved = {name: target(name) for name in self.alias}
        self.node_of = resolved
        self.children = {
            key: [
                resolved[c[1]] if isinstance(c, tuple) and c[0] == "name" else c
                for c in kids
            ]
            for key, kids in self.children.items()
        }


def flatten(program: HslProgram) -> dict[str, Apg]:
    """One rooted APG per defined name (pure AFA/SAFA/FAFA modes)."""
    if program.atom_names:
        raise AtomOutsideBoffa(
            "atom declarations need Boffa semantics; the isomorphism-flavoured "
            "theories have at most one Quine atom"
        )
    builder = _GraphBuilder(program)
    out = {}
    for name in program.defined_names:
        g, _ = trim_to_accessible(builder.children, builder.node_of[name])
        out[name] = g
    return out


def flatten_into(program: HslProgram, universe: Universe) -> dict[str, int]:
    """Insert the program into a Boffa universe; returns name -> set-id.

    Declared atoms mint fresh labeled Quine atoms.  Literal duplicates in
    the desugared graph are merged first (the same members force the same
    set), then the graph is realized over the minted atoms.
    """
    builder = _GraphBuilder(program)
    children = {k: list(v) for k, v in builder.children.items()}
    rep = _merge_duplicates(children)

    old = {}
    for name in program.atom_names:
        key = rep[("atom", name)]
        if key not in old:
            old[key] = universe.add_quine_atom(label=name)
    phi = universe.realize(children, old)
    return {
        name: phi[rep[builder.node_of[name]]]
        for name in program.defined_names + program.atom_names
    }


def _merge_duplicates(children: dict) -> dict:
    """Merge nodes with literally identical child sets until none remain,
    mutating ``children``; returns the key -> representative map.

    Extensionality forces these identifications; distinct self-membered
    nodes survive because their child sets differ as key sets.  Atom keys
    win representative elections so declared atoms keep their identity.
    """
    rep = {k: k for k in children}
    while True:
        groups: dict[frozenset, list] = {}
        for k, kids in children.items():
            groups.setdefault(frozenset(kids), []).append(k)
        merges = {}
        for members in groups.values():
            if len(members) < 2:
                continue
            atoms = [k for k in members if k[0] == "atom"]
            winner = atoms[0] if atoms else members[0]
            for k in members:
                if k is not winner:
                    merges[k] = winner
        if not merges:
            return rep
        children_new: dict = {}
        for k, kids in children.items():
            if k in merges:
                continue
            children_new[k] = [merges.get(c, c) for c in kids]
        children.clear()
        children.update(children_new)
        for k, r in rep.items():
            rep[k] = merges.get(r, r)


# --- unparsing ---------------------------------------------------------------

def unparse(g: Apg) -> str:
    """Equation system reproducing g up to pointed isomorphism.

    Numerals and pairs are printed in sugared form when the sugar is safe:
    the desugared interior nodes must be private to the construct, so that
    re-flattening yields an isomorphic graph.  Numerals win over pairs.
    """
    n = g.node_count
    order = _bfs_order(g)
    pos = {u: i for i, u in enumerate(order)}
    parents = g.parents()

    reach = _reach_sets(g)
    num_val = _numeral_values(g)

    skip: set[int] = set()
    sugar: dict[int, str] = {}

    for u in order:
        k = num_val[u]
        if k is None or len(reach[u]) != k + 1:
            continue
        interior = reach[u] - {u}
        if g.root in interior:
            continue
        if any(not parents[d] <= reach[u] for d in interior):
            continue
        sugar[u] = str(k)
        skip |= interior

    for u in order:
        if u in sugar or u in skip:
            continue
        decoded = _decode_pair(g, u, parents, skip)
        if decoded is None:
            continue
        a, b, w1, w2 = decoded
        if a in skip or b in skip:
            continue
        sugar[u] = ("pair", a, b)
        skip |= {w1, w2}

    def name(u: int) -> str:
        return f"x{pos[u]}"

    lines = []
    for u in order:
        if u in skip:
            continue
        s = sugar.get(u)
        if isinstance(s, str):
            lines.append(f"{name(u)} = {s};")
        elif isinstance(s, tuple):
            _, a, b = s
            lines.append(f"{name(u)} = <{name(a)}, {name(b)}>;")
        else:
            kids = sorted(g.children[u], key=lambda v: pos[v])
            inner = ", ".join(name(v) for v in kids)
            lines.append(f"{name(u)} = {{{inner}}};")
    return "\n".join(lines) + "\n"


def _bfs_order(g: Apg) -> list[int]:
    from collections import deque

    order = [g.root]
    seen = {g.root}
    queue = deque((g.root,))
    while queue:
        u = queue.popleft()
        for v in sorted(g.children[u]):
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order


def _reach_sets(g: Apg) -> list[set[int]]:
    out = []
    for u in range(g.node_count):
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for v in g.children[w]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        out.append(seen)
    return out


def _numeral_values(g: Apg) -> list[Optional[int]]:
    """num_val[u] = k iff u's children carry values 0..k-1, one each."""
    vals: list[Optional[int]] = [None] * g.node_count
    state = [0] * g.node_count
    for start in range(g.node_count):
        if state[start] == 2:
            continue
        stack = [(start, iter(g.children[start]))]
        state[start] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if state[v] == 0:
                    state[v] = 1
                    stack.append((v, iter(g.children[v])))
                    advanced = True
                    break
            if advanced:
                continue
            kid_vals = [vals[v] for v in g.children[u]]
            if all(x is not None for x in kid_vals) and sorted(kid_vals) == list(
                range(len(kid_vals))
            ):
                vals[u] = len(kid_vals)
            state[u] = 2
            stack.pop()
    return vals


def _decode_pair(g: Apg, u: int, parents, skip: set[int]):
    """Kuratowski witnesses of u = <a, b> with a != b, when private to u."""
    kids = sorted(g.children[u])
    if len(kids) != 2:
        return None
    for w1, w2 in (kids, kids[::-1]):
        if len(g.children[w1]) != 1 or len(g.children[w2]) != 2:
            continue
        (a,) = g.children[w1]
        rest = g.children[w2] - {a}
        if len(rest) != 1:
            continue
        (b,) = rest
        if w1 == w2 or w1 in (a, b) or w2 in (a, b):
            continue
        if g.root in (w1, w2) or w1 in skip or w2 in skip:
            continue
        if parents[w1] != {u} or parents[w2] != {u}:
            continue
        return a, b, w1, w2
    return None
