"""Transitive sets with a prescribed automorphism group.

From a finite group G, build in a Boffa universe: one Quine atom a_g per
element, the von Neumann numerals coding G's elements, and for every pair
(g, h) a self-referential tuple

    r(g, h) = <r(g, h), a_g, numeral(h), a_(g*h)>.

The transitive closure of all of that is a set whose membership
automorphisms are exactly the left translations of G: an automorphism must
fix the numerals (well-founded, rigid, pairwise non-isomorphic), permute
the atoms, and send each r(g, h) to r(pi(g), h), which forces
pi(g*h) = pi(g)*h and hence pi = left translation by pi(identity).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .apg import DEFAULT_ISO_CAP, trim_to_accessible
from .boffa import Universe
from .canon import automorphisms
from .errors import GroupTooLarge, OrderTooLarge

DEFAULT_GROUP_CAP = 8
PRESET_NAMES = ("z1", "z2", "z3", "z4", "v4", "s3")


@dataclass(frozen=True)
class GroupTable:
    """A finite group given by its multiplication table over 0..n-1."""

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int

    def __post_init__(self):
        n = self.order
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("table must be order x order")
        for row in self.table:
            for x in row:
                if not (0 <= x < n):
                    raise ValueError("table entry out of range (closure fails)")
        e = self.identity
        if any(self.table[e][i] != i or self.table[i][e] != i for i in range(n)):
            raise ValueError("identity law fails")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise ValueError("associativity fails")
        for i in range(n):
            if not any(
                self.table[i][j] == e and self.table[j][i] == e for j in range(n)
            ):
                raise ValueError(f"element {i} has no inverse")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "GroupTable":
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        identity = next(
            i for i in range(n)
            if all(rows[i][j] == j and rows[j][i] == j for j in range(n))
        )
        return cls(n, rows, identity)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k


def cyclic_group(n: int) -> GroupTable:
    return GroupTable(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0)


def klein_four_group() -> GroupTable:
    return GroupTable(4, tuple(tuple(i ^ j for j in range(4)) for i in range(4)), 0)


def symmetric_group_3() -> GroupTable:
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(
        tuple(index[tuple(p[q[x]] for x in range(3))] for q in perms) for p in perms
    )
    return GroupTable(6, table, index[(0, 1, 2)])


def preset_group(name: str) -> GroupTable:
    name = name.lower()
    if name == "z1":
        return cyclic_group(1)
    if name == "z2":
        return cyclic_group(2)
    if name == "z3":
        return cyclic_group(3)
    if name == "z4":
        return cyclic_group(4)
    if name == "v4":
        return klein_four_group()
    if name == "s3":
        return symmetric_group_3()
    raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")


# --- gadgets -----------------------------------------------------------------

def _pair_id(u: Universe, a: int, b: int) -> int:
    w1 = u.add_set([a])
    if a == b:
        return u.add_set([w1])
    w2 = u.add_set([a, b])
    return u.add_set([w1, w2])


def _tuple_id(u: Universe, components: Sequence[int]) -> int:
    """Right-nested Kuratowski encoding of an already-realized tuple."""
    out = components[-1]
    for c in reversed(components[:-1]):
        out = _pair_id(u, c, out)
    return out


def make_cyclic_tuple(u: Universe, *components: int) -> int:
    """A set x with x = <x, c1, ..., ck>; one id per component tuple.

    The non-cyclic tail is shared through extensionality; the cyclic head
    is ill-founded and would mint a fresh copy per call, so the id is
    memoized on the universe.
    """
    if not components:
        raise ValueError("need at least one component")
    memo: dict[tuple[int, ...], int] = u.__dict__.setdefault("_gadget_memo", {})
    key = tuple(components)
    if key in memo:
        return memo[key]
    tail = _tuple_id(u, key) if len(key) > 1 else key[0]
    old_ids = u._transitive_closure(tail)
    ext: dict = {i: u.members(i) for i in old_ids}
    ext["r"] = ["w1", "w2"]
    ext["w1"] = ["r"]
    ext["w2"] = ["r", tail]
    phi = u.realize(ext, {i: i for i in old_ids})
    memo[key] = phi["r"]
    return memo[key]


def make_order_gadget(u: Universe, a: int, b: int) -> int:
    """The definability gadget x = <x, a, b>."""
    return make_cyclic_tuple(u, a, b)


def decode_pair(u: Universe, p: int) -> tuple[int, int]:
    """Inverse of the Kuratowski encoding; raises if p is not a pair."""
    ms = sorted(u.members(p))
    if len(ms) == 1:
        (w1,) = ms
        inner = u.members(w1)
        if len(inner) != 1:
            raise ValueError(f"{p} is not a pair")
        (a,) = inner
        return a, a
    if len(ms) != 2:
        raise ValueError(f"{p} is not a pair")
    singles = [w for w in ms if len(u.members(w)) == 1]
    doubles = [w for w in ms if len(u.members(w)) == 2]
    if len(singles) != 1 or len(doubles) != 1:
        raise ValueError(f"{p} is not a pair")
    (a,) = u.members(singles[0])
    rest = u.members(doubles[0]) - {a}
    if len(rest) != 1:
        raise ValueError(f"{p} is not a pair")
    (b,) = rest
    return a, b


def decode_tuple(u: Universe, x: int, arity: int) -> tuple[int, ...]:
    if arity < 2:
        raise ValueError("tuples have arity >= 2")
    a, b = decode_pair(u, x)
    if arity == 2:
        return a, b
    return (a,) + decode_tuple(u, b, arity - 1)


# --- the A_G construction ----------------------------------------------------

@dataclass
class AgArtifact:
    group: GroupTable
    universe: Universe
    root: int
    atom_ids: tuple[int, ...]
    numeral_ids: tuple[int, ...]
    gadget_ids: dict[tuple[int, int], int]


def build_A_G(group: GroupTable, cap: int = DEFAULT_GROUP_CAP) -> AgArtifact:
    """Materialize A_G = TC(atoms a_g, tuples r(g,h)) in a fresh universe."""
    n = group.order
    if n > cap:
        raise GroupTooLarge(f"group order {n} exceeds cap {cap}")
    u = Universe()

    ext = {("num", i): [("num", j) for j in range(i)] for i in range(n)}
    phi = u.realize(ext, {})
    numerals = tuple(phi[("num", i)] for i in range(n))

    atoms = tuple(u.add_quine_atom(label=f"a{g}") for g in range(n))

    gadgets: dict[tuple[int, int], int] = {}
    for g in range(n):
        for h in range(n):
            gadgets[(g, h)] = make_cyclic_tuple(
                u, atoms[g], numerals[h], atoms[group.mul(g, h)]
            )

    closure: set[int] = set()
    for i in atoms + tuple(gadgets.values()):
        closure |= u._transitive_closure(i)
    root = u.add_set(sorted(closure))
    return AgArtifact(group, u, root, atoms, numerals, gadgets)


@dataclass
class AutGroupReport:
    table: GroupTable
    translations: dict[int, dict[int, int]]  # g -> automorphism as id map
    automorphism_count: int


def aut_group_of(art: AgArtifact, cap: int = DEFAULT_ISO_CAP) -> AutGroupReport:
    """Compute Aut(A_G) exhaustively and identify it with left translations.

    Each automorphism of the picture of A_G is translated back to a set-id
    permutation, then checked to fix every numeral, permute the atoms by a
    left translation pi, and send r(g, h) to r(pi(g), h).  The composition
    table of the automorphisms is returned as a GroupTable.
    """
    u = art.universe
    group = art.group
    n = group.order
    tc = sorted(u._transitive_closure(art.root))
    raw = {i: sorted(u.members(i)) for i in tc}
    pic, trans = trim_to_accessible(raw, art.root)
    node_to_id = {node: i for i, node in trans.items()}

    auts = automorphisms(pic, cap=cap)
    id_perms: list[dict[int, int]] = []
    for perm in auts.elements:
        id_perms.append({i: node_to_id[perm[trans[i]]] for i in tc})

    atom_index = {a: g for g, a in enumerate(art.atom_ids)}
    translations: dict[int, dict[int, int]] = {}
    for id_perm in id_perms:
        for i in art.numeral_ids:
            if id_perm[i] != i:
                raise AssertionError(f"automorphism moves numeral id {i}")
        pi = {}
        for g, a in enumerate(art.atom_ids):
            image = id_perm[a]
            if image not in atom_index:
                raise AssertionError("automorphism does not permute the atoms")
            pi[g] = atom_index[image]
        g0 = pi[group.identity]
        for h in range(n):
            if pi[h] != group.mul(g0, h):
                raise AssertionError("atom permutation is not a left translation")
        for (g, h), r in art.gadget_ids.items():
            if id_perm[r] != art.gadget_ids[(pi[g], h)]:
                raise AssertionError("gadget does not follow the translation")
        if g0 in translations:
            raise AssertionError(f"two automorphisms share translation {g0}")
        translations[g0] = id_perm

    if set(translations) != set(range(n)):
        raise AssertionError("missing left translations among the automorphisms")

    elems = sorted(translations)
    rows = []
    for g in elems:
        row = []
        for h in elems:
            comp = {i: translations[g][translations[h][i]] for i in tc}
            g0 = atom_index[comp[art.atom_ids[group.identity]]]
            row.append(elems.index(g0))
        rows.append(tuple(row))
    table = GroupTable.from_rows(rows)
    return AutGroupReport(table, translations, len(id_perms))


# --- group isomorphism --------------------------------------------------------

def groups_isomorphic(g: GroupTable, h: GroupTable, cap: int = 12) -> bool:
    """Brute-force table isomorphism with generator-based pruning."""
    if g.order > cap or h.order > cap:
        raise OrderTooLarge(f"isomorphism search capped at order {cap}")
    if g.order != h.order:
        return False
    if sorted(map(g.element_order, range(g.order))) != sorted(
        map(h.element_order, range(h.order))
    ):
        return False

    gens = _generating_set(g)
    words = _words_over(g, gens)
    h_by_order: dict[int, list[int]] = {}
    for x in range(h.order):
        h_by_order.setdefault(h.element_order(x), []).append(x)

    candidates = [h_by_order.get(g.element_order(x), []) for x in gens]
    for images in itertools.product(*candidates):
        phi = {}
        ok = True
        for x in range(g.order):
            val = h.identity
            for letter in words[x]:
                val = h.mul(val, images[letter])
            phi[x] = val
        if len(set(phi.values())) != g.order:
            continue
        if all(
            phi[g.mul(a, b)] == h.mul(phi[a], phi[b])
            for a in range(g.order)
            for b in range(g.order)
        ):
            return True
    return False


def _generating_set(g: GroupTable) -> list[int]:
    gens: list[int] = []
    span = {g.identity}
    for x in sorted(range(g.order), key=g.element_order, reverse=True):
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        span.add(x)
        frontier.append(x)
        while frontier:
            y = frontier.pop()
            for z in (x, *gens):
                w = g.mul(y, z)
                if w not in span:
                    span.add(w)
                    frontier.append(w)
        if len(span) == g.order:
            break
    return gens


def _words_over(g: GroupTable, gens: list[int]) -> dict[int, tuple[int, ...]]:
    """Express every element as a product of generators (indices into gens)."""
    words: dict[int, tuple[int, ...]] = {g.identity: ()}
    frontier = [g.identity]
    while frontier:
        x = frontier.pop(0)
        for i, gen in enumerate(gens):
            y = g.mul(x, gen)
            if y not in words:
                words[y] = words[x] + (i,)
                frontier.append(y)
    if len(words) != g.order:
        raise AssertionError("generating set does not generate")
    return words
