"""Explicit finite stages of the cumulative hierarchy over Quine atoms.

``build_universe`` enumerates WF_0(A) = A, WF_{k+1}(A) = P(WF_k(A)) with a
fixed set of atoms satisfying a = {a} literally: the singleton subset {a}
interns back onto the atom's own code, so atoms persist through every
level.  ``extend_map`` realizes the recursion that sends an atom map
sigma to the structure map

    sigma_bar(x) = sigma(x)        if x is an atom,
    sigma_bar(x) = sigma_bar[x]    otherwise (elementwise image),

which is an automorphism of the top level when sigma is a permutation and
a proper membership embedding when sigma lands in a larger atom pool.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .apg import DEFAULT_ISO_CAP, _parent_sets, _stable_colors
from .errors import NotInjective, SizeLimitExceeded

DEFAULT_ELEMENT_CAP = 1 << 16


@dataclass
class LevelledUniverse:
    atoms: tuple[int, ...]
    levels: list[list[int]]            # levels[k] enumerates WF_k(A)
    members: dict[int, frozenset[int]]
    intern: dict[frozenset[int], int]
    first_level: dict[int, int]

    @property
    def top(self) -> list[int]:
        return self.levels[-1]

    def rank(self, code: int) -> int:
        """Least stage k with code in WF_{k+1}; atoms have rank 0."""
        return max(self.first_level[code] - 1, 0)

    def atom_support(self, code: int) -> frozenset[int]:
        memo: dict[int, frozenset[int]] = {}

        def go(c: int) -> frozenset[int]:
            if c in memo:
                return memo[c]
            if c in self._atom_set:
                memo[c] = frozenset((c,))
                return memo[c]
            memo[c] = frozenset().union(*(go(m) for m in self.members[c])) \
                if self.members[c] else frozenset()
            return memo[c]

        return go(code)

    @property
    def _atom_set(self) -> frozenset[int]:
        return frozenset(self.atoms)

    def hereditary_value(self, code: int):
        """Universe-independent structural value; atoms are tagged leaves."""
        if code in self._atom_set:
            return ("atom", code)
        return frozenset(self.hereditary_value(m) for m in self.members[code])


def build_universe(
    atom_count: int, levels: int, cap: int = DEFAULT_ELEMENT_CAP
) -> LevelledUniverse:
    """Enumerate WF_0 .. WF_levels over ``atom_count`` fresh Quine atoms."""
    atoms = tuple(range(atom_count))
    u = LevelledUniverse(
        atoms=atoms,
        levels=[list(atoms)],
        members={a: frozenset((a,)) for a in atoms},
        intern={frozenset((a,)): a for a in atoms},
        first_level={a: 0 for a in atoms},
    )
    next_code = atom_count
    total = atom_count
    for k in range(1, levels + 1):
        prev = u.levels[-1]
        if len(prev) > 30 or (1 << len(prev)) > cap:
            raise SizeLimitExceeded(
                f"level {k} would hold 2^{len(prev)} elements (cap {cap})"
            )
        level: list[int] = []
        for mask in range(1 << len(prev)):
            subset = frozenset(prev[i] for i in range(len(prev)) if mask >> i & 1)
            code = u.intern.get(subset)
            if code is None:
                code = next_code
                next_code += 1
                u.intern[subset] = code
                u.members[code] = subset
                u.first_level[code] = k
                total += 1
                if total > cap:
                    raise SizeLimitExceeded(f"element count exceeds cap {cap}")
            level.append(code)
        u.levels.append(level)
    return u


@dataclass
class ExtendedMap:
    """An atom map together with its levelwise extension."""

    atom_map: dict[int, int]
    full_map: dict[int, int]
    source: LevelledUniverse
    target: LevelledUniverse


def extend_map(
    u: LevelledUniverse,
    sigma: Mapping[int, int],
    into: Optional[LevelledUniverse] = None,
) -> ExtendedMap:
    """Extend an injective atom map to the whole hierarchy, level by level."""
    target = into if into is not None else u
    if set(sigma) != set(u.atoms):
        raise ValueError("atom map must be defined on exactly the atoms")
    if len(set(sigma.values())) != len(sigma):
        raise NotInjective("atom map is not injective")
    for a, b in sigma.items():
        if b not in target._atom_set:
            raise ValueError(f"image {b} is not an atom of the target")
    if len(target.levels) < len(u.levels):
        raise ValueError("target universe has fewer levels than the source")

    full: dict[int, int] = dict(sigma)
    for level in u.levels[1:]:
        for c in level:
            if c in full:
                continue
            image = frozenset(full[m] for m in u.members[c])
            full[c] = target.intern[image]
    return ExtendedMap(dict(sigma), full, u, target)


@dataclass
class MapReport:
    verdict: str                 # "automorphism" | "proper-embedding"
    injective: bool
    surjective_onto_top: bool
    membership_exact: bool
    pure_sets_fixed: bool
    rank_preserved: bool
    fixed_points: Optional[int]  # only meaningful within one universe


def classify_map(u: LevelledUniverse, m: ExtendedMap) -> MapReport:
    """Automorphism-or-embedding verdict plus a full verification report.

    Membership preservation x in y <=> m(x) in m(y) is checked over all
    pairs of top-level elements, not sampled.
    """
    top = u.top
    target = m.target
    image = [m.full_map[x] for x in top]
    injective = len(set(image)) == len(top)
    surjective = set(image) == set(target.top)

    membership_exact = True
    tmembers = target.members
    for y in top:
        my = m.full_map[y]
        for x in top:
            if (x in u.members[y]) != (m.full_map[x] in tmembers[my]):
                membership_exact = False
                break
        if not membership_exact:
            break

    pure_fixed = all(
        u.hereditary_value(x) == target.hereditary_value(m.full_map[x])
        for x in top
        if not u.atom_support(x)
    )
    rank_ok = all(u.rank(x) == target.rank(m.full_map[x]) for x in top)
    same_universe = target is u
    fixed = sum(1 for x in top if m.full_map[x] == x) if same_universe else None
    verdict = "automorphism" if same_universe and surjective else "proper-embedding"
    return MapReport(
        verdict=verdict,
        injective=injective,
        surjective_onto_top=surjective,
        membership_exact=membership_exact,
        pure_sets_fixed=pure_fixed,
        rank_preserved=rank_ok,
        fixed_points=fixed,
    )


@dataclass
class StructureAutomorphisms:
    count: int
    generators: list[dict[int, int]]
    elements: list[dict[int, int]]


def all_automorphisms(
    u: LevelledUniverse, cap: int = DEFAULT_ISO_CAP
) -> StructureAutomorphisms:
    """Exhaustively enumerate the membership automorphisms of the top level.

    This searches the bare digraph of the membership relation and does not
    assume anything about atom maps, so it can serve as the independent
    check that every automorphism arises from an atom permutation.
    """
    top = u.top
    n = len(top)
    if n > cap:
        raise SizeLimitExceeded(f"automorphism search capped at {cap} elements")
    index = {c: i for i, c in enumerate(top)}
    children = [
        frozenset(index[m] for m in u.members[c]) for c in top
    ]
    parents = _parent_sets(children)
    colors = _stable_colors(children, parents, [0] * n)

    by_color: dict[int, list[int]] = {}
    for i in range(n):
        by_color.setdefault(colors[i], []).append(i)
    order = sorted(range(n), key=lambda i: (len(by_color[colors[i]]), i))

    fwd: dict[int, int] = {}
    rev: dict[int, int] = {}
    used = [False] * n
    found: list[dict[int, int]] = []

    def consistent(i: int, w: int) -> bool:
        for c in children[i]:
            if c in fwd and fwd[c] not in children[w]:
                return False
        for p in parents[i]:
            if p in fwd and w not in children[fwd[p]]:
                return False
        for c in children[w]:
            pre = rev.get(c)
            if pre is not None and pre not in children[i]:
                return False
        for p in parents[w]:
            pre = rev.get(p)
            if pre is not None and i not in children[pre]:
                return False
        return True

    def backtrack(k: int) -> None:
        if k == n:
            found.append({top[i]: top[fwd[i]] for i in range(n)})
            return
        i = order[k]
        for w in by_color[colors[i]]:
            if used[w] or not consistent(i, w):
                continue
            fwd[i] = w
            rev[w] = i
            used[w] = True
            backtrack(k + 1)
            del fwd[i]
            del rev[w]
            used[w] = False

    backtrack(0)

    identity = {c: c for c in top}
    generators: list[dict[int, int]] = []
    generated = {_perm_key(identity, top)}
    for perm in sorted(found, key=lambda p: _perm_key(p, top)):
        if _perm_key(perm, top) in generated:
            continue
        generators.append(perm)
        closure = {_perm_key(identity, top): identity}
        frontier = [identity]
        while frontier:
            q = frontier.pop()
            for gen in generators:
                comp = {c: gen[q[c]] for c in top}
                ck = _perm_key(comp, top)
                if ck not in closure:
                    closure[ck] = comp
                    frontier.append(comp)
        generated = set(closure)
    return StructureAutomorphisms(len(found), generators, found)


def _perm_key(perm: dict[int, int], top: list[int]) -> tuple[int, ...]:
    return tuple(perm[c] for c in top)
