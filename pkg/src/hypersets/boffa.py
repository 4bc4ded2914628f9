"""A finite universe with Boffa semantics.

Equality is node identity.  Extensionality is enforced structurally: no
two distinct set-ids may carry identical member sets.  Self-membership
breaks syntactic identity, so distinct Quine atoms a = {a}, b = {b} (member
sets {a} vs {b}) coexist happily, and fresh atoms can always be minted.
Isomorphic-but-distinct sets are the whole point: the store deliberately
violates isomorphism extensionality.

``realize`` is the finite analogue of superuniversality: an extensional
graph end-extending a transitive part of the universe is copied in, the
old part staying fixed.  The freshness policy is deterministic where the
axiom would invoke global choice: well-founded content collapses onto
existing sets (forced by extensionality), ill-founded nodes always mint
fresh ids.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping, Optional

from .apg import Apg, trim_to_accessible
from .errors import NotEndExtension, NotExtensional


class Universe:
    def __init__(self):
        self.sets: dict[int, frozenset[int]] = {}
        self.labels: dict[int, str] = {}
        self.next_id = 0
        # Reverse index over non-self-referential member sets; Quine atoms
        # and other self-members are exempt (see class docstring).
        self._by_members: dict[frozenset[int], int] = {}

    def __len__(self) -> int:
        return len(self.sets)

    def __contains__(self, i: int) -> bool:
        return i in self.sets

    def members(self, i: int) -> frozenset[int]:
        return self.sets[i]

    def is_quine_atom(self, i: int) -> bool:
        return self.sets[i] == frozenset((i,))

    def quine_atoms(self) -> list[int]:
        return [i for i in sorted(self.sets) if self.is_quine_atom(i)]

    def snapshot(self) -> "Universe":
        """Independent copy; member sets are immutable and shared."""
        u = Universe()
        u.sets = dict(self.sets)
        u.labels = dict(self.labels)
        u.next_id = self.next_id
        u._by_members = dict(self._by_members)
        return u

    def check_extensionality(self) -> None:
        seen: dict[frozenset[int], int] = {}
        for i, m in self.sets.items():
            if m in seen:
                raise AssertionError(
                    f"extensionality violated: {seen[m]} and {i} share members {set(m)}"
                )
            seen[m] = i
            for c in m:
                if c not in self.sets:
                    raise AssertionError(f"dangling member {c} of {i}")

    # -- mutators -----------------------------------------------------------

    def add_quine_atom(self, label: Optional[str] = None) -> int:
        """Mint a fresh set x with x = {x}, distinct from all existing sets."""
        i = self.next_id
        self.next_id += 1
        self.sets[i] = frozenset((i,))
        if label is not None:
            self.labels[i] = label
        return i

    def add_set(self, members: Iterable[int]) -> int:
        """The set with the given members: reused if it already exists
        (extensionality), freshly minted otherwise.

        The reuse check covers self-referential sets too: for a Quine atom
        a the request {a} returns a itself, since {a} = a.
        """
        ms = frozenset(members)
        for c in ms:
            if c not in self.sets:
                raise ValueError(f"unknown member id {c}")
        existing = self._find_by_members(ms)
        if existing is not None:
            return existing
        i = self.next_id
        self.next_id += 1
        self.sets[i] = ms
        self._by_members[ms] = i
        return i

    def _find_by_members(self, ms: frozenset[int]) -> Optional[int]:
        hit = self._by_members.get(ms)
        if hit is not None:
            return hit
        # A self-referential duplicate must be one of its own members.
        for e in ms:
            if self.sets.get(e) == ms:
                return e
        return None

    def realize(
        self,
        ext: Mapping[Hashable, Iterable[Hashable]],
        old: Mapping[Hashable, int],
    ) -> dict:
        """Copy an extensional end-extension of a transitive part into the
        universe; returns node -> set-id, identity on the old part.

        ``ext`` maps graph nodes to their member nodes; ``old`` maps the
        nodes of the already-realized transitive part to their ids.  New
        well-founded content collapses onto existing sets where member sets
        coincide; ill-founded nodes mint fresh ids.
        """
        ext_children = {k: frozenset(ext[k]) for k in ext}
        for k, kids in ext_children.items():
            for c in kids:
                if c not in ext_children:
                    raise ValueError(f"edge {k!r}->{c!r} points outside the graph")

        seen_sets: dict[frozenset, Hashable] = {}
        for k, kids in ext_children.items():
            if kids in seen_sets:
                raise NotExtensional(
                    f"nodes {seen_sets[kids]!r} and {k!r} have identical members"
                )
            seen_sets[kids] = k

        old_ids = set(old.values())
        if len(old_ids) != len(old):
            raise ValueError("old part maps two nodes to one id")
        for k, i in old.items():
            if k not in ext_children:
                raise ValueError(f"old node {k!r} is not a node of the graph")
            if i not in self.sets:
                raise ValueError(f"old id {i} is not in the universe")
            if not self.sets[i] <= old_ids:
                raise ValueError(f"old part is not transitive at id {i}")
        for k, i in old.items():
            kids = ext_children[k]
            if any(c not in old for c in kids):
                raise NotEndExtension(f"new member claimed for old set {k!r}")
            if frozenset(old[c] for c in kids) != self.sets[i]:
                raise NotEndExtension(f"membership of old set {k!r} altered")

        new_keys = [k for k in ext_children if k not in old]
        ill = _reaches_cycle(new_keys, ext_children, set(old))
        phi: dict = dict(old)

        staged_sets: dict[int, frozenset[int]] = {}
        staged_index: dict[frozenset[int], int] = {}
        next_id = self.next_id

        def lookup(ms: frozenset[int]) -> Optional[int]:
            hit = self._find_by_members(ms)
            return hit if hit is not None else staged_index.get(ms)

        for k in _topo_order(new_keys, ext_children, ill):
            ms = frozenset(phi[c] for c in ext_children[k])
            hit = lookup(ms)
            if hit is not None:
                phi[k] = hit
            else:
                phi[k] = next_id
                staged_sets[next_id] = ms
                staged_index[ms] = next_id
                next_id += 1
        for k in sorted(ill, key=_stable_key):
            phi[k] = next_id
            next_id += 1
        for k in ill:
            ms = frozenset(phi[c] for c in ext_children[k])
            i = phi[k]
            staged_sets[i] = ms
            if i not in ms:
                if lookup(ms) is not None:
                    raise AssertionError("ill-founded mint duplicated a member set")
                staged_index[ms] = i

        self.sets.update(staged_sets)
        self._by_members.update(staged_index)
        self.next_id = next_id
        return phi

    def extend_iso_step(self, f: Mapping[int, int], x: int) -> dict[int, int]:
        """One forth step of the back-and-forth system: extend the partial
        membership isomorphism f so that x enters its domain.

        The membership structure of TC({x}) over dom(f) is copied to the
        range side via ``realize``; the universe may grow.
        """
        _check_partial_iso(self, f)
        if x not in self.sets:
            raise ValueError(f"unknown id {x}")
        if x in f:
            return dict(f)
        domain = set(f) | self._transitive_closure(x)
        ext = {i: self.sets[i] for i in domain}
        phi = self.realize(ext, dict(f))
        return {i: phi[i] for i in domain}

    # -- views ---------------------------------------------------------------

    def _transitive_closure(self, x: int) -> set[int]:
        out = {x}
        queue = deque((x,))
        while queue:
            i = queue.popleft()
            for c in self.sets[i]:
                if c not in out:
                    out.add(c)
                    queue.append(c)
        return out

    def picture_of(self, x: int) -> Apg:
        """The canonical picture of x: its transitive closure rooted at x."""
        tc = self._transitive_closure(x)
        raw = {i: sorted(self.sets[i]) for i in tc}
        labels = {i: self.labels[i] for i in tc if i in self.labels}
        g, _ = trim_to_accessible(raw, x, labels)
        return g

    def is_well_founded_id(self, x: int) -> bool:
        """True iff no membership cycle is reachable from x."""
        tc = self._transitive_closure(x)
        ill = _reaches_cycle(list(tc), self.sets, set())
        return x not in ill

    # -- JSON ----------------------------------------------------------------

    def to_json(self) -> dict:
        nodes = [str(i) for i in sorted(self.sets)]
        edges = [
            [str(i), str(c)] for i in sorted(self.sets) for c in sorted(self.sets[i])
        ]
        atoms = {
            str(i): self.labels.get(i) for i in self.quine_atoms()
        }
        return {"nodes": nodes, "edges": edges, "atoms": atoms}

    @classmethod
    def from_json(cls, data: Mapping) -> "Universe":
        u = cls()
        ids = [int(s) for s in data["nodes"]]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate set ids")
        members: dict[int, set[int]] = {i: set() for i in ids}
        seen = set()
        for a, b in data["edges"]:
            i, c = int(a), int(b)
            if (i, c) in seen:
                raise ValueError(f"duplicate edge {a!r}->{b!r}")
            seen.add((i, c))
            members[i].add(c)
        u.sets = {i: frozenset(members[i]) for i in ids}
        u.next_id = max(ids) + 1 if ids else 0
        for s, label in data.get("atoms", {}).items():
            i = int(s)
            if not u.is_quine_atom(i):
                raise ValueError(f"id {s} listed as atom but is not one")
            if label is not None:
                u.labels[i] = label
        u._by_members = {
            m: i for i, m in u.sets.items() if i not in m
        }
        u.check_extensionality()
        return u


def _stable_key(k) -> tuple:
    return (str(type(k).__name__), repr(k))


def _reaches_cycle(keys: list, children: Mapping, resolved: set) -> set:
    """Subset of keys lying on or reaching a cycle, treating ``resolved``
    nodes as leaves."""
    on_cycle: set = set()
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict = {k: WHITE for k in keys}
    for start in keys:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(children[start]))]
        color[start] = GRAY
        while stack:
            k, it = stack[-1]
            advanced = False
            for c in it:
                if c in resolved:
                    continue
                if color[c] == GRAY:
                    on_cycle.add(c)
                    continue
                if color[c] == WHITE:
                    color[c] = GRAY
                    stack.append((c, iter(children[c])))
                    advanced = True
                    break
            if not advanced:
                color[k] = BLACK
                stack.pop()

    # Everything that reaches a cycle node is ill-founded too.
    parents: dict = {k: [] for k in keys}
    for k in keys:
        for c in children[k]:
            if c in parents:
                parents[c].append(k)
    out = set(on_cycle)
    queue = deque(on_cycle)
    while queue:
        k = queue.popleft()
        for p in parents[k]:
            if p not in out:
                out.add(p)
                queue.append(p)
    return out


def _topo_order(keys: list, children: Mapping, ill: set) -> list:
    """Children-first order of the well-founded keys (ill-founded and
    already-resolved nodes are treated as leaves)."""
    wf = [k for k in keys if k not in ill]
    wf_set = set(wf)
    out: list = []
    state: dict = {k: 0 for k in wf}
    for start in wf:
        if state[start]:
            continue
        stack = [(start, iter(children[start]))]
        state[start] = 1
        while stack:
            k, it = stack[-1]
            advanced = False
            for c in it:
                if c in wf_set and state[c] == 0:
                    state[c] = 1
                    stack.append((c, iter(children[c])))
                    advanced = True
                    break
            if not advanced:
                out.append(k)
                state[k] = 2
                stack.pop()
    return out


def _check_partial_iso(u: Universe, f: Mapping[int, int]) -> None:
    dom = set(f)
    ran = set(f.values())
    if len(ran) != len(dom):
        raise ValueError("map is not injective")
    for i in dom:
        if i not in u.sets or f[i] not in u.sets:
            raise ValueError("map mentions unknown ids")
        if not u.sets[i] <= dom:
            raise ValueError(f"domain not transitive at {i}")
        if not u.sets[f[i]] <= ran:
            raise ValueError(f"range not transitive at {f[i]}")
        if frozenset(f[c] for c in u.sets[i]) != u.sets[f[i]]:
            raise ValueError(f"membership not preserved at {i}")
