"""Independent reference implementations used to check the library.

Everything here deliberately avoids the library's partition-refinement and
backtracking machinery: bisimulation is a greatest-fixpoint over node
pairs, isomorphism is brute force over bijections, unfolding shapes are
computed by depth-indexed dynamic programming, and the Mostowski collapse
works rank stratum by rank stratum with hereditary frozensets.
"""

from __future__ import annotations

import itertools

from hypersets.apg import Apg, Partition, trim_to_accessible


def naive_bisimulation(g: Apg) -> Partition:
    """O(n^2) greatest fixpoint on the all-pairs relation."""
    n = g.node_count
    rel = [[True] * n for _ in range(n)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            for v in range(n):
                if not rel[u][v]:
                    continue
                ok = all(
                    any(rel[c][d] for d in g.children[v]) for c in g.children[u]
                ) and all(
                    any(rel[c][d] for c in g.children[u]) for d in g.children[v]
                )
                if not ok:
                    rel[u][v] = False
                    changed = True
    class_of = []
    reps: list[int] = []
    for u in range(n):
        for i, r in enumerate(reps):
            if rel[u][r]:
                class_of.append(i)
                break
        else:
            reps.append(u)
            class_of.append(len(reps) - 1)
    return Partition.from_class_of(class_of)


def brute_force_pointed_iso(g1: Apg, g2: Apg) -> bool:
    """Exhaustive bijection search; only sensible for <= 7 nodes."""
    n = g1.node_count
    if n != g2.node_count:
        return False
    others1 = [u for u in range(n) if u != g1.root]
    others2 = [u for u in range(n) if u != g2.root]
    for images in itertools.permutations(others2):
        perm = {g1.root: g2.root}
        perm.update(zip(others1, images))
        if all(
            frozenset(perm[v] for v in g1.children[u]) == g2.children[perm[u]]
            for u in range(n)
        ):
            return True
    return False


def brute_force_automorphism_count(g: Apg) -> int:
    n = g.node_count
    others = [u for u in range(n) if u != g.root]
    count = 0
    for images in itertools.permutations(others):
        perm = {g.root: g.root}
        perm.update(zip(others, images))
        if all(
            frozenset(perm[v] for v in g.children[u]) == g.children[perm[u]]
            for u in range(n)
        ):
            count += 1
    return count


# --- truncated-unfolding shapes ----------------------------------------------

def shape_ids_at_depth(g: Apg, depth: int) -> list[int]:
    """Interned isomorphism types of the depth-truncated unfolding trees.

    shape(u, 0) is a blank leaf; shape(u, d+1) is the multiset of the
    children's shape(., d).  Equal ids mean isomorphic truncated unfoldings
    (computed on the graph, never materializing the exponential tree).
    The intern table is shared across calls so ids are comparable between
    graphs.
    """
    shapes = [0] * g.node_count
    for _ in range(depth):
        shapes = [
            _intern(tuple(sorted(shapes[v] for v in g.children[u])))
            for u in range(g.node_count)
        ]
    return shapes


_INTERN: dict[tuple, int] = {}


def _intern(key: tuple) -> int:
    if key not in _INTERN:
        _INTERN[key] = len(_INTERN) + 1
    return _INTERN[key]


def tree_shape(tree, path=()) -> tuple:
    """Recursive multiset shape of a FiniteTree, for cross-checking the
    graph-level dynamic programming on small instances."""
    kids = sorted(
        tree_shape(tree, p) for p in tree.paths if len(p) == len(path) + 1 and p[: len(path)] == path
    )
    return tuple(kids)


def safa_equal_by_unfolding(g1: Apg, g2: Apg) -> bool:
    """SAFA equality decided purely with truncated-unfolding isomorphism.

    Nodes whose truncated unfoldings (depth past the stabilization point)
    are isomorphic denote equal sets, so they merge; merging can collapse
    parallel edges and enable more merging, so the quotient is iterated.
    The final graphs are compared by the same truncated-unfolding shape.
    No partition refinement and no backtracking search is involved.
    """
    ch1, r1 = _unfolding_fixpoint(g1)
    ch2, r2 = _unfolding_fixpoint(g2)
    depth = len(ch1) + len(ch2) + 1
    s1 = _graph_shapes(ch1, depth)
    s2 = _graph_shapes(ch2, depth)
    return s1[r1] == s2[r2]


def _graph_shapes(children: dict, depth: int) -> dict:
    shapes = {k: 0 for k in children}
    for _ in range(depth):
        shapes = {
            k: _intern(tuple(sorted(shapes[c] for c in children[k])))
            for k in children
        }
    return shapes


def _unfolding_fixpoint(g: Apg) -> tuple[dict[int, frozenset[int]], int]:
    """Iteratively merge unfolding-isomorphic nodes; returns the children
    dict of the collapsed graph and its root key."""
    children = {u: frozenset(g.children[u]) for u in range(g.node_count)}
    root = g.root
    while True:
        shapes = _graph_shapes(children, len(children) + 1)
        rep: dict[int, int] = {}
        chosen: dict[int, int] = {}
        for k in sorted(children):
            chosen.setdefault(shapes[k], k)
            rep[k] = chosen[shapes[k]]
        if all(rep[k] == k for k in children):
            return children, root
        children = {
            r: frozenset(rep[c] for c in children[r])
            for r in set(rep.values())
        }
        root = rep[root]
        seen = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            for v in children[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        children = {k: v for k, v in children.items() if k in seen}


# --- Mostowski collapse -------------------------------------------------------

def mostowski_collapse(g: Apg) -> Apg:
    """Canonical picture of a well-founded graph via hereditary frozensets,
    built rank stratum by rank stratum."""
    from hypersets.apg import rank_map

    ranks = rank_map(g)
    value: dict[int, frozenset] = {}
    for u in sorted(range(g.node_count), key=lambda u: ranks[u]):
        value[u] = frozenset(value[v] for v in g.children[u])

    ids: dict[frozenset, int] = {}
    for u in sorted(value, key=lambda u: ranks[u]):
        ids.setdefault(value[u], len(ids))
    children = {
        ids[val]: sorted(ids[m] for m in val) for val in ids
    }
    collapsed, _ = trim_to_accessible(children, ids[value[g.root]])
    return collapsed


def afa_equal_via_union(g1: Apg, g2: Apg) -> bool:
    """AFA equality shortcut: are the roots bisimilar in the disjoint union?"""
    from hypersets.equivalence import max_bisimulation

    offset = g1.node_count
    children = tuple(g1.children) + tuple(
        frozenset(v + offset for v in kids) for kids in g2.children
    )
    # join under a fresh root so the union is accessible
    joined = children + (frozenset((g1.root, g2.root + offset)),)
    g = Apg(joined, len(joined) - 1)
    p = max_bisimulation(g)
    return p.same_class(g1.root, g2.root + offset)


def check_membership_iso(u, f: dict[int, int]) -> None:
    """Independent verifier: f is a partial membership isomorphism between
    transitive subsets of the universe u."""
    dom = set(f)
    ran = set(f.values())
    assert len(ran) == len(dom), "not injective"
    for i in dom:
        assert u.members(i) <= dom, f"domain not transitive at {i}"
    for j in ran:
        assert u.members(j) <= ran, f"range not transitive at {j}"
    for i in dom:
        for k in dom:
            assert (k in u.members(i)) == (f[k] in u.members(f[i])), (
                f"membership not preserved for {k} in {i}"
            )
