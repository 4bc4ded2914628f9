"""Finite accessible pointed graphs (APGs) and their basic operations.

An APG is the picture of a hereditary set: nodes stand for sets, the root
for the set being pictured, and an edge u -> v says "v is a member of u".
Every node is reachable from the root, node ids are dense naturals, and
child collections are sets (no parallel edges).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional

from .errors import NotWellFounded, SizeLimitExceeded

DEFAULT_ISO_CAP = 512


@dataclass(frozen=True)
class Apg:
    """Accessible pointed graph with dense node ids 0..node_count-1."""

    children: tuple[frozenset[int], ...]
    root: int
    labels: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.children)
        if not (0 <= self.root < n):
            raise ValueError(f"root {self.root} out of range for {n} nodes")
        for u, kids in enumerate(self.children):
            for v in kids:
                if not (0 <= v < n):
                    raise ValueError(f"edge {u}->{v} leaves node range 0..{n - 1}")
        seen = _reachable(self.children, self.root)
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise ValueError(f"nodes {missing} unreachable from root {self.root}")
        for u in self.labels:
            if not (0 <= u < n):
                raise ValueError(f"label on unknown node {u}")

    @property
    def node_count(self) -> int:
        return len(self.children)

    @property
    def edge_count(self) -> int:
        return sum(len(kids) for kids in self.children)

    def parents(self) -> tuple[frozenset[int], ...]:
        """Reverse adjacency: parents()[v] = nodes that have v as a child."""
        pred: list[set[int]] = [set() for _ in self.children]
        for u, kids in enumerate(self.children):
            for v in kids:
                pred[v].add(u)
        return tuple(frozenset(p) for p in pred)


@dataclass(frozen=True)
class FiniteTree:
    """Depth-truncated unfolding: prefix-closed set of child-position paths.

    ``arity[p]`` is the number of children the underlying graph node has,
    also for paths cut off by the depth limit.
    """

    paths: frozenset[tuple[int, ...]]
    arity: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        if () not in self.paths:
            raise ValueError("tree must contain the empty (root) path")
        for p in self.paths:
            if p and p[:-1] not in self.paths:
                raise ValueError(f"path set not prefix-closed at {p}")

    @property
    def depth(self) -> int:
        return max(len(p) for p in self.paths)

    def restricted(self, depth: int) -> "FiniteTree":
        kept = frozenset(p for p in self.paths if len(p) <= depth)
        return FiniteTree(kept, {p: self.arity[p] for p in kept})


@dataclass(frozen=True)
class Partition:
    """Assignment of each node to a class; class ids are dense naturals."""

    class_of: tuple[int, ...]
    class_count: int

    def __post_init__(self):
        if self.class_count and set(self.class_of) != set(range(self.class_count)):
            raise ValueError("class ids must be contiguous naturals from 0")

    @classmethod
    def from_class_of(cls, class_of: Iterable[int]) -> "Partition":
        """Normalize arbitrary class keys to first-appearance order."""
        renumber: dict = {}
        out = []
        for c in class_of:
            if c not in renumber:
                renumber[c] = len(renumber)
            out.append(renumber[c])
        return cls(tuple(out), len(renumber))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(n)), n)

    @classmethod
    def single(cls, n: int) -> "Partition":
        return cls((0,) * n, 1 if n else 0)

    @property
    def is_discrete(self) -> bool:
        return self.class_count == len(self.class_of)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.class_count)]
        for node, c in enumerate(self.class_of):
            out[c].append(node)
        return out

    def same_class(self, u: int, v: int) -> bool:
        return self.class_of[u] == self.class_of[v]


def _reachable(children, root) -> set[int]:
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for v in children[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def trim_to_accessible(
    children: Mapping[Hashable, Iterable[Hashable]],
    root: Hashable,
    labels: Optional[Mapping[Hashable, str]] = None,
) -> tuple[Apg, dict]:
    """Induced subgraph on the nodes reachable from root, densely re-indexed.

    Nodes are numbered in breadth-first discovery order (the root is 0);
    children are visited in the order the input mapping lists them, so the
    result is deterministic for a given input.  Returns the graph and the
    translation table old-id -> new-id.
    """
    if root not in children:
        raise ValueError(f"root {root!r} is not a node")
    trans: dict = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in children[u]:
            if v not in children:
                raise ValueError(f"edge {u!r}->{v!r} points outside the graph")
            if v not in trans:
                trans[v] = len(trans)
                order.append(v)
                queue.append(v)
    new_children = tuple(
        frozenset(trans[v] for v in children[u]) for u in order
    )
    new_labels = {}
    if labels:
        for u, lab in labels.items():
            if u in trans:
                new_labels[trans[u]] = lab
    return Apg(new_children, 0, new_labels), trans


def is_well_founded(g: Apg) -> bool:
    """True iff no node lies on or reaches a cycle of the child relation."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * g.node_count
    for start in range(g.node_count):
        if color[start] != WHITE:
            continue
        stack: list[tuple[int, Iterable[int]]] = [(start, iter(g.children[start]))]
        color[start] = GRAY
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if color[v] == GRAY:
                    return False
                if color[v] == WHITE:
                    color[v] = GRAY
                    stack.append((v, iter(g.children[v])))
                    advanced = True
                    break
            if not advanced:
                color[u] = BLACK
                stack.pop()
    return True


def rank_map(g: Apg) -> dict[int, int]:
    """Von Neumann rank per node: 0 for childless, else 1 + max child rank."""
    rank: dict[int, int] = {}
    state = [0] * g.node_count  # 0 unvisited, 1 on stack, 2 done
    for start in range(g.node_count):
        if state[start] == 2:
            continue
        stack: list[tuple[int, Iterable[int]]] = [(start, iter(g.children[start]))]
        state[start] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if state[v] == 1:
                    raise NotWellFounded(f"cycle through node {v}")
                if state[v] == 0:
                    state[v] = 1
                    stack.append((v, iter(g.children[v])))
                    advanced = True
                    break
            if not advanced:
                kids = g.children[u]
                rank[u] = 1 + max(rank[v] for v in kids) if kids else 0
                state[u] = 2
                stack.pop()
    return rank


def unfold(g: Apg, depth: int) -> FiniteTree:
    """All child paths from the root of length <= depth, as a position tree.

    Child positions follow ascending node-id order of the graph children.
    Beware: the number of paths can grow exponentially with depth.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    sorted_children = [sorted(kids) for kids in g.children]
    paths = {(): g.root}
    arity = {(): len(sorted_children[g.root])}
    frontier = [((), g.root)]
    for _ in range(depth):
        nxt = []
        for path, u in frontier:
            for i, v in enumerate(sorted_children[u]):
                p = path + (i,)
                paths[p] = v
                arity[p] = len(sorted_children[v])
                nxt.append((p, v))
        frontier = nxt
    return FiniteTree(frozenset(paths), arity)


def quotient(g: Apg, p: Partition) -> tuple[Apg, tuple[int, ...]]:
    """Collapse each partition class to one node; parallel edges merge.

    The projection map is a decoration of g onto the quotient: the child
    set of a class is the set of classes of children of its members.  New
    node ids are assigned breadth-first from the root class, visiting child
    classes in ascending order of their smallest member id.
    """
    if len(p.class_of) != g.node_count:
        raise ValueError("partition size does not match graph")
    class_children: list[set[int]] = [set() for _ in range(p.class_count)]
    class_min: list[int] = [g.node_count] * p.class_count
    for u, kids in enumerate(g.children):
        c = p.class_of[u]
        class_min[c] = min(class_min[c], u)
        for v in kids:
            class_children[c].add(p.class_of[v])

    root_class = p.class_of[g.root]
    new_id: dict[int, int] = {root_class: 0}
    order = [root_class]
    queue = deque([root_class])
    while queue:
        c = queue.popleft()
        for d in sorted(class_children[c], key=lambda x: class_min[x]):
            if d not in new_id:
                new_id[d] = len(new_id)
                order.append(d)
                queue.append(d)

    children = tuple(
        frozenset(new_id[d] for d in class_children[c] if d in new_id)
        for c in order
    )
    quot = Apg(children, 0)
    projection = tuple(new_id[p.class_of[u]] for u in range(g.node_count))
    return quot, projection


# --- isomorphism machinery -------------------------------------------------

def _stable_colors(
    children: list[frozenset[int]],
    parents: list[frozenset[int]],
    init: list[int],
) -> list[int]:
    """Iterated refinement by (color, child-color multiset, parent-color
    multiset) until the number of colors stops growing."""
    colors = list(init)
    ncolors = len(set(colors))
    while True:
        table: dict = {}
        nxt = [0] * len(colors)
        for u in range(len(colors)):
            sig = (
                colors[u],
                tuple(sorted(colors[v] for v in children[u])),
                tuple(sorted(colors[v] for v in parents[u])),
            )
            if sig not in table:
                table[sig] = len(table)
            nxt[u] = table[sig]
        if len(table) == ncolors:
            return nxt
        colors, ncolors = nxt, len(table)


def pointed_isomorphic(
    g1: Apg, g2: Apg, cap: int = DEFAULT_ISO_CAP
) -> Optional[dict[int, int]]:
    """Root-preserving, edge-preserving-and-reflecting bijection, or None.

    Iterated degree/class refinement prunes the backtracking; the answer
    does not depend on node numbering.
    """
    if max(g1.node_count, g2.node_count) > cap:
        raise SizeLimitExceeded(
            f"isomorphism search capped at {cap} nodes"
        )
    n = g1.node_count
    if n != g2.node_count or g1.edge_count != g2.edge_count:
        return None

    # Joint refinement over the disjoint union; both roots share a seed color.
    offset = n
    children = list(g1.children) + [
        frozenset(v + offset for v in kids) for kids in g2.children
    ]
    parents_all: list[set[int]] = [set() for _ in range(2 * n)]
    for u, kids in enumerate(children):
        for v in kids:
            parents_all[v].add(u)
    parents = [frozenset(s) for s in parents_all]
    init = [0] * (2 * n)
    init[g1.root] = 1
    init[g2.root + offset] = 1
    colors = _stable_colors(children, parents, init)

    c1 = colors[:n]
    c2 = colors[n:]
    if sorted(c1) != sorted(c2):
        return None

    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(c2[v], []).append(v)

    # Map in BFS order from the root so every new node touches mapped ones.
    order = []
    seen = {g1.root}
    queue = deque([g1.root])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in sorted(g1.children[u]):
            if v not in seen:
                seen.add(v)
                queue.append(v)

    ch1, ch2 = g1.children, g2.children
    par1 = _parent_sets(ch1)
    par2 = _parent_sets(ch2)

    fwd: dict[int, int] = {}
    used = [False] * n

    def consistent(u: int, w: int) -> bool:
        for c in ch1[u]:
            if c in fwd and fwd[c] not in ch2[w]:
                return False
        for p in par1[u]:
            if p in fwd and w not in ch2[fwd[p]]:
                return False
        for c in ch2[w]:
            pre = rev.get(c)
            if pre is not None and pre not in ch1[u]:
                return False
        for p in par2[w]:
            pre = rev.get(p)
            if pre is not None and u not in ch1[pre]:
                return False
        return True

    rev: dict[int, int] = {}

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for w in by_color.get(c1[u], ()):
            if used[w] or not consistent(u, w):
                continue
            fwd[u] = w
            rev[w] = u
            used[w] = True
            if backtrack(i + 1):
                return True
            del fwd[u]
            del rev[w]
            used[w] = False
        return False

    if backtrack(0):
        return dict(fwd)
    return None


def _parent_sets(children) -> list[set[int]]:
    pred: list[set[int]] = [set() for _ in children]
    for u, kids in enumerate(children):
        for v in kids:
            pred[v].add(u)
    return pred


# --- JSON graph format -----------------------------------------------------

def apg_from_json(data: Mapping) -> Apg:
    """Load the shared JSON graph format.

    ``{"nodes": [ids], "edges": [[from, to]], "root": id, "labels": {...}}``
    with string node ids.  Duplicate edges are rejected.
    """
    names = list(data["nodes"])
    if len(set(names)) != len(names):
        raise ValueError("duplicate node ids")
    index = {name: i for i, name in enumerate(names)}
    children: list[set[int]] = [set() for _ in names]
    seen_edges = set()
    for a, b in data["edges"]:
        if (a, b) in seen_edges:
            raise ValueError(f"duplicate edge {a!r}->{b!r}")
        seen_edges.add((a, b))
        if a not in index or b not in index:
            raise ValueError(f"edge {a!r}->{b!r} mentions unknown node")
        children[index[a]].add(index[b])
    root = data["root"]
    if root not in index:
        raise ValueError(f"unknown root {root!r}")
    labels = {index[k]: v for k, v in data.get("labels", {}).items()}
    return Apg(tuple(frozenset(s) for s in children), index[root], labels)


def apg_to_json(g: Apg) -> dict:
    names = [str(u) for u in range(g.node_count)]
    edges = [
        [names[u], names[v]]
        for u in range(g.node_count)
        for v in sorted(g.children[u])
    ]
    out: dict = {"nodes": names, "edges": edges, "root": names[g.root]}
    if g.labels:
        out["labels"] = {names[u]: lab for u, lab in sorted(g.labels.items())}
    return out
