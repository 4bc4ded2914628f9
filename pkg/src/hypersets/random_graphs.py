"""Seeded random APG generators, shared by the test suites and the CLI."""

from __future__ import annotations

import random

from .apg import Apg, trim_to_accessible

_EDGE_COUNTS = (0, 0, 1, 1, 1, 2, 2, 3)


def random_apg(rng: random.Random, max_nodes: int) -> Apg:
    """Accessible part of a uniform sparse digraph on <= max_nodes nodes."""
    n = rng.randint(1, max_nodes)
    children = {
        u: sorted(rng.sample(range(n), min(rng.choice(_EDGE_COUNTS), n)))
        for u in range(n)
    }
    g, _ = trim_to_accessible(children, 0)
    return g


def random_well_founded_apg(rng: random.Random, max_nodes: int) -> Apg:
    """Like random_apg but edges only point to higher ids, so no cycles."""
    n = rng.randint(1, max_nodes)
    children = {}
    for u in range(n):
        pool = range(u + 1, n)
        k = min(rng.choice(_EDGE_COUNTS), len(pool))
        children[u] = sorted(rng.sample(pool, k))
    g, _ = trim_to_accessible(children, 0)
    return g


def random_performance_graph(rng: random.Random, nodes: int, edges: int) -> Apg:
    """A fully accessible graph with exactly the requested edge count:
    a random spanning backbone plus uniform extra edges."""
    if edges < nodes - 1:
        raise ValueError("need at least nodes-1 edges for accessibility")
    children: list[set[int]] = [set() for _ in range(nodes)]
    seen = set()
    for v in range(1, nodes):
        u = rng.randrange(v)
        children[u].add(v)
        seen.add((u, v))
    while len(seen) < edges:
        u = rng.randrange(nodes)
        v = rng.randrange(nodes)
        if (u, v) not in seen:
            seen.add((u, v))
            children[u].add(v)
    return Apg(tuple(frozenset(c) for c in children), 0)
