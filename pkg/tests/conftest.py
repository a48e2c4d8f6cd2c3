"""Shared brute-force oracles and instance builders for the test suite.

The oracles here enumerate raw search spaces and never call the code paths
they are used to check.
"""

from __future__ import annotations

import random
from itertools import combinations, product

from kpostman.generators import named_graph, random_connected_graph
from kpostman.graph import MultiGraph

__all__ = [
    "named_graph",
    "random_connected_graph",
    "cpp_enumeration_minimum",
    "join_enumeration_minimum",
    "all_simple_cycles",
    "max_disjoint_from_list",
    "random_small_graphs",
]


def cpp_enumeration_minimum(g: MultiGraph) -> int:
    """Minimum weight over count vectors in {1,2}^m with all degrees even."""
    edges = g.edges
    best = None
    for picks in product((1, 2), repeat=len(edges)):
        ok = True
        for v in g.vertices():
            deg = sum(c for e, c in zip(edges, picks) if v in (e.u, e.v))
            if deg % 2 != 0:
                ok = False
                break
        if not ok:
            continue
        w = sum(c * e.weight for e, c in zip(edges, picks))
        if best is None or w < best:
            best = w
    assert best is not None, "no even orientation exists; graph disconnected?"
    return best


def join_enumeration_minimum(g: MultiGraph, t: frozenset[int]) -> int:
    """Minimum weight over all edge subsets whose odd-degree set equals t."""
    best = None
    ids = [e.id for e in g.edges]
    for size in range(len(ids) + 1):
        for combo in combinations(ids, size):
            chosen = set(combo)
            odd = set()
            for v in g.vertices():
                d = sum(1 for e in g.adjacency[v] if e.id in chosen)
                if d % 2 == 1:
                    odd.add(v)
            if odd == set(t):
                w = sum(g.edge(eid).weight for eid in chosen)
                if best is None or w < best:
                    best = w
    assert best is not None
    return best


def all_simple_cycles(g: MultiGraph, counts: dict[int, int]) -> list[tuple[int, ...]]:
    """Every simple cycle of the multigraph, as a sorted edge-id multiset."""
    found: set[tuple[int, ...]] = set()
    support = [e for e in g.edges if counts.get(e.id, 0) > 0]
    for e in support:
        if counts.get(e.id, 0) >= 2:
            found.add((e.id, e.id))

        def dfs(cur, target, visited, ids):
            for f in g.adjacency[cur]:
                if counts.get(f.id, 0) < 1 or f.id in ids or f.id == e.id:
                    continue
                nxt = f.other(cur)
                if nxt == target:
                    found.add(tuple(sorted(ids + [f.id, e.id])))
                elif nxt not in visited:
                    dfs(nxt, target, visited | {nxt}, ids + [f.id])

        dfs(e.v, e.u, {e.u, e.v}, [])
    return sorted(found)


def max_disjoint_from_list(cycles: list[tuple[int, ...]], counts: dict[int, int]) -> int:
    """Max number of edge-disjoint cycles chosen from an explicit list."""

    def rec(i: int, remaining: dict[int, int]) -> int:
        if i == len(cycles):
            return 0
        best = rec(i + 1, remaining)
        cyc = cycles[i]
        usable = True
        used: dict[int, int] = {}
        for eid in cyc:
            used[eid] = used.get(eid, 0) + 1
            if used[eid] > remaining.get(eid, 0):
                usable = False
                break
        if usable:
            nxt = dict(remaining)
            for eid, c in used.items():
                nxt[eid] -= c
            best = max(best, 1 + rec(i, nxt))
        return best

    return rec(0, dict(counts))


def random_small_graphs(seed: int, trials: int, max_n=5, max_m=7, max_w=2):
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(2, max_n)
        m = rng.randint(n - 1, max_m)
        yield random_connected_graph(rng, n, m, max_weight=max_w)
