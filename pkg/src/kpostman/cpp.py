"""Exact route-inspection (postman) solver for one walk.

Duplicating a minimum-weight join over the odd-degree vertices makes the
multigraph Eulerian; an Euler tour of the result is an optimal single closed
walk covering every edge.  The join is computed exactly: shortest paths
between odd vertices, then an optimal pairing by dynamic programming over
subsets, then the symmetric difference of the paired path edge sets.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .graph import GraphError, MultiGraph, Walk, is_connected

# pairing DP is O(2^|t| * |t|^2); beyond this the instance is not desk scale
MAX_ODD_VERTICES = 16


@dataclass(frozen=True, eq=False)
class Multiplicities:
    """Per-edge traversal counts over a base graph.

    Absent ids count 0.  The classic covering multigraph has every count
    >= 1; residual states produced while peeling cycles may drop to 0.
    """

    base: MultiGraph
    counts: Mapping[int, int]

    @classmethod
    def cover(cls, base: MultiGraph, counts: Mapping[int, int]) -> "Multiplicities":
        """Covering counts: every edge of the base graph at least once."""
        for e in base.edges:
            if counts.get(e.id, 0) < 1:
                raise GraphError(f"edge {e.id} is not covered")
        return cls(base, dict(counts))

    @classmethod
    def uniform(cls, base: MultiGraph, count: int = 1) -> "Multiplicities":
        return cls(base, {e.id: count for e in base.edges})

    def count(self, edge_id: int) -> int:
        return self.counts.get(edge_id, 0)

    def weight(self) -> int:
        return sum(self.base.edge(eid).weight * c for eid, c in self.counts.items() if c > 0)

    def copies(self) -> int:
        return sum(c for c in self.counts.values() if c > 0)

    def degree(self, vertex: int) -> int:
        return sum(self.counts.get(e.id, 0) for e in self.base.adjacency[vertex])

    def all_degrees_even(self) -> bool:
        return all(self.degree(v) % 2 == 0 for v in self.base.vertices())

    def support(self) -> list:
        return [e for e in self.base.edges if self.counts.get(e.id, 0) > 0]

    def without(self, removed: Mapping[int, int]) -> "Multiplicities":
        """Subtract edge copies; raises if more copies are removed than exist."""
        counts = dict(self.counts)
        for eid, c in removed.items():
            have = counts.get(eid, 0)
            if c > have:
                raise GraphError(f"removing {c} copies of edge {eid}, only {have} present")
            counts[eid] = have - c
        return Multiplicities(self.base, counts)

    def restrict(self, edge_ids: Iterable[int]) -> "Multiplicities":
        keep = set(edge_ids)
        return Multiplicities(self.base, {eid: c for eid, c in self.counts.items() if eid in keep})


class CppSolution(NamedTuple):
    join: frozenset[int]
    multiplicities: Multiplicities
    weight: int


def odd_vertices(g: MultiGraph) -> frozenset[int]:
    return frozenset(v for v in g.vertices() if g.degree(v) % 2 == 1)


def _shortest_paths(g: MultiGraph, source: int) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Dijkstra by (weight, hop count, edge-id sequence); deterministic."""
    best: dict[int, tuple[int, int, tuple[int, ...]]] = {source: (0, 0, ())}
    heap: list[tuple[int, int, tuple[int, ...], int]] = [(0, 0, (), source)]
    done: set[int] = set()
    while heap:
        w, hops, path, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for e in g.adjacency[v]:
            u = e.other(v)
            if u in done:
                continue
            cand = (w + e.weight, hops + 1, path + (e.id,))
            if u not in best or cand < best[u]:
                best[u] = cand
                heapq.heappush(heap, cand + (u,))
    return {v: (w, path) for v, (w, _h, path) in best.items()}


def min_weight_join(g: MultiGraph, t: Iterable[int]) -> frozenset[int]:
    """Minimum-weight edge set whose odd-degree vertices are exactly t.

    Exact for nonnegative weights: optimal pairing of t over the shortest
    path metric, joined as the symmetric difference of the path edge sets
    (overlaps cancel and can only reduce the weight).
    """
    terminals = sorted(set(t))
    if len(terminals) % 2 != 0:
        raise GraphError(f"odd-vertex set has odd size {len(terminals)}")
    if not is_connected(g):
        raise GraphError("graph must be connected")
    if not terminals:
        return frozenset()
    if len(terminals) > MAX_ODD_VERTICES:
        raise GraphError(f"more than {MAX_ODD_VERTICES} terminals; instance too large")
    paths: dict[int, dict[int, tuple[int, tuple[int, ...]]]] = {}
    for v in terminals:
        paths[v] = _shortest_paths(g, v)
        for u in terminals:
            if u != v and u not in paths[v]:
                raise GraphError(f"no path between odd vertices {v} and {u}")

    n = len(terminals)
    full = (1 << n) - 1
    memo: dict[int, int] = {full: 0}

    def pair_cost(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        i = next(b for b in range(n) if not mask & (1 << b))
        best = None
        for j in range(i + 1, n):
            if mask & (1 << j):
                continue
            c = paths[terminals[i]][terminals[j]][0] + pair_cost(mask | (1 << i) | (1 << j))
            if best is None or c < best:
                best = c
        memo[mask] = best  # type: ignore[assignment]
        return memo[mask]

    pair_cost(0)
    join: set[int] = set()
    mask = 0
    while mask != full:
        i = next(b for b in range(n) if not mask & (1 << b))
        partner = None
        for j in range(i + 1, n):
            if mask & (1 << j):
                continue
            rest = mask | (1 << i) | (1 << j)
            if paths[terminals[i]][terminals[j]][0] + memo[rest] == memo[mask]:
                partner = j
                break
        assert partner is not None
        join ^= set(paths[terminals[i]][terminals[partner]][1])
        mask |= (1 << i) | (1 << partner)
    return frozenset(join)


def solve_cpp(g: MultiGraph) -> CppSolution:
    """Optimal single-walk cover: duplicate a minimum join over odd vertices.

    Returns the join, the covering counts (1 outside the join, 2 on it) and
    the optimal weight total(g) + weight(join).
    """
    if not g.edges:
        raise GraphError("graph has no edges")
    if not is_connected(g):
        raise GraphError("graph must be connected")
    join = min_weight_join(g, odd_vertices(g))
    counts = {e.id: (2 if e.id in join else 1) for e in g.edges}
    weight = g.total_weight() + sum(g.edge(eid).weight for eid in join)
    return CppSolution(join, Multiplicities.cover(g, counts), weight)


def euler_tour(m: Multiplicities, start: int) -> Walk:
    """Closed walk using each edge copy of m exactly once, from start.

    m must span a single component with all degrees even; at each vertex the
    lowest-id available copy is taken, so tours are deterministic.
    """
    g = m.base
    for v in g.vertices():
        if m.degree(v) % 2 != 0:
            raise GraphError(f"vertex {v} has odd degree {m.degree(v)}")
    if m.degree(start) == 0:
        raise GraphError(f"start vertex {start} not in the traversed component")
    remaining = {eid: c for eid, c in m.counts.items() if c > 0}

    def next_edge(v: int):
        for e in g.adjacency[v]:
            if remaining.get(e.id, 0) > 0:
                return e
        return None

    stack: list[tuple[int, int | None]] = [(start, None)]
    popped: list[tuple[int, int | None]] = []
    while stack:
        v, via = stack[-1]
        e = next_edge(v)
        if e is None:
            popped.append(stack.pop())
        else:
            remaining[e.id] -= 1
            stack.append((e.other(v), e.id))
    if any(c > 0 for c in remaining.values()):
        raise GraphError("multigraph spans more than one component")
    popped.reverse()
    steps = tuple(
        (popped[i][0], popped[i + 1][1]) for i in range(len(popped) - 1)
    )
    assert all(e is not None for _, e in steps)
    return Walk(steps)  # type: ignore[arg-type]
