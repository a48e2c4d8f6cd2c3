"""Shortest cycles, greedy edge-disjoint packing, and an exact packing search.

Cycles live in a multigraph-with-counts: two copies of one edge form a
2-cycle, as do two parallel edges.  "Shortest" is by edge count; ties break
by total weight, then by sorted edge-id list, so results are deterministic.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass

from .cpp import Multiplicities
from .graph import Edge, GraphError, MultiGraph


@dataclass(frozen=True)
class Cycle:
    """Simple closed cycle: edges[i] joins vertices[i] to vertices[i+1 mod r]."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def edge_multiset(self) -> Counter:
        return Counter(self.edges)

    def weight(self, g: MultiGraph) -> int:
        return sum(g.edge(eid).weight for eid in self.edges)


@dataclass(frozen=True)
class CyclePacking:
    cycles: tuple[Cycle, ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def edge_multiset(self) -> Counter:
        total: Counter = Counter()
        for c in self.cycles:
            total.update(c.edges)
        return total


def check_cycle(m: Multiplicities, c: Cycle) -> None:
    """Raise unless c is a valid simple cycle within m's remaining copies."""
    r = len(c.edges)
    if r < 2 or len(c.vertices) != r:
        raise GraphError(f"cycle must have >= 2 edges and matching vertex count, got {c}")
    if len(set(c.vertices)) != r:
        raise GraphError(f"cycle repeats a vertex: {c.vertices}")
    for i, eid in enumerate(c.edges):
        e = m.base.edge(eid)
        a, b = c.vertices[i], c.vertices[(i + 1) % r]
        if {a, b} != {e.u, e.v}:
            raise GraphError(f"edge {eid} does not join {a} and {b}")
    for eid, uses in c.edge_multiset().items():
        if uses > m.count(eid):
            raise GraphError(f"cycle uses edge {eid} {uses} times, only {m.count(eid)} copies")


def check_packing(m: Multiplicities, packing: CyclePacking) -> None:
    """Raise unless the cycles are pairwise disjoint edge copies within m."""
    for c in packing.cycles:
        check_cycle(m, c)
    for eid, uses in packing.edge_multiset().items():
        if uses > m.count(eid):
            raise GraphError(f"packing uses edge {eid} {uses} times, only {m.count(eid)} copies")


def _two_cycle_candidates(m: Multiplicities) -> list[tuple[int, int, tuple[int, ...], Cycle]]:
    out = []
    support = m.support()
    by_pair: dict[frozenset[int], list[Edge]] = {}
    for e in support:
        by_pair.setdefault(e.endpoints(), []).append(e)
    for e in support:
        if m.count(e.id) >= 2:
            ids = (e.id, e.id)
            out.append((2, 2 * e.weight, ids, Cycle((e.u, e.v), ids)))
    for pair_edges in by_pair.values():
        for i, e in enumerate(pair_edges):
            for f in pair_edges[i + 1:]:
                ids = tuple(sorted((e.id, f.id)))
                out.append((2, e.weight + f.weight, ids, Cycle((e.u, e.v), ids)))
    return out


def _best_path_avoiding(g_adj, counts, e: Edge):
    """Min (hops, weight, edge-id list) simple path e.u -> e.v not using e."""
    start, goal = e.u, e.v
    best: dict[int, tuple[int, int, tuple[int, ...], tuple[int, ...]]] = {
        start: (0, 0, (), (start,))
    }
    heap = [(0, 0, (), (start,), start)]
    done: set[int] = set()
    while heap:
        hops, w, ids, verts, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == goal:
            return hops, w, ids, verts
        for f in g_adj[v]:
            if f.id == e.id or counts.get(f.id, 0) < 1:
                continue
            u = f.other(v)
            if u in done:
                continue
            cand = (hops + 1, w + f.weight, ids + (f.id,), verts + (u,))
            if u not in best or cand < best[u]:
                best[u] = cand
                heapq.heappush(heap, cand + (u,))
    return None


def shortest_cycle(m: Multiplicities) -> Cycle | None:
    """Minimum-edge-count cycle of the multigraph, or None if acyclic."""
    two = _two_cycle_candidates(m)
    if two:
        return min(two, key=lambda t: (t[0], t[1], t[2]))[3]
    # no duplicated or parallel copies remain: the support is a simple graph
    best: tuple[int, int, tuple[int, ...], Cycle] | None = None
    adj = m.base.adjacency
    for e in m.support():
        found = _best_path_avoiding(adj, m.counts, e)
        if found is None:
            continue
        hops, w, ids, verts = found
        key = (hops + 1, w + e.weight, tuple(sorted(ids + (e.id,))))
        # cycle vertices u, ..., v; closing edge e joins v back to u
        cand = Cycle(verts, ids + (e.id,))
        if best is None or key < (best[0], best[1], best[2]):
            best = (key[0], key[1], key[2], cand)
    return best[3] if best else None


def greedy_cycle_packing(m: Multiplicities, k: int) -> CyclePacking:
    """Repeatedly extract a shortest cycle, up to k cycles or until acyclic."""
    if k < 1:
        raise GraphError(f"k must be >= 1, got {k}")
    cur = m
    cycles: list[Cycle] = []
    while len(cycles) < k:
        c = shortest_cycle(cur)
        if c is None:
            break
        cycles.append(c)
        cur = cur.without(c.edge_multiset())
    return CyclePacking(tuple(cycles))


class PackingSearch:
    """Exhaustive branch over cycles through the lowest remaining edge copy.

    Memoized on (residual state, target); reusable across many count vectors
    over the same base graph.  With a target ("find at least this many") the
    returned value is capped there, which is all a feasibility test needs.
    """

    def __init__(self, base: MultiGraph):
        self.base = base
        self.adj = base.adjacency
        self.memo: dict[tuple, tuple[int, tuple[Cycle, ...]]] = {}

    def _cycles_through(self, counts: dict[int, int], e: Edge) -> list[Cycle]:
        cycles: list[Cycle] = []
        u, v = e.u, e.v

        def dfs(cur: int, verts: tuple[int, ...], ids: tuple[int, ...]) -> None:
            for f in self.adj[cur]:
                avail = counts.get(f.id, 0) - (1 if f.id == e.id else 0) - ids.count(f.id)
                if avail < 1:
                    continue
                nxt = f.other(cur)
                if nxt == u:
                    cycles.append(Cycle((u,) + verts, (e.id,) + ids + (f.id,)))
                elif nxt != v and nxt not in verts:
                    dfs(nxt, verts + (nxt,), ids + (f.id,))

        dfs(v, (v,), ())
        return cycles

    def run(self, counts: dict[int, int], target: int) -> tuple[int, tuple[Cycle, ...]]:
        state = tuple(sorted((eid, c) for eid, c in counts.items() if c > 0))
        if not state:
            return 0, ()
        live = dict(state)
        target = min(target, sum(live.values()) // 2)  # every cycle eats >= 2 copies
        if target <= 0:
            return 0, ()
        key = (state, target)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        e = self.base.edge(min(live))
        best: tuple[int, tuple[Cycle, ...]] = (0, ())
        for cyc in self._cycles_through(live, e):
            sub = dict(live)
            for eid, uses in cyc.edge_multiset().items():
                sub[eid] -= uses
            got, rest = self.run(sub, target - 1)
            if 1 + got > best[0]:
                best = (1 + got, (cyc,) + rest)
                if best[0] >= target:
                    self.memo[key] = best
                    return best
        sub = dict(live)
        del sub[e.id]
        got, rest = self.run(sub, target)
        if got > best[0]:
            best = (got, rest)
        self.memo[key] = best
        return best


def exact_max_cycle_packing(
    m: Multiplicities, size_limit: int = 14, stop_at: int | None = None
) -> tuple[int, CyclePacking]:
    """True maximum number of pairwise edge-disjoint cycles, with a witness.

    Gated by total edge copies <= size_limit.  With stop_at, the search stops
    once that many cycles are found and reports min(nu, stop_at).
    """
    copies = m.copies()
    if copies > size_limit:
        raise GraphError(f"{copies} edge copies exceed the size limit {size_limit}")
    target = copies // 2 if stop_at is None else stop_at
    nu, cycles = PackingSearch(m.base).run(
        {eid: c for eid, c in m.counts.items() if c > 0}, target
    )
    return nu, CyclePacking(cycles)
