"""Kernelization pipeline: degree shortcuts, the chain reduction rule, the
path multigraph, the parallel-chain shortcut, and solution lifting.

The pipeline is certificate-driven: a shortcut only fires when it holds an
actual cycle packing in hand, so configured constants influence reporting
but never correctness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cpp import CppSolution, Multiplicities, solve_cpp
from .cycles import Cycle, CyclePacking, greedy_cycle_packing
from .graph import (
    Edge,
    GraphError,
    MultiGraph,
    Solution,
    Walk,
    bypass,
    degree_classes,
    is_connected,
    verify_solution,
)
from .walks import split_into_k_walks


@dataclass(frozen=True)
class KernelConstants:
    """Reporting thresholds; c2 defaults to the consistency bound from c1."""

    c: float = 8.0
    c1: float = 9.0
    c2: float | None = None

    def __post_init__(self) -> None:
        if self.c2 is None:
            object.__setattr__(self, "c2", self.c2_lower_bound())
        if self.c <= 0 or self.c1 <= 0 or self.c2 <= 0:  # type: ignore[operator]
            raise GraphError("kernel constants must be positive")
        if self.c2 + 1e-9 < self.c2_lower_bound():  # type: ignore[operator]
            raise GraphError(
                f"c2={self.c2} below the consistency bound {self.c2_lower_bound():.4f}"
            )

    def c2_lower_bound(self) -> float:
        return 2 * self.c1 + 4 + 2 * math.log2(self.c1) + 2


DEFAULT_CONSTANTS = KernelConstants()


@dataclass(frozen=True)
class Chain:
    """Maximal path whose internal vertices all have degree 2.

    Edges are ordered from anchor u to anchor v; u == v for a chain closed on
    a single anchor.  A direct edge between anchors is a chain with no
    internal vertices.
    """

    u: int
    v: int
    internal: tuple[int, ...]
    edges: tuple[int, ...]

    def weight(self, g: MultiGraph) -> int:
        return sum(g.edge(eid).weight for eid in self.edges)


def find_chains(g: MultiGraph) -> list[Chain]:
    """All anchor-to-anchor chains; empty when the graph is a bare cycle."""
    anchors = sorted(v for v in g.vertices() if g.degree(v) not in (0, 2))
    chains: list[Chain] = []
    used: set[int] = set()
    for a in anchors:
        for start in g.adjacency[a]:
            if start.id in used:
                continue
            ids = [start.id]
            internal: list[int] = []
            edge = start
            cur = edge.other(a)
            while g.degree(cur) == 2:
                internal.append(cur)
                e1, e2 = g.adjacency[cur]
                edge = e2 if e1.id == edge.id else e1
                ids.append(edge.id)
                cur = edge.other(cur)
            used.update(ids)
            chains.append(Chain(a, cur, tuple(internal), tuple(ids)))
    return chains


def is_bare_cycle(g: MultiGraph) -> bool:
    """True when every non-isolated vertex has degree exactly 2 (g connected)."""
    degs = [g.degree(v) for v in g.vertices() if g.degree(v) > 0]
    return bool(degs) and all(d == 2 for d in degs)


@dataclass(frozen=True)
class ExpansionMap:
    """How each kernel edge expands into a degree-2 chain of original edges.

    Each expansion list is oriented from the kernel edge's u endpoint; the
    lists partition the original edge set.  vertex_to_original translates
    kernel vertex indices after isolated-vertex compaction.
    """

    original: MultiGraph
    kernel: MultiGraph
    expansions: dict[int, tuple[int, ...]]
    vertex_to_original: dict[int, int]

    def validate(self) -> None:
        seen: list[int] = []
        for ke in self.kernel.edges:
            ids = self.expansions[ke.id]
            seen.extend(ids)
            verts = _chain_vertices(self.original, ids, self.vertex_to_original[ke.u])
            if verts[-1] != self.vertex_to_original[ke.v]:
                raise GraphError(f"expansion of kernel edge {ke.id} does not reach its v endpoint")
            if sum(self.original.edge(i).weight for i in ids) != ke.weight:
                raise GraphError(f"expansion of kernel edge {ke.id} has wrong total weight")
        if sorted(seen) != sorted(self.original.edge_by_id):
            raise GraphError("expansions do not partition the original edge set")


def _chain_vertices(g: MultiGraph, ids: tuple[int, ...], start: int) -> list[int]:
    verts = [start]
    cur = start
    for eid in ids:
        cur = g.edge(eid).other(cur)
        verts.append(cur)
    return verts


def _oriented(g: MultiGraph, expansions: dict[int, tuple[int, ...]], eid: int, frm: int):
    e = g.edge(eid)
    ids = expansions[eid]
    return ids if frm == e.u else tuple(reversed(ids))


def _min_weight_preserved(g: MultiGraph, id_a: int, id_b: int) -> bool:
    cur = g.min_weight()
    merged = g.edge(id_a).weight + g.edge(id_b).weight
    others = min((e.weight for e in g.edges if e.id not in (id_a, id_b)), default=merged)
    return min(others, merged) == cur


def apply_reduction_rule(g: MultiGraph, k: int) -> tuple[MultiGraph, ExpansionMap]:
    """Bypass interior chain vertices until no chain has more than k internal
    vertices, always choosing a vertex whose bypass keeps the minimum edge
    weight unchanged.

    Interior positions (2..r-1 along the chain) are preferred; if the unique
    minimum-weight edge pins all of them, the end positions are tried under
    the same min-weight guard.  A chain is skipped only when every position
    would change the minimum.
    """
    if k < 1:
        raise GraphError(f"k must be >= 1, got {k}")
    if not is_connected(g):
        raise GraphError("graph must be connected")
    work = g
    expansions: dict[int, tuple[int, ...]] = {e.id: (e.id,) for e in g.edges}

    def do_bypass(vertex: int) -> None:
        nonlocal work, expansions
        res = bypass(work, vertex)
        ea = work.edge(res.replaced[0])
        eb = work.edge(res.replaced[1])
        a = ea.other(vertex)
        first = _oriented(work, expansions, ea.id, a)
        second = _oriented(work, expansions, eb.id, vertex)
        del expansions[ea.id]
        del expansions[eb.id]
        expansions[res.new_edge_id] = first + second
        work = res.graph

    while True:
        progressed = False
        if is_bare_cycle(work):
            # any vertex may serve as an interior position of a suitable path
            while _active_count(work) > k + 2:
                cand = next(
                    (
                        v
                        for v in sorted(work.vertices())
                        if work.degree(v) == 2
                        and _min_preserved_at(work, v)
                    ),
                    None,
                )
                if cand is None:
                    break
                do_bypass(cand)
            break
        for chain in sorted(find_chains(work), key=lambda c: c.edges[0]):
            r = len(chain.internal)
            if r <= k:
                continue
            pos = _choose_position(work, chain)
            if pos is None:
                continue
            do_bypass(chain.internal[pos])
            progressed = True
            break
        if not progressed:
            break
    return work, ExpansionMap(
        original=g,
        kernel=work,
        expansions=expansions,
        vertex_to_original={v: v for v in work.vertices()},
    )


def _active_count(g: MultiGraph) -> int:
    return sum(1 for v in g.vertices() if g.degree(v) > 0)


def _min_preserved_at(g: MultiGraph, vertex: int) -> bool:
    e1, e2 = g.adjacency[vertex]
    return e1.other(vertex) != e2.other(vertex) and _min_weight_preserved(g, e1.id, e2.id)


def _choose_position(g: MultiGraph, chain: Chain) -> int | None:
    r = len(chain.internal)
    primary = list(range(1, r - 1))
    fallback = [i for i in range(r) if i not in primary]
    for i in primary + fallback:
        vertex = chain.internal[i]
        e1, e2 = g.adjacency[vertex]
        if e1.other(vertex) == e2.other(vertex):
            continue
        if _min_weight_preserved(g, chain.edges[i], chain.edges[i + 1]):
            return i
    return None


@dataclass(frozen=True)
class PathMultigraph:
    """Chain structure of a graph: one h-edge per open anchor-to-anchor chain.

    Chains closed on a single anchor cannot be represented as multigraph
    edges (loops are rejected), so they are reported separately.
    """

    h: MultiGraph
    chain_for_edge: dict[int, Chain]
    loop_chains: tuple[Chain, ...]
    anchor_of: dict[int, int]
    h_vertex_of: dict[int, int]


def build_path_multigraph(g: MultiGraph) -> PathMultigraph:
    if is_bare_cycle(g) or not g.edges:
        raise GraphError("path multigraph undefined: no vertex of degree != 2")
    anchors = sorted(v for v in g.vertices() if g.degree(v) not in (0, 2))
    h_vertex_of = {a: i + 1 for i, a in enumerate(anchors)}
    anchor_of = {i: a for a, i in h_vertex_of.items()}
    chains = find_chains(g)
    open_chains = sorted(
        (c for c in chains if c.u != c.v),
        key=lambda c: (h_vertex_of[c.u], h_vertex_of[c.v], c.edges[0]),
    )
    loops = tuple(c for c in chains if c.u == c.v)
    h_edges = []
    chain_for_edge = {}
    for hid, c in enumerate(open_chains, start=1):
        h_edges.append(Edge(hid, h_vertex_of[c.u], h_vertex_of[c.v], c.weight(g)))
        chain_for_edge[hid] = c
    h = MultiGraph(len(anchors), tuple(h_edges))
    return PathMultigraph(h, chain_for_edge, loops, anchor_of, h_vertex_of)


def _two_cycle(e: Edge) -> Cycle:
    return Cycle((e.u, e.v), (e.id, e.id))


def pendant_shortcut(
    g: MultiGraph, k: int, cpp: CppSolution | None = None
) -> Solution | None:
    """If at least k distinct pendant edges exist, every one is doubled in an
    optimal single-walk cover; their 2-cycles split that cover into k walks
    at the single-walk optimum."""
    dc = degree_classes(g)
    if len(dc.v1) < k:
        return None
    pendant_edges: list[Edge] = []
    seen: set[int] = set()
    for v in sorted(dc.v1):
        e = g.adjacency[v][0]
        if e.id not in seen:
            seen.add(e.id)
            pendant_edges.append(e)
    if len(pendant_edges) < k:
        return None
    if cpp is None:
        cpp = solve_cpp(g)
    packing = CyclePacking(tuple(_two_cycle(e) for e in pendant_edges[:k]))
    return split_into_k_walks(cpp.multiplicities, packing)


def _stripped_core_cycles(g: MultiGraph, k: int) -> list[Cycle]:
    """Greedy cycles found after stripping degree-1 vertices to a fixed point
    and suppressing degree-2 vertices, mapped back to cycles of g."""
    edges = {e.id: e for e in g.edges}
    expansions: dict[int, tuple[int, ...]] = {e.id: (e.id,) for e in g.edges}
    next_id = g.max_edge_id() + 1

    def degrees() -> dict[int, list[Edge]]:
        adj: dict[int, list[Edge]] = {}
        for e in edges.values():
            adj.setdefault(e.u, []).append(e)
            adj.setdefault(e.v, []).append(e)
        return adj

    while True:
        adj = degrees()
        leaf = next((v for v in sorted(adj) if len(adj[v]) == 1), None)
        if leaf is not None:
            e = adj[leaf][0]
            del edges[e.id]
            del expansions[e.id]
            continue
        mergeable = None
        for v in sorted(adj):
            if len(adj[v]) == 2:
                e1, e2 = sorted(adj[v], key=lambda e: e.id)
                if e1.other(v) != e2.other(v):
                    mergeable = (v, e1, e2)
                    break
        if mergeable is None:
            break
        v, e1, e2 = mergeable
        a, b = e1.other(v), e2.other(v)
        # expansion lists stay oriented from the synthetic edge's u endpoint,
        # mirroring the bypass convention
        o1 = expansions[e1.id] if e1.u == a else tuple(reversed(expansions[e1.id]))
        o2 = expansions[e2.id] if e2.u == v else tuple(reversed(expansions[e2.id]))
        merged = Edge(next_id, a, b, e1.weight + e2.weight)
        del edges[e1.id], edges[e2.id], expansions[e1.id], expansions[e2.id]
        edges[next_id] = merged
        expansions[next_id] = o1 + o2
        next_id += 1

    if not edges:
        return []
    core = MultiGraph(g.vertex_count, tuple(sorted(edges.values(), key=lambda e: e.id)))
    packing = greedy_cycle_packing(Multiplicities.uniform(core), k)
    out: list[Cycle] = []
    for cyc in packing.cycles:
        verts: list[int] = []
        ids: list[int] = []
        r = len(cyc.edges)
        for i in range(r):
            frm = cyc.vertices[i]
            rec = core.edge(cyc.edges[i])
            oriented = expansions[rec.id] if frm == rec.u else tuple(reversed(expansions[rec.id]))
            chain_verts = _chain_vertices(g, oriented, frm)
            verts.extend(chain_verts[:-1])
            ids.extend(oriented)
        out.append(Cycle(tuple(verts), tuple(ids)))
    return out


def packing_shortcut(
    g: MultiGraph, k: int, cpp: CppSolution | None = None
) -> Solution | None:
    """Try to certify k disjoint cycles in the optimal cover's multigraph:
    one 2-cycle per duplicated join edge, then greedy on what remains, then
    greedy on the degree-stripped core of g.  Fires at the single-walk
    optimum whenever k cycles are found."""
    if cpp is None:
        cpp = solve_cpp(g)
    m = cpp.multiplicities
    cycles: list[Cycle] = [_two_cycle(g.edge(eid)) for eid in sorted(cpp.join)]
    if len(cycles) >= k:
        return split_into_k_walks(m, CyclePacking(tuple(cycles[:k])))
    residual = m.without(CyclePacking(tuple(cycles)).edge_multiset())
    cycles.extend(greedy_cycle_packing(residual, k - len(cycles)).cycles)
    if len(cycles) >= k:
        return split_into_k_walks(m, CyclePacking(tuple(cycles[:k])))
    core_cycles = _stripped_core_cycles(g, k)
    if len(core_cycles) >= k:
        return split_into_k_walks(m, CyclePacking(tuple(core_cycles[:k])))
    return None


def parallel_edge_shortcut(g: MultiGraph, pm: PathMultigraph, k: int) -> CyclePacking | None:
    """k disjoint cycles of g obtained by pairing up 2k parallel chains."""
    groups: dict[tuple[int, int], list[int]] = {}
    for hid, c in pm.chain_for_edge.items():
        key = tuple(sorted((c.u, c.v)))  # type: ignore[assignment]
        groups.setdefault(key, []).append(hid)
    for key in sorted(groups):
        hids = sorted(groups[key])
        if len(hids) < 2 * k:
            continue
        cycles = []
        for i in range(k):
            c1 = pm.chain_for_edge[hids[2 * i]]
            c2 = pm.chain_for_edge[hids[2 * i + 1]]
            a, b = c1.u, c1.v
            verts = [a, *c1.internal, b]
            ids = list(c1.edges)
            if c2.u == b:
                back_ids = list(c2.edges)
                back_internal = list(c2.internal)
            else:
                back_ids = list(reversed(c2.edges))
                back_internal = list(reversed(c2.internal))
            verts.extend(back_internal)
            ids.extend(back_ids)
            cycles.append(Cycle(tuple(verts), tuple(ids)))
        return CyclePacking(tuple(cycles))
    return None


@dataclass(frozen=True)
class KernelReport:
    k: int
    fired: str | None
    v1: int
    v2: int
    v3plus: int
    bare_cycle: bool
    h_edges: int | None
    max_parallel: int | None
    max_chain_internal: int | None
    blocked_chains: int
    dropped_vertices: int
    v1_threshold: float
    v3_threshold: float
    flag_threshold: float
    h_threshold: float
    exceeds_flag: bool

    def lines(self) -> list[str]:
        items = [
            f"k={self.k}",
            f"fired={self.fired or 'none'}",
            f"v1={self.v1}",
            f"v2={self.v2}",
            f"v3plus={self.v3plus}",
            f"bare_cycle={int(self.bare_cycle)}",
            f"h_edges={self.h_edges if self.h_edges is not None else '-'}",
            f"max_parallel={self.max_parallel if self.max_parallel is not None else '-'}",
            f"max_chain_internal={self.max_chain_internal if self.max_chain_internal is not None else '-'}",
            f"blocked_chains={self.blocked_chains}",
            f"dropped_vertices={self.dropped_vertices}",
            f"v1_threshold={self.v1_threshold:g}",
            f"v3_threshold={self.v3_threshold:g}",
            f"flag_threshold={self.flag_threshold:g}",
            f"h_threshold={self.h_threshold:g}",
            f"exceeds_flag={int(self.exceeds_flag)}",
        ]
        return [" ".join(items)]


@dataclass(frozen=True)
class Solved:
    solution: Solution
    method: str
    cpp_weight: int
    report: KernelReport


@dataclass(frozen=True)
class Reduced:
    expansion: ExpansionMap
    k: int
    report: KernelReport

    @property
    def kernel(self) -> MultiGraph:
        return self.expansion.kernel


KernelOutcome = Solved | Reduced


def _build_report(
    g: MultiGraph,
    k: int,
    consts: KernelConstants,
    fired: str | None,
    pm: PathMultigraph | None,
    dropped: int,
) -> KernelReport:
    dc = degree_classes(g)
    bare = is_bare_cycle(g)
    chains = find_chains(g)
    max_internal = max((len(c.internal) for c in chains), default=None)
    if bare:
        max_internal = max(_active_count(g) - 2, 0)
    h_edges = None
    max_par = None
    if pm is not None:
        h_edges = len(pm.h.edges)
        counts: dict[tuple[int, int], int] = {}
        for e in pm.h.edges:
            key = tuple(sorted((e.u, e.v)))  # type: ignore[assignment]
            counts[key] = counts.get(key, 0) + 1
        max_par = max(counts.values(), default=0)
    logk = math.log2(k) if k > 1 else 0.0
    blocked = sum(1 for c in chains if len(c.internal) > k)
    return KernelReport(
        k=k,
        fired=fired,
        v1=len(dc.v1),
        v2=len(dc.v2),
        v3plus=len(dc.v3plus),
        bare_cycle=bare,
        h_edges=h_edges,
        max_parallel=max_par,
        max_chain_internal=max_internal,
        blocked_chains=blocked,
        dropped_vertices=dropped,
        v1_threshold=float(k),
        v3_threshold=consts.c * k * logk + k,
        flag_threshold=consts.c1 * k * logk,
        h_threshold=consts.c2 * k * logk,  # type: ignore[operator]
        exceeds_flag=(len(dc.v1) + len(dc.v3plus)) > consts.c1 * k * logk,
    )


def _compact(em: ExpansionMap) -> tuple[ExpansionMap, int]:
    """Drop isolated vertices and renumber vertices/edges for emission."""
    work = em.kernel
    live = sorted(v for v in work.vertices() if work.degree(v) > 0)
    old_to_new = {v: i + 1 for i, v in enumerate(live)}
    dropped = work.vertex_count - len(live)
    new_edges = []
    expansions = {}
    for new_id, e in enumerate(sorted(work.edges, key=lambda e: e.id), start=1):
        new_edges.append(Edge(new_id, old_to_new[e.u], old_to_new[e.v], e.weight))
        expansions[new_id] = em.expansions[e.id]
    kernel = MultiGraph(len(live), tuple(new_edges))
    vmap = {old_to_new[v]: em.vertex_to_original[v] for v in live}
    return (
        ExpansionMap(em.original, kernel, expansions, vmap),
        dropped,
    )


def kernelize(
    g: MultiGraph, k: int, consts: KernelConstants = DEFAULT_CONSTANTS
) -> KernelOutcome:
    """Run the full pipeline: pendant shortcut, packing shortcut, chain
    reduction, then the parallel-chain shortcut on the reduced graph; if
    nothing fires, return the reduced instance with an expansion map."""
    if k < 1:
        raise GraphError(f"k must be >= 1, got {k}")
    if not g.edges:
        raise GraphError("graph has no edges")
    if not is_connected(g):
        raise GraphError("graph must be connected")

    cpp = solve_cpp(g)
    sol = pendant_shortcut(g, k, cpp=cpp)
    if sol is not None:
        report = _build_report(g, k, consts, "pendant", None, 0)
        return Solved(sol, "pendant", cpp.weight, report)
    sol = packing_shortcut(g, k, cpp=cpp)
    if sol is not None:
        report = _build_report(g, k, consts, "packing", None, 0)
        return Solved(sol, "packing", cpp.weight, report)

    work, em = apply_reduction_rule(g, k)

    if not is_bare_cycle(work):
        cpp_w = solve_cpp(work)
        sol = packing_shortcut(work, k, cpp=cpp_w)
        if sol is not None:
            lifted = lift_solution(em, sol)
            report = _build_report(work, k, consts, "packing", None, 0)
            return Solved(lifted, "packing", cpp_w.weight, report)
        pm = build_path_multigraph(work)
        packing = parallel_edge_shortcut(work, pm, k)
        if packing is not None:
            sol = split_into_k_walks(cpp_w.multiplicities, packing)
            lifted = lift_solution(em, sol)
            report = _build_report(work, k, consts, "parallel", pm, 0)
            return Solved(lifted, "parallel", cpp_w.weight, report)
    else:
        pm = None

    compacted, dropped = _compact(em)
    pm_final = None if is_bare_cycle(compacted.kernel) else build_path_multigraph(compacted.kernel)
    report = _build_report(compacted.kernel, k, consts, None, pm_final, dropped)
    return Reduced(compacted, k, report)


def lift_solution(em: ExpansionMap, s: Solution) -> Solution:
    """Replace every kernel-edge traversal by its oriented original chain."""
    verify_solution(em.kernel, len(s.walks), s)
    lifted = []
    for walk in s.walks:
        steps: list[tuple[int, int]] = []
        r = len(walk.steps)
        for i, (v, eid) in enumerate(walk.steps):
            rec = em.kernel.edge(eid)
            ids = em.expansions.get(eid)
            if ids is None:
                raise GraphError(f"no expansion recorded for kernel edge {eid}")
            oriented = ids if v == rec.u else tuple(reversed(ids))
            cur = em.vertex_to_original[v]
            for oid in oriented:
                steps.append((cur, oid))
                cur = em.original.edge(oid).other(cur)
            nxt = walk.steps[(i + 1) % r][0]
            if cur != em.vertex_to_original[nxt]:
                raise GraphError(f"expansion of edge {eid} does not reconnect the walk")
        lifted.append(tuple(steps))
    walks = tuple(Walk(st) for st in lifted)
    total = sum(w.weight(em.original) for w in walks)
    if total != s.total_weight:
        raise GraphError(f"lift changed total weight {s.total_weight} -> {total}")
    return Solution(walks, total)
