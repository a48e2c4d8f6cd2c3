"""Weighted undirected multigraphs with stable edge identities.

Vertices are 1-based integers, edge ids are 1-based and never reused within
one graph value.  Graphs are immutable; every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

MAX_TOTAL_WEIGHT = 2**63 - 1


class GraphError(ValueError):
    """Invalid graph construction or violated operation precondition."""


class ParseError(GraphError):
    """Malformed instance or solution text."""


class VerificationError(GraphError):
    """A claimed solution fails verification."""


class Edge(NamedTuple):
    id: int
    u: int
    v: int
    weight: int

    def other(self, vertex: int) -> int:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise GraphError(f"vertex {vertex} is not an endpoint of edge {self.id}")

    def endpoints(self) -> frozenset[int]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph; parallel edges allowed, self-loops rejected."""

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise GraphError("vertex count must be nonnegative")
        seen: set[int] = set()
        for e in self.edges:
            if not (1 <= e.u <= self.vertex_count and 1 <= e.v <= self.vertex_count):
                raise GraphError(f"edge {e.id}: vertex out of range 1..{self.vertex_count}")
            if e.u == e.v:
                raise GraphError(f"edge {e.id}: loop edge {e.u}-{e.v} not allowed")
            if e.weight < 0:
                raise GraphError(f"edge {e.id}: negative weight {e.weight}")
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id}")
            seen.add(e.id)

    @classmethod
    def from_edges(cls, vertex_count: int, triples: Iterable[tuple[int, int, int]]) -> "MultiGraph":
        """Build a graph assigning edge ids 1..m in iteration order."""
        edges = tuple(Edge(i, u, v, w) for i, (u, v, w) in enumerate(triples, start=1))
        return cls(vertex_count, edges)

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def adjacency(self) -> dict[int, tuple[Edge, ...]]:
        """Incident edges per vertex, ascending edge id."""
        adj: dict[int, list[Edge]] = {v: [] for v in range(1, self.vertex_count + 1)}
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        return {v: tuple(es) for v, es in adj.items()}

    def edge(self, edge_id: int) -> Edge:
        try:
            return self.edge_by_id[edge_id]
        except KeyError:
            raise GraphError(f"no edge with id {edge_id}") from None

    def degree(self, vertex: int) -> int:
        return len(self.adjacency[vertex])

    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges)

    def max_edge_id(self) -> int:
        return max((e.id for e in self.edges), default=0)

    def min_weight(self) -> int:
        """Smallest edge weight; graphs queried here always carry an edge."""
        if not self.edges:
            raise GraphError("graph has no edges")
        return min(e.weight for e in self.edges)

    def min_weight_edge(self) -> Edge:
        """Lowest-id edge attaining the minimum weight (deterministic choice)."""
        mw = self.min_weight()
        return min((e for e in self.edges if e.weight == mw), key=lambda e: e.id)


@dataclass(frozen=True)
class Instance:
    graph: MultiGraph
    k: int
    p: int | None = None


@dataclass(frozen=True)
class DegreeClasses:
    """Partition of the non-isolated vertices by degree 1 / 2 / >= 3."""

    v1: frozenset[int]
    v2: frozenset[int]
    v3plus: frozenset[int]


@dataclass(frozen=True)
class Walk:
    """Closed walk: cyclic (vertex, edge_id) steps; step i leaves its vertex
    along its edge and arrives at step i+1's vertex."""

    steps: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.steps)

    def weight(self, g: MultiGraph) -> int:
        return sum(g.edge(e).weight for _, e in self.steps)


@dataclass(frozen=True)
class Solution:
    walks: tuple[Walk, ...]
    total_weight: int


class BypassResult(NamedTuple):
    graph: MultiGraph
    new_edge_id: int
    replaced: tuple[int, int]


def degree_classes(g: MultiGraph) -> DegreeClasses:
    v1, v2, v3 = [], [], []
    for v in g.vertices():
        d = g.degree(v)
        if d == 1:
            v1.append(v)
        elif d == 2:
            v2.append(v)
        elif d >= 3:
            v3.append(v)
    return DegreeClasses(frozenset(v1), frozenset(v2), frozenset(v3))


def bypass(g: MultiGraph, vertex: int) -> BypassResult:
    """Replace a degree-2 vertex's two edges by one edge with summed weight.

    The bypassed vertex stays in the graph as an isolated index so that
    expansion maps remain stable.  The replaced pair is reported in traversal
    order: first the edge incident to the new edge's u endpoint.
    """
    inc = g.adjacency[vertex]
    if len(inc) != 2:
        raise GraphError(f"bypass needs degree exactly 2, vertex {vertex} has degree {len(inc)}")
    e1, e2 = inc
    a, b = e1.other(vertex), e2.other(vertex)
    if a == b:
        raise GraphError(f"bypassing {vertex} would create a loop at {a}")
    new_id = g.max_edge_id() + 1
    new_edge = Edge(new_id, a, b, e1.weight + e2.weight)
    edges = tuple(e for e in g.edges if e.id not in (e1.id, e2.id)) + (new_edge,)
    return BypassResult(MultiGraph(g.vertex_count, edges), new_id, (e1.id, e2.id))


def is_connected(g: MultiGraph) -> bool:
    """True iff all vertices of degree >= 1 lie in one component."""
    active = [v for v in g.vertices() if g.degree(v) > 0]
    if not active:
        return True
    seen = {active[0]}
    stack = [active[0]]
    while stack:
        v = stack.pop()
        for e in g.adjacency[v]:
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return all(v in seen for v in active)


def verify_solution(g: MultiGraph, k: int, s: Solution) -> int:
    """Check all solution invariants against g; return the recomputed weight.

    Raises VerificationError on: wrong walk count, empty walk, unknown edge,
    broken walk adjacency, open walk, uncovered edge, weight mismatch.
    """
    if len(s.walks) != k:
        raise VerificationError(f"expected {k} walks, got {len(s.walks)}")
    covered: set[int] = set()
    weight = 0
    for wi, walk in enumerate(s.walks):
        if not walk.steps:
            raise VerificationError(f"walk {wi} is empty")
        r = len(walk.steps)
        for i, (v, eid) in enumerate(walk.steps):
            e = g.edge(eid)
            nxt = walk.steps[(i + 1) % r][0]
            if v not in (e.u, e.v) or nxt != e.other(v):
                raise VerificationError(
                    f"walk {wi} step {i}: edge {eid} does not join {v} to {nxt}"
                )
            covered.add(eid)
            weight += e.weight
    missing = set(g.edge_by_id) - covered
    if missing:
        raise VerificationError(f"uncovered edges: {sorted(missing)}")
    if weight != s.total_weight:
        raise VerificationError(f"stated weight {s.total_weight} != recomputed {weight}")
    return weight


def parse_instance(text: str | bytes) -> Instance:
    """Parse the line-oriented instance format.

    Header ``p kcpp <n> <m> <k>`` with an optional fifth token ``<p>``;
    exactly m edge records ``e <u> <v> <w>``; ``#`` starts a comment line.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"instance is not ASCII: {exc}") from None
    header: tuple[int, int, int, int | None] | None = None
    triples: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if header is not None:
                raise ParseError(f"line {lineno}: duplicate header")
            if len(tok) not in (5, 6) or tok[1] != "kcpp":
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m, k = int(tok[2]), int(tok[3]), int(tok[4])
                p = int(tok[5]) if len(tok) == 6 else None
            except ValueError:
                raise ParseError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or m < 0 or k < 1 or (p is not None and p < 0):
                raise ParseError(f"line {lineno}: header values out of range")
            header = (n, m, k, p)
        elif tok[0] == "e":
            if header is None:
                raise ParseError(f"line {lineno}: edge record before header")
            if len(tok) != 4:
                raise ParseError(f"line {lineno}: malformed edge record {line!r}")
            try:
                u, v, w = int(tok[1]), int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed edge record {line!r}") from None
            if u == v:
                raise ParseError(f"line {lineno}: loop edge {u}-{v}")
            if w < 0:
                raise ParseError(f"line {lineno}: negative weight {w}")
            if not (1 <= u <= header[0] and 1 <= v <= header[0]):
                raise ParseError(f"line {lineno}: vertex index out of range")
            triples.append((u, v, w))
        else:
            raise ParseError(f"line {lineno}: unknown record tag {tok[0]!r}")
    if header is None:
        raise ParseError("missing header")
    n, m, k, p = header
    if len(triples) != m:
        raise ParseError(f"header declares m={m} but found {len(triples)} edge records")
    max_w = max((w for _, _, w in triples), default=0)
    if m * max_w * (2 * k + 2) > MAX_TOTAL_WEIGHT:
        raise ParseError("instance weights may overflow 64-bit totals")
    g = MultiGraph.from_edges(n, triples)
    return Instance(g, k, p)


def serialize_instance(inst: Instance) -> str:
    lines = []
    head = f"p kcpp {inst.graph.vertex_count} {len(inst.graph.edges)} {inst.k}"
    if inst.p is not None:
        head += f" {inst.p}"
    lines.append(head)
    for e in inst.graph.edges:
        lines.append(f"e {e.u} {e.v} {e.weight}")
    return "\n".join(lines) + "\n"


def serialize_solution(s: Solution) -> str:
    """Solution format: ``s <total_weight> <k>`` then one ``w`` line per walk."""
    lines = [f"s {s.total_weight} {len(s.walks)}"]
    for walk in s.walks:
        flat: list[int] = []
        for v, e in walk.steps:
            flat.extend((v, e))
        flat.append(walk.steps[0][0])
        lines.append("w " + " ".join(str(x) for x in ([len(walk.steps)] + flat)))
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> Solution:
    total: int | None = None
    k: int | None = None
    walks: list[Walk] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "s":
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: malformed solution header")
            total, k = int(tok[1]), int(tok[2])
        elif tok[0] == "w":
            if total is None:
                raise ParseError(f"line {lineno}: walk before solution header")
            count = int(tok[1])
            body = [int(x) for x in tok[2:]]
            if len(body) != 2 * count + 1:
                raise ParseError(f"line {lineno}: walk token count mismatch")
            if body[0] != body[-1]:
                raise ParseError(f"line {lineno}: walk does not close on its start vertex")
            steps = tuple((body[2 * i], body[2 * i + 1]) for i in range(count))
            walks.append(Walk(steps))
        else:
            raise ParseError(f"line {lineno}: unknown record tag {tok[0]!r}")
    if total is None or k is None:
        raise ParseError("missing solution header")
    if len(walks) != k:
        raise ParseError(f"solution header declares {k} walks, found {len(walks)}")
    return Solution(tuple(walks), total)
