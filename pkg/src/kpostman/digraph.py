"""Directed multigraphs, the balancing-vertex gadget, and arc-disjoint
cycle packing by exhaustive branch."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .graph import GraphError, ParseError


class Arc(NamedTuple):
    id: int
    tail: int
    head: int
    weight: int


@dataclass(frozen=True)
class DiGraph:
    """Directed multigraph; parallel arcs and directed 2-cycles allowed."""

    vertex_count: int
    arcs: tuple[Arc, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for a in self.arcs:
            if not (1 <= a.tail <= self.vertex_count and 1 <= a.head <= self.vertex_count):
                raise GraphError(f"arc {a.id}: vertex out of range")
            if a.tail == a.head:
                raise GraphError(f"arc {a.id}: self-loop at {a.tail}")
            if a.weight < 0:
                raise GraphError(f"arc {a.id}: negative weight")
            if a.id in seen:
                raise GraphError(f"duplicate arc id {a.id}")
            seen.add(a.id)

    @classmethod
    def from_arcs(cls, vertex_count: int, triples: Iterable[tuple[int, int, int]]) -> "DiGraph":
        arcs = tuple(Arc(i, t, h, w) for i, (t, h, w) in enumerate(triples, start=1))
        return cls(vertex_count, arcs)

    @cached_property
    def out_arcs(self) -> dict[int, tuple[Arc, ...]]:
        out: dict[int, list[Arc]] = {v: [] for v in range(1, self.vertex_count + 1)}
        for a in self.arcs:
            out[a.tail].append(a)
        return {v: tuple(s) for v, s in out.items()}

    def outdegree(self, v: int) -> int:
        return len(self.out_arcs[v])

    def indegree(self, v: int) -> int:
        return sum(1 for a in self.arcs if a.head == v)

    def is_balanced(self) -> bool:
        return all(self.outdegree(v) == self.indegree(v) for v in range(1, self.vertex_count + 1))

    def total_weight(self) -> int:
        return sum(a.weight for a in self.arcs)


@dataclass(frozen=True)
class GadgetResult:
    d_prime: DiGraph
    x: int | None
    x_outdegree: int
    path_midpoints: frozenset[int]


@dataclass(frozen=True)
class EquivalenceReport:
    r: int
    r_prime: int
    x_outdegree: int
    holds: bool


def build_balanced_extension(d: DiGraph, gadget_arc_weight: int = 1) -> GadgetResult:
    """Balance every vertex by routing its surplus through a new vertex x via
    fresh two-arc paths.  Already balanced inputs are returned untouched with
    no x at all, which keeps a connected input connected."""
    surplus = {
        v: d.outdegree(v) - d.indegree(v) for v in range(1, d.vertex_count + 1)
    }
    if all(s == 0 for s in surplus.values()):
        return GadgetResult(d, None, 0, frozenset())
    x = d.vertex_count + 1
    next_vertex = x + 1
    next_arc = max((a.id for a in d.arcs), default=0) + 1
    arcs = list(d.arcs)
    midpoints: list[int] = []
    x_out = 0
    for v in sorted(surplus):
        s = surplus[v]
        for _ in range(abs(s)):
            mid = next_vertex
            next_vertex += 1
            midpoints.append(mid)
            if s > 0:
                arcs.append(Arc(next_arc, x, mid, gadget_arc_weight))
                arcs.append(Arc(next_arc + 1, mid, v, gadget_arc_weight))
                x_out += 1
            else:
                arcs.append(Arc(next_arc, v, mid, gadget_arc_weight))
                arcs.append(Arc(next_arc + 1, mid, x, gadget_arc_weight))
            next_arc += 2
    d_prime = DiGraph(next_vertex - 1, tuple(arcs))
    assert d_prime.is_balanced()
    return GadgetResult(d_prime, x, x_out, frozenset(midpoints))


class _ArcPackingSearch:
    def __init__(self, d: DiGraph):
        self.d = d
        self.memo: dict[tuple, int] = {}

    def _cycles_through(self, live: frozenset[int], a: Arc) -> list[frozenset[int]]:
        cycles: list[frozenset[int]] = []
        arcs = {b.id: b for b in self.d.arcs if b.id in live}

        def dfs(cur: int, visited: tuple[int, ...], used: frozenset[int]) -> None:
            for b in self.d.out_arcs[cur]:
                if b.id not in arcs or b.id in used:
                    continue
                if b.head == a.tail:
                    cycles.append(used | {b.id})
                elif b.head not in visited and b.head != a.head:
                    dfs(b.head, visited + (b.head,), used | {b.id})

        dfs(a.head, (a.tail, a.head), frozenset({a.id}))
        return cycles

    def run(self, live: frozenset[int], target: int) -> int:
        target = min(target, len(live) // 2)  # every directed cycle needs >= 2 arcs
        if target <= 0 or not live:
            return 0
        key = (live, target)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        a = self.d.arcs[0]
        for arc in self.d.arcs:
            if arc.id in live:
                a = arc
                break
        best = 0
        for cyc in self._cycles_through(live, a):
            got = 1 + self.run(live - cyc, target - 1)
            if got > best:
                best = got
                if best >= target:
                    break
        if best < target:
            got = self.run(live - {a.id}, target)
            if got > best:
                best = got
        self.memo[key] = best
        return best


def max_arc_disjoint_cycles(d: DiGraph, size_limit: int = 16, stop_at: int | None = None) -> int:
    """Exact maximum number of pairwise arc-disjoint directed cycles."""
    if len(d.arcs) > size_limit:
        raise GraphError(f"{len(d.arcs)} arcs exceed the size limit {size_limit}")
    live = frozenset(a.id for a in d.arcs)
    target = len(d.arcs) // 2 if stop_at is None else stop_at
    return _ArcPackingSearch(d).run(live, target)


def verify_packing_equivalence(d: DiGraph, size_limit: int = 16) -> EquivalenceReport:
    """Check that balancing adds exactly x's outdegree to the packing number."""
    gadget = build_balanced_extension(d)
    r = max_arc_disjoint_cycles(d, size_limit)
    r_prime = max_arc_disjoint_cycles(gadget.d_prime, size_limit + 2 * len(gadget.path_midpoints))
    return EquivalenceReport(r, r_prime, gadget.x_outdegree, r_prime == r + gadget.x_outdegree)


def parse_directed_instance(text: str | bytes) -> tuple[DiGraph, int]:
    """Directed instance format: ``p dkcpp <n> <m> <k>`` then ``a`` records."""
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"instance is not ASCII: {exc}") from None
    header: tuple[int, int, int] | None = None
    triples: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if header is not None:
                raise ParseError(f"line {lineno}: duplicate header")
            if len(tok) != 5 or tok[1] != "dkcpp":
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(tok[2]), int(tok[3]), int(tok[4]))
            except ValueError:
                raise ParseError(f"line {lineno}: malformed header {line!r}") from None
        elif tok[0] == "a":
            if header is None:
                raise ParseError(f"line {lineno}: arc record before header")
            if len(tok) != 4:
                raise ParseError(f"line {lineno}: malformed arc record {line!r}")
            try:
                t, h, w = int(tok[1]), int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed arc record {line!r}") from None
            triples.append((t, h, w))
        else:
            raise ParseError(f"line {lineno}: unknown record tag {tok[0]!r}")
    if header is None:
        raise ParseError("missing header")
    n, m, k = header
    if len(triples) != m:
        raise ParseError(f"header declares m={m} but found {len(triples)} arc records")
    try:
        d = DiGraph.from_arcs(n, triples)
    except GraphError as exc:
        raise ParseError(str(exc)) from None
    return d, k


def serialize_directed_instance(d: DiGraph, k: int) -> str:
    lines = [f"p dkcpp {d.vertex_count} {len(d.arcs)} {k}"]
    for a in d.arcs:
        lines.append(f"a {a.tail} {a.head} {a.weight}")
    return "\n".join(lines) + "\n"
