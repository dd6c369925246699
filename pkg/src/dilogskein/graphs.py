"""Labeled cubic graphs on the subsquare and their positive mutations.

Only the bottom row v_0..v_n of the square graph ever changes, so a graph
is stored as a planar tree: n+1 trivalent vertices, internal edges carrying
signed chain curves, and n+3 half-edges H_-1..H_(n+1) standing in for the
frozen remainder.  The half-edges meet the boundary in the fixed cyclic
order H_-1, H_0, ..., H_(n+1); each carries a word of Dehn twists.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .curves import CurveClass, dehn_twist, reduce_word
from .quiver import (
    Interval,
    enumerate_admissible_orders,
    order_to_tuple_sequence,
    prefix_length,
)
from .report import FAIL, PASS, Report, stopwatch


class NoSuchEdge(ValueError):
    pass


class BigonEdge(ValueError):
    pass


class MissingPositiveEdge(ValueError):
    pass


class InvalidTuple(ValueError):
    pass


class InvalidGraph(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Edge:
    u: int
    v: int
    label: CurveClass

    def __post_init__(self) -> None:
        if not self.u < self.v:
            raise InvalidGraph(f"edge endpoints must be ordered, got {self.u},{self.v}")

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u


@dataclass(frozen=True, order=True)
class HalfEdge:
    index: int
    vertex: int
    word: tuple[CurveClass, ...] = ()


@dataclass(frozen=True)
class MutGraph:
    n: int
    heights: tuple[int, ...]  # absolute height of v_k; column of v_k is k
    edges: tuple[Edge, ...]
    half_edges: tuple[HalfEdge, ...]

    def __post_init__(self) -> None:
        n = self.n
        if len(self.heights) != n + 1:
            raise InvalidGraph("need one height per vertex")
        if any(not -n <= h <= n for h in self.heights):
            raise InvalidGraph("height out of range")
        if [h.index for h in self.half_edges] != list(range(-1, n + 2)):
            raise InvalidGraph("half-edges must be H_-1..H_(n+1) in order")
        if list(self.edges) != sorted(self.edges):
            raise InvalidGraph("edges must be sorted")
        pairs = [(e.u, e.v) for e in self.edges]
        if len(set(pairs)) != len(pairs):
            raise InvalidGraph("more than one edge between a vertex pair")
        deg = [0] * (n + 1)
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        for h in self.half_edges:
            deg[h.vertex] += 1
        if any(d != 3 for d in deg):
            raise InvalidGraph(f"vertex degrees {deg} are not all 3")

    # construction helpers -------------------------------------------------

    @classmethod
    def build(
        cls,
        n: int,
        heights: Sequence[int],
        edges: Iterable[tuple[int, int, CurveClass]],
        attach: dict[int, int],
        words: dict[int, Sequence[CurveClass]] | None = None,
    ) -> MutGraph:
        words = words or {}
        es = tuple(sorted(Edge(min(u, v), max(u, v), lab) for u, v, lab in edges))
        hs = tuple(HalfEdge(k, attach[k], reduce_word(words.get(k, ()))) for k in range(-1, n + 2))
        return cls(n, tuple(heights), es, hs)

    def column(self, v: int) -> int:
        return v

    def position(self, v: int) -> tuple[int, int]:
        return (v, self.heights[v])

    def relative_heights(self) -> tuple[int, ...]:
        return tuple(h + self.n for h in self.heights)

    def edge_with_label(self, label: CurveClass) -> list[Edge]:
        return [e for e in self.edges if e.label == label]

    def half(self, k: int) -> HalfEdge:
        return self.half_edges[k + 1]

    def incident(self, v: int) -> list[Edge]:
        return [e for e in self.edges if v in (e.u, e.v)]

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "vertices": [[v, h] for v, h in enumerate(self.heights)],
            "edges": [[e.u, e.v, str(e.label)] for e in self.edges],
            "half_edges": [
                {"index": h.index, "vertex": h.vertex, "word": [str(c) for c in h.word]}
                for h in self.half_edges
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> MutGraph:
        n = int(data["n"])
        heights = [h for _, h in sorted(data["vertices"])]
        edges = [(u, v, CurveClass.parse(lab)) for u, v, lab in data["edges"]]
        attach = {int(h["index"]): int(h["vertex"]) for h in data["half_edges"]}
        words = {int(h["index"]): [CurveClass.parse(c) for c in h["word"]] for h in data["half_edges"]}
        return cls.build(n, heights, edges, attach, words)


def _chain(lo: int, hi: int, sign: int = 1) -> CurveClass:
    return CurveClass(sign, Interval(lo, hi))


def square_graph(n: int) -> MutGraph:
    if n < 2:
        raise ValueError("n must be at least 2")
    attach = {-1: 0, 0: 0, n + 1: n}
    attach.update({k: k for k in range(1, n + 1)})
    edges = [(k - 1, k, _chain(k, k)) for k in range(1, n + 1)]
    return MutGraph.build(n, [-n] * (n + 1), edges, attach)


def short_graph(n: int, i: int) -> MutGraph:
    """Intermediate graph of the short sequence after mutating L_n, ..., L_i.

    short_graph(n, n+1) is the square graph and short_graph(n, 1) the canoe.
    """
    if n < 2 or not 1 <= i <= n + 1:
        raise ValueError("need n >= 2 and 1 <= i <= n+1")
    if i == n + 1:
        return square_graph(n)
    heights = [-n] * (n + 1)
    for j in range(i, n + 1):
        heights[j] = -n + j
    attach = {-1: 0, 0: 0}
    attach.update({k: k for k in range(1, i - 1)})
    words: dict[int, list[CurveClass]] = {}
    for j in range(i - 1, n):
        attach[j] = j + 1
        words[j] = [_chain(j + 1, j + 1)]
    attach[n] = n
    attach[n + 1] = i - 1
    words[n + 1] = [_chain(i, n)]
    edges = [(k - 1, k, _chain(k, k, 1 if k < i else -1)) for k in range(1, n + 1)]
    return MutGraph.build(n, heights, edges, attach, words)


def canoe_graph(n: int) -> MutGraph:
    if n < 2:
        raise ValueError("n must be at least 2")
    heights = [-n + k for k in range(n + 1)]
    attach = {-1: 0, n: n, n + 1: 0}
    attach.update({k: k + 1 for k in range(0, n)})
    words = {k: [_chain(k + 1, k + 1)] for k in range(0, n)}
    words[n + 1] = [_chain(1, n)]
    edges = [(k - 1, k, _chain(k, k, -1)) for k in range(1, n + 1)]
    return MutGraph.build(n, heights, edges, attach, words)


def half_edge_support(n: int, k: int) -> frozenset[int]:
    """Chain curves that H_k meets in the square graph."""
    if k <= 0:
        return frozenset({1})
    if k >= n:
        return frozenset({n})
    return frozenset({k, k + 1})


def _transport_word(n: int, k: int, word: tuple[CurveClass, ...], c: CurveClass) -> tuple[CurveClass, ...]:
    # a twist touching the half-edge's own curves is appended; otherwise it
    # acts on the letters already present
    if half_edge_support(n, k) & set(range(c.lo, c.hi + 1)):
        return reduce_word(word + (c,))
    return reduce_word(tuple(dehn_twist(c, x) for x in word))


@dataclass(frozen=True)
class PinningRule:
    """Which legs of a mutated edge move, and which ones get twisted.

    Around the edge the four legs read (a, b, c, d) in boundary order with
    a, b at one endpoint.  ``moved`` names the pair that swaps endpoints;
    ``twisted`` says whether the moved or the staying pair is twisted.
    """

    moved: str = "bd"
    twisted: str = "moved"


DEFAULT_PINNING = PinningRule()


def _leaves(g: MutGraph, start: int, came_from: int) -> list[int]:
    out = []
    stack = [(start, came_from)]
    while stack:
        x, p = stack.pop()
        out.extend(h.index for h in g.half_edges if h.vertex == x)
        for e in g.incident(x):
            y = e.other(x)
            if y != p:
                stack.append((y, x))
    return out


def _arc_start(n: int, leaves: Iterable[int]) -> int:
    # leaves of a subtree form a cyclic arc; return its first slot
    m = n + 3
    slots = {k + 1 for k in leaves}
    for s in slots:
        if (s - 1) % m not in slots:
            return s
    raise InvalidGraph("subtree covers every leaf")


def positive_mutation(g: MutGraph, curve: CurveClass, rule: PinningRule = DEFAULT_PINNING) -> MutGraph:
    """Mutate along the unique edge labeled ``curve``."""
    hits = g.edge_with_label(curve)
    if len(hits) != 1:
        raise NoSuchEdge(f"{len(hits)} edges labeled {curve}")
    e = hits[0]
    u, v = e.u, e.v
    legs = []  # (arc start, endpoint, kind, id)
    for w in (u, v):
        other = e.other(w)
        for h in g.half_edges:
            if h.vertex == w:
                legs.append((_arc_start(g.n, [h.index]), w, "H", h.index))
        for f in g.incident(w):
            y = f.other(w)
            if y != other:
                legs.append((_arc_start(g.n, _leaves(g, y, w)), w, "V", y))
    if [w for _, w, _, _ in legs].count(u) != 2 or len(legs) != 4:
        raise BigonEdge(f"edge {curve} does not separate two pairs of legs")
    legs.sort()
    for r in range(4):
        seq = legs[r:] + legs[:r]
        if seq[0][1] == seq[1][1] and seq[2][1] == seq[3][1]:
            break
    a, b, c, d = seq
    first, second = a[1], c[1]
    moving = (b, d) if rule.moved == "bd" else (a, c)
    twisted = set(moving) if rule.twisted == "moved" else {a, b, c, d} - set(moving)

    attach = {h.index: h.vertex for h in g.half_edges}
    words = {h.index: h.word for h in g.half_edges}
    edges = {(f.u, f.v): f.label for f in g.edges}
    edges[(u, v)] = -curve
    for leg in (a, b, c, d):
        _, w, kind, ident = leg
        target = w
        if leg in moving:
            target = second if w == first else first
        if kind == "H":
            attach[ident] = target
            if leg in twisted:
                words[ident] = _transport_word(g.n, ident, words[ident], curve)
        else:
            label = edges.pop((min(w, ident), max(w, ident)))
            if leg in twisted:
                label = dehn_twist(curve, label)
            edges[(min(target, ident), max(target, ident))] = label
    heights = list(g.heights)
    heights[v] = -g.n + u + 1
    return MutGraph.build(
        g.n, heights, [(p, q, lab) for (p, q), lab in edges.items()], attach, words
    )


def graph_for_tuple(A: Sequence[int]) -> MutGraph:
    """Closed-form graph reached once the entries of A are raised.

    Vertex v_k sits at relative height A_k.  With M the length of the
    (1, 2, ...) prefix, each height level h <= M is a horizontal path from
    v_h through the later vertices at that height, and level l is joined to
    level l+1 by an edge from v_l to the last vertex at height l+1.
    """
    A = tuple(int(x) for x in A)
    n = len(A)
    if n < 2:
        raise InvalidTuple("tuples need n >= 2")
    if any(not 0 <= x <= j for j, x in enumerate(A, start=1)):
        raise InvalidTuple(f"{A}: entry j must lie in 0..j")
    M = prefix_length(A)
    tail = A[max(M - 1, 0):]
    if any(x < y for x, y in zip(tail, tail[1:])):
        raise InvalidTuple(f"{A}: not non-increasing after the prefix")
    rel = (0,) + A
    heights = [-n + h for h in rel]

    attach: dict[int, int] = {}
    for k in range(-1, M):
        attach[k] = k + 1
    attach[M] = M
    for k in range(M + 1, n + 1):
        attach[k] = k
    attach[n + 1] = n if A[-1] == 0 else 0
    words: dict[int, list[CurveClass]] = {k: [_chain(k + 1, k + 1)] for k in range(0, M)}
    if A[-1] != 0:
        words[n + 1] = [_chain(1, n)]

    edges = []
    for h in range(0, M + 1):
        row = [h] + [j for j in range(M + 1, n + 1) if rel[j] == h]
        for p, q in zip(row, row[1:]):
            edges.append((p, q, _chain(p + 1, q)))
    for l in range(0, M):
        mu = max(j for j in range(n + 1) if rel[j] == l + 1)
        edges.append((l, mu, _chain(l + 1, mu, -1)))
    return MutGraph.build(n, heights, edges, attach, words)


@dataclass(frozen=True)
class Comparison:
    ok: bool
    diagnostics: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def graphs_equal(a: MutGraph, b: MutGraph) -> Comparison:
    if a.n != b.n:
        return Comparison(False, (f"n differs: {a.n} vs {b.n}",))
    diags = []
    for v, (ha, hb) in enumerate(zip(a.heights, b.heights)):
        if ha != hb:
            diags.append(f"v_{v} at height {ha} vs {hb}")
    ea = {(e.u, e.v): e.label for e in a.edges}
    eb = {(e.u, e.v): e.label for e in b.edges}
    for pair in sorted(set(ea) | set(eb)):
        la, lb = ea.get(pair), eb.get(pair)
        if la != lb:
            diags.append(f"edge v_{pair[0]}-v_{pair[1]}: {la} vs {lb}")
    for x, y in zip(a.half_edges, b.half_edges):
        if x.vertex != y.vertex:
            diags.append(f"H_{x.index} at v_{x.vertex} vs v_{y.vertex}")
        if reduce_word(x.word) != reduce_word(y.word):
            diags.append(
                f"H_{x.index} word [{', '.join(map(str, x.word))}] vs [{', '.join(map(str, y.word))}]"
            )
    return Comparison(not diags, tuple(diags))


@dataclass(frozen=True)
class MutationTrace:
    start: MutGraph
    steps: tuple[tuple[CurveClass, MutGraph], ...]

    @property
    def final(self) -> MutGraph:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def curves(self) -> tuple[CurveClass, ...]:
        return tuple(c for c, _ in self.steps)

    def graphs(self) -> list[MutGraph]:
        return [self.start] + [g for _, g in self.steps]

    def to_json(self) -> dict[str, Any]:
        return {
            "start": self.start.to_json(),
            "steps": [{"curve": str(c), "graph": g.to_json()} for c, g in self.steps],
        }


def run_sequence(start: MutGraph, curves: Sequence[CurveClass], rule: PinningRule = DEFAULT_PINNING) -> MutationTrace:
    g = start
    steps = []
    for c in curves:
        if not g.edge_with_label(c):
            raise MissingPositiveEdge(f"no edge labeled {c}")
        g = positive_mutation(g, c, rule)
        steps.append((c, g))
    return MutationTrace(start, tuple(steps))


def short_sequence(n: int, rule: PinningRule = DEFAULT_PINNING) -> MutationTrace:
    return run_sequence(square_graph(n), [_chain(k, k) for k in range(n, 0, -1)], rule)


def long_sequence(order: Sequence[Interval], rule: PinningRule = DEFAULT_PINNING) -> MutationTrace:
    n = max(iv.hi for iv in order)
    return run_sequence(square_graph(n), [CurveClass(1, iv) for iv in order], rule)


def check_order(order: Sequence[Interval], rule: PinningRule = DEFAULT_PINNING) -> dict[str, Any]:
    """Run one long sequence and compare it to the short one and the closed forms."""
    order = tuple(order)
    n = max(iv.hi for iv in order)
    out: dict[str, Any] = {"order": [iv.to_json() for iv in order], "ok": False}
    try:
        trace = long_sequence(order, rule)
        short = short_sequence(n, rule)
    except ValueError as e:
        out["error"] = f"{type(e).__name__}: {e}"
        return out
    problems = []
    if trace.curves != tuple(CurveClass(1, iv) for iv in order):
        problems.append("mutated curves differ from the order")
    tuples = order_to_tuple_sequence(order)
    for k, (A, g) in enumerate(zip(tuples, trace.graphs())):
        cmp = graphs_equal(g, graph_for_tuple(A))
        if not cmp:
            problems.append(f"step {k} ({A}): {cmp.diagnostics[0]}")
            break
    for label, other in (("short", short.final), ("canoe", canoe_graph(n))):
        cmp = graphs_equal(trace.final, other)
        if not cmp:
            problems.append(f"final vs {label}: {cmp.diagnostics[0]}")
    out["ok"] = not problems
    if problems:
        out["problems"] = problems
    return out


def verify_mutation_equivalence(n: int, cap: int = 5, jobs: int = 1) -> Report:
    if n > cap:
        raise ValueError(f"n={n} exceeds the cap {cap}")
    with stopwatch() as sw:
        orders = enumerate_admissible_orders(n, cap=max(cap, n))
        if jobs > 1 and len(orders) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(check_order, orders))
        else:
            results = [check_order(o) for o in orders]
        short_ok = graphs_equal(short_sequence(n).final, canoe_graph(n))
    failures = [r for r in results if not r["ok"]]
    diff = None
    if failures:
        diff = failures[0]
    elif not short_ok:
        diff = {"short_final": list(short_ok.diagnostics)}
    return Report(
        "equivalence",
        {"n": n},
        PASS if diff is None else FAIL,
        diff,
        sw.ms,
        {"orders": len(orders), "failed": len(failures)},
    )
