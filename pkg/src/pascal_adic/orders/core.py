"""Edge orders encoded as 0/1 labels on incoming edges.

Every fiber ``r^{-1}(v)`` has one or two edges. An order is fully described by
which edge of each two-edge fiber is minimal (label 0); the other one is maximal
(label 1). A one-edge fiber is labeled 0 and its edge is both minimal and maximal.

Orders are stored as a sparse map ``vertex -> source of the minimal edge`` of
forced choices plus a deterministic fill rule for every other fiber, so they are
total on the whole region of their diagram without materializing it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

from ..diagram import (
    Diagram,
    Edge,
    FinitePath,
    GenVertex,
    Kind,
    PascalVertex,
    Vertex,
    gen_to_pascal,
    pascal_to_gen,
)
from ..errors import ConsistencyError, OutOfWindow

FILL_RULES = ("canonical", "mirrored", "outward")

ExtremeKind = Literal["min", "max"]


def _index(v: Vertex) -> int:
    return v.i if isinstance(v, PascalVertex) else v.index


class OrderBuilder:
    """Accumulates forced labels and rejects contradictory ones."""

    def __init__(self, diagram: Diagram):
        self.diagram = diagram
        self.min_parent: dict[Vertex, Vertex] = {}

    def force(self, e: Edge, label: int) -> None:
        d = self.diagram
        if not d.is_edge(e):
            raise OutOfWindow(f"{e.source}->{e.range} is not an edge of {d.label}")
        sib = d.sibling(e)
        if sib is None:
            if label != 0:
                raise ConsistencyError(f"one-edge fiber of {e.range} cannot carry label 1")
            return
        if label not in (0, 1):
            raise ValueError("labels are 0 or 1")
        wanted = e.source if label == 0 else sib.source
        have = self.min_parent.get(e.range)
        if have is not None and have != wanted:
            raise ConsistencyError(
                f"fiber of {e.range}: edge from {e.source} forced to {label} "
                f"but minimal edge already comes from {have}"
            )
        self.min_parent[e.range] = wanted

    def is_forced(self, v: Vertex) -> bool:
        return v in self.min_parent

    def build(self, fill: str = "canonical", anchor: int | None = None, name: str = "") -> "OrderAssignment":
        return OrderAssignment(self.diagram, dict(self.min_parent), fill, anchor, name)


@dataclass(frozen=True, eq=False)
class OrderAssignment:
    diagram: Diagram
    min_parent: dict = field(repr=False)
    fill: str = "canonical"
    anchor: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.fill not in FILL_RULES:
            raise ValueError(f"unknown fill rule {self.fill!r}")
        if self.fill == "outward" and self.anchor is None:
            raise ValueError("outward fill needs an anchor index")

    # -- labels ---------------------------------------------------------------

    def _fill_min(self, v: Vertex, srcs: list[Vertex]) -> Vertex:
        lower, upper = srcs
        if self.fill == "canonical":
            return lower
        if self.fill == "mirrored":
            return upper
        return upper if _index(v) < self.anchor else lower

    def min_source(self, v: Vertex) -> Vertex | None:
        """Source of the minimal edge into ``v`` (None on level 0)."""
        ps = self.diagram.parents(v)
        if not ps:
            return None
        if len(ps) == 1:
            return ps[0][0]
        forced = self.min_parent.get(v)
        if forced is not None:
            return forced
        return self._fill_min(v, [u for u, _ in ps])

    def max_source(self, v: Vertex) -> Vertex | None:
        ps = self.diagram.parents(v)
        if not ps:
            return None
        if len(ps) == 1:
            return ps[0][0]
        lo = self.min_source(v)
        return ps[1][0] if ps[0][0] == lo else ps[0][0]

    def label(self, e: Edge) -> int:
        if not self.diagram.is_edge(e):
            raise OutOfWindow(f"{e.source}->{e.range} is not an edge of {self.diagram.label}")
        return 0 if self.min_source(e.range) == e.source else 1

    def fiber_size(self, e: Edge) -> int:
        return len(self.diagram.parents(e.range))

    def is_minimal(self, e: Edge) -> bool:
        return self.min_source(e.range) == e.source

    def is_maximal(self, e: Edge) -> bool:
        return self.max_source(e.range) == e.source

    def fiber_labels(self, v: Vertex) -> list[tuple[Edge, int]]:
        ps = self.diagram.parents(v)
        if len(ps) == 1:
            return [(ps[0][1], 0)]
        lo = self.min_parent.get(v)
        if lo is None:
            lo = self._fill_min(v, [u for u, _ in ps])
        return [(e, 0 if u == lo else 1) for u, e in ps]

    # -- extreme paths --------------------------------------------------------

    def extreme_path(self, v: Vertex, kind: ExtremeKind = "min") -> FinitePath:
        """The unique path to ``v`` whose every edge is minimal (or maximal)."""
        self.diagram.check(v)
        pick = self.min_source if kind == "min" else self.max_source
        out = [v]
        w = v
        while w.level > 0:
            w = pick(w)
            out.append(w)
        out.reverse()
        return FinitePath(tuple(out))

    def region_vertices(self, level: int) -> list[Vertex]:
        return self.diagram.level_vertices(level)


def canonical_order(diagram: Diagram) -> OrderAssignment:
    """Lower-index parent edge minimal in every two-edge fiber."""
    return OrderAssignment(diagram, {}, "canonical", name="canonical")


def mirrored_order(diagram: Diagram) -> OrderAssignment:
    """Higher-index parent edge minimal in every two-edge fiber."""
    return OrderAssignment(diagram, {}, "mirrored", name="mirrored")


def extreme_finite_path(order: OrderAssignment, v: Vertex, kind: ExtremeKind = "min") -> FinitePath:
    return order.extreme_path(v, kind)


# -- audits -------------------------------------------------------------------


@dataclass
class FiberAudit:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def fiber_audit(order: OrderAssignment, vertices: Iterable[Vertex] | None = None) -> FiberAudit:
    """Check that every two-edge fiber has labels {0, 1} and every one-edge fiber 0."""
    d = order.diagram
    if vertices is None:
        vertices = _auditable_vertices(d)
    checked = 0
    bad = []
    for v in vertices:
        if v.level == 0:
            continue
        labels = sorted(lab for _, lab in order.fiber_labels(v))
        checked += 1
        if labels not in ([0], [0, 1]):
            bad.append((v, labels))
    for v, u in order.min_parent.items():
        if d.contains(v) and Edge(u, v) not in [e for _, e in d.parents(v)]:
            bad.append((v, "forced source is not a parent"))
    return FiberAudit(checked, bad)


def _auditable_vertices(d: Diagram):
    """Region vertices whose fiber is fully inside the region."""
    for n in range(1, d.depth + 1):
        for v in d.level_vertices(n):
            if d.kind is Kind.GEN2 and v.index - 1 < d.window[0]:
                continue
            yield v


def minimal_prefix_count(
    order: OrderAssignment,
    prefix_depth: int,
    witness_depth: int,
    kind: ExtremeKind = "min",
    vertices: Iterable[Vertex] | None = None,
) -> int:
    """Number of distinct length-``prefix_depth`` prefixes of extreme paths to
    the vertices of level ``witness_depth``."""
    if not 0 <= prefix_depth < witness_depth:
        raise ValueError("need 0 <= prefix_depth < witness_depth")
    if witness_depth > order.diagram.depth:
        raise OutOfWindow(f"witness level {witness_depth} beyond depth {order.diagram.depth}")
    if vertices is None:
        vertices = order.region_vertices(witness_depth)
    prefixes = set()
    for w in vertices:
        if w.level != witness_depth:
            raise ValueError(f"{w} is not on level {witness_depth}")
        prefixes.add(order.extreme_path(w, kind).vertices[: prefix_depth + 1])
    return len(prefixes)


@dataclass
class BranchingReport:
    branching_vertices: list
    max_per_path: int
    witness: list | None
    max_turns_per_path: int


def max_branching_audit(
    order: OrderAssignment, depth: int | None = None, label_one_only: bool = False
) -> BranchingReport:
    """Branching points of maximal paths on a Pascal order.

    A vertex other than the root is branching when both outgoing edges are
    maximal in their fibers. ``max_per_path`` is the largest number of branching
    vertices met by one maximal path from the root inside the region.
    ``max_turns_per_path`` counts only branching vertices where that path
    changes direction. With ``label_one_only`` an edge alone in its fiber does
    not count as maximal, so only vertices with two 1-labeled outgoing edges
    branch.
    """
    d = order.diagram
    if not d.is_pascal:
        raise ValueError("branching audit is defined on the Pascal diagram")
    depth = d.depth if depth is None else depth
    if depth > d.depth:
        raise OutOfWindow(f"depth {depth} beyond region {d.depth}")
    branching = set()
    for n in range(1, depth):
        for v in d.level_vertices(n):
            if label_one_only:
                hit = all(order.label(e) == 1 for _, e in d.children(v))
            else:
                hit = all(order.is_maximal(e) for _, e in d.children(v))
            if hit:
                branching.add(v)
    root = PascalVertex(0, 0)
    # best[v] = (count, turns, predecessor) over maximal paths from the root
    best = {root: (0, 0, None)}
    for n in range(1, depth + 1):
        for v in d.level_vertices(n):
            u = order.max_source(v)
            if u not in best:
                continue
            cnt, turns, _ = best[u]
            if u in branching:
                cnt += 1
                prev = best[u][2]
                if prev is not None and _step(prev, u) != _step(u, v):
                    turns += 1
            best[v] = (cnt, turns, u)
    top = max(best, key=lambda v: best[v][0])
    witness = [top]
    while best[witness[-1]][2] is not None:
        witness.append(best[witness[-1]][2])
    witness.reverse()
    return BranchingReport(
        sorted(branching, key=lambda v: (v.level, v.i)),
        best[top][0],
        witness,
        max(t for _, t, _ in best.values()),
    )


def _step(a: PascalVertex, b: PascalVertex) -> tuple[int, int]:
    return (b.i - a.i, b.j - a.j)


def horizontal_zero_segments(order: OrderAssignment, row: int) -> list[tuple[int, int]]:
    """Maximal runs ``[i0, i1]`` of vertices on the line ``y = row`` joined by
    0-labeled horizontal edges, restricted to the region."""
    d = order.diagram
    segs = []
    cur = None
    for i in range(0, d.depth - row):
        e = Edge(PascalVertex(i, row), PascalVertex(i + 1, row))
        if order.label(e) == 0:
            if cur is None:
                cur = [i, i + 1]
            else:
                cur[1] = i + 1
        elif cur is not None:
            segs.append(tuple(cur))
            cur = None
    if cur is not None:
        segs.append(tuple(cur))
    return segs


# -- lifting a Pascal order into a generalized diagram -------------------------


def lift_subdiagram_order(
    outer: Diagram,
    inner: OrderAssignment,
    anchor: int,
    fill_rule: str = "leftToRight",
    boundary_label: int = 0,
) -> OrderAssignment:
    """Copy a Pascal order onto the Pascal subdiagram of ``outer`` rooted at
    level-0 vertex ``anchor`` and fill the other fibers.

    Pascal vertex ``(x, y)`` sits at ``(anchor + x, x + y)``. Inner edges keep
    their labels; an inner edge that was alone in its Pascal fiber but has an
    outer sibling gets ``boundary_label``. ``fill_rule`` is ``leftToRight``
    (canonical everywhere) or ``outwardFromInner`` (canonical to the right of
    the anchor, mirrored to its left).
    """
    if outer.is_pascal:
        raise ValueError("the outer diagram must be generalized")
    if not inner.diagram.is_pascal:
        raise ValueError("the inner order must live on a Pascal diagram")
    if not outer.contains(GenVertex(anchor, 0)):
        raise OutOfWindow(f"anchor {anchor} outside {outer.label}")
    b = OrderBuilder(outer)
    depth = min(outer.depth, inner.diagram.depth)
    for n in range(1, depth + 1):
        for pv in inner.diagram.level_vertices(n):
            gv = pascal_to_gen(pv, anchor)
            if not outer.contains(gv):
                continue
            pparents = inner.diagram.parents(pv)
            try:
                gparents = outer.parents(gv)
            except OutOfWindow:
                continue
            if len(pparents) == 2:
                src = pascal_to_gen(inner.min_source(pv), anchor)
                b.force(Edge(src, gv), 0)
            elif len(gparents) == 2:
                src = pascal_to_gen(pparents[0][0], anchor)
                b.force(Edge(src, gv), boundary_label)
    if fill_rule == "leftToRight":
        fill = "canonical"
    elif fill_rule == "outwardFromInner":
        fill = "outward"
    else:
        raise ValueError(f"unknown fill rule {fill_rule!r}")
    name = f"lift[{inner.name or 'order'}@{anchor}]"
    return b.build(fill, anchor=anchor, name=name)


def restrict_to_pascal(order: OrderAssignment, anchor: int, depth: int) -> dict:
    """Labels of the inner Pascal edges of a lifted order, keyed by Pascal edge."""
    out = {}
    for n in range(1, depth + 1):
        for m in range(anchor, anchor + n + 1):
            gv = GenVertex(m, n)
            if not order.diagram.contains(gv):
                continue
            for u, e in order.diagram.parents(gv):
                pu = gen_to_pascal(u, anchor)
                if pu is not None:
                    out[Edge(pu, gen_to_pascal(gv, anchor))] = order.label(e)
    return out
