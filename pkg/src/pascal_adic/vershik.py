"""The Vershik successor map on finite paths and barrier certificates.

At a finite depth a path all of whose edges are maximal has no successor; this
is reported with the value ``AtExtreme.MAXIMAL`` rather than an exception,
because the same prefix may extend non-maximally below the truncation level.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .diagram import DEFAULT_ENUMERATION_CAP, Diagram, Edge, FinitePath, GenVertex, Kind
from .errors import CapExceeded, CycleError, OutOfWindow
from .orders.barriers import BarrierSet
from .orders.core import OrderAssignment


class AtExtreme(enum.Enum):
    MAXIMAL = "maximal at depth"
    MINIMAL = "minimal at depth"


def _check_path(order: OrderAssignment, path: FinitePath) -> None:
    d = order.diagram
    if path.start.level != 0:
        raise ValueError("paths start on level 0")
    for e in path.edges:
        if not d.is_edge(e):
            raise OutOfWindow(f"{e.source}->{e.range} is not an edge of {d.label}")


def successor(order: OrderAssignment, path: FinitePath) -> FinitePath | AtExtreme:
    """Replace the first non-maximal edge by its successor in the fiber and
    reset the prefix to the minimal path."""
    _check_path(order, path)
    for k, e in enumerate(path.edges):
        if not order.is_maximal(e):
            src = order.max_source(e.range)
            head = order.extreme_path(src, "min").vertices
            return FinitePath(head + path.vertices[k + 1 :])
    return AtExtreme.MAXIMAL


def predecessor(order: OrderAssignment, path: FinitePath) -> FinitePath | AtExtreme:
    _check_path(order, path)
    for k, e in enumerate(path.edges):
        if not order.is_minimal(e):
            src = order.min_source(e.range)
            head = order.extreme_path(src, "max").vertices
            return FinitePath(head + path.vertices[k + 1 :])
    return AtExtreme.MINIMAL


def fiber_orbit(order: OrderAssignment, v, cap: int = DEFAULT_ENUMERATION_CAP) -> list[FinitePath]:
    """All paths to ``v`` in successor order, from the minimal to the maximal one."""
    count = order.diagram.path_count(v)
    if count > cap:
        raise CapExceeded(count, cap)
    x = order.extreme_path(v, "min")
    chain = [x]
    seen = {x}
    while True:
        x = successor(order, x)
        if x is AtExtreme.MAXIMAL:
            return chain
        if x in seen:
            raise CycleError(f"successor revisits {x}")
        seen.add(x)
        chain.append(x)


# -- barrier certificates --------------------------------------------------------


@dataclass
class BarrierResult:
    hit_all: bool
    witness: FinitePath | None
    states: int

    def __bool__(self):
        return self.hit_all


def barrier_hit_dp(diagram: Diagram, barrier: Iterable[Edge], start: int, target_level: int) -> BarrierResult:
    """Decide whether every path from ``start^(0)`` to ``target_level`` crosses
    an edge of ``barrier``.

    Only the (level, index) states of paths that have not crossed yet are kept,
    so the cost is quadratic in ``target_level`` whatever the number of paths.
    On failure an avoiding path is returned as witness.
    """
    if diagram.kind is Kind.PASCAL:
        raise ValueError("barrier certificates are defined on generalized diagrams")
    if target_level > diagram.depth:
        raise OutOfWindow(f"target level {target_level} beyond depth {diagram.depth}")
    barrier = set(barrier)
    root = GenVertex(start, 0)
    diagram.check(root)
    hi = diagram.window[1]
    back = {root: None}
    frontier = [root]
    states = 1
    for _ in range(target_level):
        nxt = {}
        for v in frontier:
            if hi is not None and v.index + 1 > hi:
                raise OutOfWindow(f"paths from {root} leave the window at {v}")
            for w, e in diagram.children(v):
                if e not in barrier and w not in nxt:
                    nxt[w] = v
        back.update(nxt)
        frontier = list(nxt)
        states += len(frontier)
        if not frontier:
            return BarrierResult(True, None, states)
    w = min(frontier)
    out = [w]
    while back[out[-1]] is not None:
        out.append(back[out[-1]])
    return BarrierResult(False, FinitePath(tuple(reversed(out))), states)


def barrier_certificate(barriers: list[BarrierSet], diagram: Diagram, n: int, i: int) -> BarrierResult:
    """Run the barrier DP for the barrier set of ``(n, i)`` up to level ``2K + 2``."""
    for bs in barriers:
        if (bs.n, bs.i) == (n, i):
            return barrier_hit_dp(diagram, bs.edges, n, 2 * bs.K + 2)
    raise KeyError(f"no barrier set for {(n, i)}")


def extreme_path_exists(order: OrderAssignment, start: int, kind: str, level: int) -> bool:
    """Is there a path from ``start^(0)`` to ``level`` made of minimal (or maximal) edges?"""
    d = order.diagram
    hi = d.window[1]
    good = order.is_minimal if kind == "min" else order.is_maximal
    frontier = {GenVertex(start, 0)}
    for _ in range(level):
        nxt = set()
        for v in frontier:
            if hi is not None and v.index + 1 > hi:
                raise OutOfWindow(f"paths from {start}^(0) leave the window at {v}")
            for w, e in d.children(v):
                if good(e):
                    nxt.add(w)
        frontier = nxt
        if not frontier:
            return False
    return True
