"""Serialization of orders and orbits: CSV label dumps, DOT graphs, JSON orbits."""

from __future__ import annotations

import csv
import io
import json

from .diagram import Diagram, FinitePath, PascalVertex
from .errors import OutOfWindow
from .orders.core import OrderAssignment

EDGE_COLORS = {0: "blue", 1: "red"}


def _coord(v) -> str:
    if isinstance(v, PascalVertex):
        return f"{v.i},{v.j}"
    return str(v.index)


def _node(v) -> str:
    if isinstance(v, PascalVertex):
        return f'"{v.i},{v.j}"'
    return f'"{v.index}^{v.level}"'


def _labeled_edges(order: OrderAssignment, depth: int):
    d = order.diagram
    for n in range(1, depth + 1):
        for v in d.level_vertices(n):
            try:
                fiber = order.fiber_labels(v)
            except OutOfWindow:
                continue  # fiber reaches past the left window boundary
            for e, lab in fiber:
                yield e, lab


def labels_csv(order: OrderAssignment, depth: int | None = None) -> str:
    """Rows ``level,source,range,label`` with ``i,j`` or index coordinates."""
    depth = order.diagram.depth if depth is None else depth
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "source", "range", "label"])
    for e, lab in _labeled_edges(order, depth):
        w.writerow([e.source.level, _coord(e.source), _coord(e.range), lab])
    return buf.getvalue()


def order_dot(order: OrderAssignment, depth: int | None = None, highlight=()) -> str:
    """DOT digraph with one rank per level; 0-edges blue, 1-edges red.

    Edges in ``highlight`` are drawn bold.
    """
    d: Diagram = order.diagram
    depth = d.depth if depth is None else depth
    highlight = set(highlight)
    lines = [f'digraph "{order.name or "order"}" {{', "  rankdir=TB;", "  node [shape=point];"]
    for n in range(depth + 1):
        names = " ".join(_node(v) for v in d.level_vertices(n))
        lines.append(f"  {{ rank=same; {names} }}")
    for e, lab in _labeled_edges(order, depth):
        style = ", style=bold" if e in highlight else ""
        lines.append(f"  {_node(e.source)} -> {_node(e.range)} [color={EDGE_COLORS[lab]}, label={lab}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def path_records(order: OrderAssignment, path: FinitePath) -> list[dict]:
    return [
        {"level": e.source.level, "from": _coord(e.source), "to": _coord(e.range), "label": order.label(e)}
        for e in path.edges
    ]


def orbit_json(order: OrderAssignment, chain: list[FinitePath]) -> str:
    return json.dumps([path_records(order, x) for x in chain], indent=1)
