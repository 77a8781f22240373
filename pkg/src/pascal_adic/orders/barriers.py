"""Two-sided order without extreme infinite paths.

For every level-0 vertex ``n`` and label ``i`` a barrier set of edges is marked
with ``i``; it starts at level ``K = 3^G(n, i)`` for an injective ``G`` and is
crossed by every path leaving ``n^(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..diagram import Diagram, Edge, GenVertex, Kind
from ..errors import ConsistencyError, InjectivityError, OutOfWindow
from .core import OrderAssignment, OrderBuilder

V = GenVertex


@dataclass(frozen=True)
class BarrierSet:
    n: int
    i: int
    K: int
    edges: tuple

    @property
    def levels(self) -> tuple[int, int]:
        """Lowest source level and highest range level of the edges."""
        return self.K, 2 * self.K + 1


def barrier_edges(n: int, K: int) -> tuple[Edge, ...]:
    """The staircase ``((l+n)^(K+l), (l+n)^(K+l+1))`` and the wall
    ``((K+n)^(K+l), (K+n+1)^(K+l+1))`` for ``0 <= l <= K``."""
    stairs = [Edge(V(l + n, K + l), V(l + n, K + l + 1)) for l in range(K + 1)]
    wall = [Edge(V(K + n, K + l), V(K + n + 1, K + l + 1)) for l in range(K + 1)]
    return tuple(stairs + wall)


def barrier_set(n: int, i: int, g: int) -> BarrierSet:
    K = 3**g
    return BarrierSet(n, i, K, barrier_edges(n, K))


def zigzag(n: int) -> int:
    """0, 1, -1, 2, -2, ... -> 0, 1, 2, 3, 4, ..."""
    return 2 * n - 1 if n > 0 else -2 * n


def default_g(n: int, i: int) -> int:
    return 2 * zigzag(n) + i + 1


def parse_g_table(text: str) -> dict[tuple[int, int], int]:
    """Parse ``"0,0=1;0,1=2"`` into ``{(0, 0): 1, (0, 1): 2}``."""
    table = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        key, val = item.split("=")
        n, i = (int(t) for t in key.split(","))
        if i not in (0, 1):
            raise ValueError(f"barrier label must be 0 or 1, got {i}")
        table[(n, i)] = int(val)
    return table


def barrier_order(
    diagram: Diagram,
    g: Mapping[tuple[int, int], int] | Callable[[int, int], int] | None = None,
) -> tuple[OrderAssignment, list[BarrierSet]]:
    """Mark every barrier that fits in the region and fill the rest canonically.

    ``g`` is either a table over ``(n, i)`` pairs or a function; a function (by
    default ``default_g``) is evaluated on every level-0 vertex of the window.
    Barriers with ``2K + 2 > depth`` are skipped.
    """
    if diagram.kind is not Kind.GEN2:
        raise ValueError("barrier orders live on the two-sided diagram")
    if g is None:
        g = default_g
    if callable(g):
        lo, hi = diagram.window
        table = {(n, i): g(n, i) for n in range(lo, hi + 1) for i in (0, 1)}
    else:
        table = dict(g)
    seen: dict[int, tuple] = {}
    for key, val in table.items():
        if val < 1:
            raise ValueError(f"G{key} = {val} is not a positive integer")
        if val in seen:
            raise InjectivityError(f"G{key} = G{seen[val]} = {val}")
        seen[val] = key
    barriers = [
        barrier_set(n, i, gv)
        for (n, i), gv in sorted(table.items(), key=lambda kv: kv[1])
        if 2 * 3**gv + 2 <= diagram.depth
    ]
    owner: dict[Edge, tuple] = {}
    for bs in barriers:
        for e in bs.edges:
            if e in owner:
                raise ConsistencyError(f"edge {e} in barriers {owner[e]} and {(bs.n, bs.i)}")
            owner[e] = (bs.n, bs.i)
    b = OrderBuilder(diagram)
    for bs in barriers:
        for e in bs.edges:
            for v in (e.source, e.range):
                if not diagram.contains(v):
                    raise OutOfWindow(f"barrier ({bs.n},{bs.i}) with K={bs.K} needs {v}")
            diagram.parents(e.range)  # the sibling edge must be inside the window too
            b.force(e, bs.i)
    return b.build(name="prop55"), barriers
