"""Depth-bounded Pascal and generalized Pascal Bratteli diagrams.

Three families are supported:

* ``pascal`` -- the classical Pascal graph, vertices ``(i, j)`` with level ``i + j``
  and edges ``(i, j) -> (i + 1, j)``, ``(i, j) -> (i, j + 1)``;
* ``gen1`` -- the one-sided stationary diagram with vertex indices ``1, 2, ...`` on
  every level, where ``(m, k)`` has children ``(m, k + 1)`` and ``(m + 1, k + 1)``;
* ``gen2`` -- the two-sided version with indices in ``Z``, realized on a finite
  index window ``[lo, hi]``.

All incidence entries are 0 or 1, so an edge is identified by its endpoints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Union

from .errors import CapExceeded, OutOfWindow

DEFAULT_ENUMERATION_CAP = 10**6


class PascalVertex(NamedTuple):
    i: int
    j: int

    @property
    def level(self) -> int:
        return self.i + self.j

    def __str__(self):
        return f"({self.i},{self.j})"


class GenVertex(NamedTuple):
    index: int
    level: int

    def __str__(self):
        return f"{self.index}^({self.level})"


Vertex = Union[PascalVertex, GenVertex]


class Edge(NamedTuple):
    source: Vertex
    range: Vertex

    @property
    def level(self) -> int:
        """Level of the source vertex."""
        return self.source.level


@dataclass(frozen=True)
class FinitePath:
    """A path from level 0 given by its vertex sequence ``v_0, ..., v_n``."""

    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path needs at least its start vertex")
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    @property
    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [Edge(vs[k], vs[k + 1]) for k in range(len(vs) - 1)]

    def __len__(self):
        return len(self.vertices) - 1

    def prefix(self, m: int) -> "FinitePath":
        return FinitePath(self.vertices[: m + 1])

    def __str__(self):
        return "->".join(str(v) for v in self.vertices)


class Kind(str, enum.Enum):
    PASCAL = "pascal"
    GEN1 = "gen1"
    GEN2 = "gen2"


@dataclass(frozen=True)
class Diagram:
    """A diagram truncated at ``depth``.

    ``window`` is the index range ``(lo, hi)`` of every level. It is ignored for
    ``pascal``, defaults to ``(1, None)`` (unbounded to the right) for ``gen1`` and
    is mandatory for ``gen2``.
    """

    kind: Kind
    depth: int
    window: tuple | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if kind is Kind.PASCAL:
            object.__setattr__(self, "window", None)
        elif kind is Kind.GEN1:
            lo, hi = self.window if self.window is not None else (1, None)
            if lo != 1:
                raise ValueError("gen1 indices start at 1")
            if hi is not None and hi < 1:
                raise ValueError("empty gen1 window")
            object.__setattr__(self, "window", (1, hi))
        else:
            if self.window is None or None in self.window:
                raise ValueError("gen2 needs a finite window (lo, hi)")
            lo, hi = self.window
            if lo > hi:
                raise ValueError("empty gen2 window")
            object.__setattr__(self, "window", (int(lo), int(hi)))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def pascal(cls, depth: int) -> "Diagram":
        return cls(Kind.PASCAL, depth)

    @classmethod
    def gen1(cls, depth: int, hi: int | None = None) -> "Diagram":
        return cls(Kind.GEN1, depth, (1, hi))

    @classmethod
    def gen2(cls, depth: int, lo: int, hi: int) -> "Diagram":
        return cls(Kind.GEN2, depth, (lo, hi))

    @classmethod
    def from_descriptor(cls, desc: dict) -> "Diagram":
        kind = Kind(desc["kind"])
        depth = int(desc["depth"])
        window = desc.get("window")
        if window is not None:
            window = tuple(None if w is None else int(w) for w in window)
        return cls(kind, depth, window)

    def to_descriptor(self) -> dict:
        desc = {"kind": self.kind.value, "depth": self.depth}
        if self.window is not None:
            desc["window"] = list(self.window)
        return desc

    def vertex(self, a: int, b: int) -> Vertex:
        """``(i, j)`` for pascal, ``(index, level)`` otherwise."""
        if self.kind is Kind.PASCAL:
            return PascalVertex(a, b)
        return GenVertex(a, b)

    # -- region ---------------------------------------------------------------

    @property
    def is_pascal(self) -> bool:
        return self.kind is Kind.PASCAL

    def contains(self, v: Vertex) -> bool:
        if v.level < 0 or v.level > self.depth:
            return False
        if self.kind is Kind.PASCAL:
            return v.i >= 0 and v.j >= 0
        lo, hi = self.window
        return v.index >= lo and (hi is None or v.index <= hi)

    def check(self, v: Vertex) -> None:
        if not self.contains(v):
            raise OutOfWindow(f"{v} is outside {self.to_descriptor()}")

    def level_vertices(self, n: int) -> list[Vertex]:
        if not 0 <= n <= self.depth:
            raise OutOfWindow(f"level {n} outside depth {self.depth}")
        if self.kind is Kind.PASCAL:
            return [PascalVertex(i, n - i) for i in range(n + 1)]
        lo, hi = self.window
        if hi is None:
            raise OutOfWindow("gen1 diagram without a right window bound has infinite levels")
        return [GenVertex(m, n) for m in range(lo, hi + 1)]

    def vertices(self) -> Iterator[Vertex]:
        for n in range(self.depth + 1):
            yield from self.level_vertices(n)

    # -- incidence ------------------------------------------------------------

    def parents(self, v: Vertex) -> list[tuple[Vertex, Edge]]:
        """Incoming edges of ``v``, lower source index first."""
        self.check(v)
        if v.level == 0:
            return []
        if self.kind is Kind.PASCAL:
            i, j = v
            srcs = []
            if i > 0:
                srcs.append(PascalVertex(i - 1, j))
            if j > 0:
                srcs.append(PascalVertex(i, j - 1))
        else:
            m, k = v
            lo = self.window[0]
            srcs = []
            if m - 1 >= lo:
                srcs.append(GenVertex(m - 1, k - 1))
            elif self.kind is Kind.GEN2:
                raise OutOfWindow(f"parent {m - 1}^({k - 1}) of {v} is outside window {self.window}")
            srcs.append(GenVertex(m, k - 1))
        return [(u, Edge(u, v)) for u in srcs]

    def children(self, v: Vertex) -> list[tuple[Vertex, Edge]]:
        """Outgoing edges of ``v``; fewer than two only at a window's right boundary."""
        self.check(v)
        if v.level >= self.depth:
            raise OutOfWindow(f"{v} is on the last constructed level {self.depth}")
        if self.kind is Kind.PASCAL:
            targets = [PascalVertex(v.i + 1, v.j), PascalVertex(v.i, v.j + 1)]
        else:
            m, k = v
            targets = [GenVertex(m, k + 1)]
            hi = self.window[1]
            if hi is None or m + 1 <= hi:
                targets.append(GenVertex(m + 1, k + 1))
        return [(w, Edge(v, w)) for w in targets]

    def sibling(self, e: Edge) -> Edge | None:
        """The other edge of ``e``'s fiber, or None for a one-edge fiber."""
        for _, f in self.parents(e.range):
            if f != e:
                return f
        return None

    def is_edge(self, e: Edge) -> bool:
        if not (self.contains(e.source) and self.contains(e.range)):
            return False
        if e.range.level != e.source.level + 1:
            return False
        if self.kind is Kind.PASCAL:
            di, dj = e.range.i - e.source.i, e.range.j - e.source.j
            return (di, dj) in ((1, 0), (0, 1))
        return e.range.index - e.source.index in (0, 1)

    # -- counting -------------------------------------------------------------

    def _cone(self, v: Vertex) -> list[list[Vertex]]:
        """Ancestors of ``v`` grouped by level 0..level(v)."""
        self.check(v)
        layers = [[v]]
        current = [v]
        for _ in range(v.level):
            seen = {}
            for w in current:
                for u, _ in self.parents(w):
                    seen[u] = None
            current = list(seen)
            layers.append(current)
        layers.reverse()
        return layers

    def path_count(self, v: Vertex) -> int:
        """Number of finite paths from level 0 to ``v``."""
        layers = self._cone(v)
        counts = {u: 1 for u in layers[0]}
        for layer in layers[1:]:
            counts = {w: sum(counts[u] for u, _ in self.parents(w)) for w in layer}
        return counts[v]

    def iter_level_counts(self, last_level: int, index_bound: int | None = None):
        """Yield ``(n, {vertex: H_vertex})`` for ``n = 0..last_level``.

        Only vertices whose whole ancestor cone lies inside the region are
        reported. ``index_bound`` truncates unbounded gen1 levels on the right,
        which is exact because parents never have a larger index.
        """
        if last_level > self.depth:
            raise OutOfWindow(f"level {last_level} outside depth {self.depth}")
        if self.kind is Kind.PASCAL:
            row = [1]
            for n in range(last_level + 1):
                if n > 0:
                    row = [1] + [row[a - 1] + row[a] for a in range(1, n)] + [1]
                yield n, {PascalVertex(i, n - i): row[i] for i in range(n + 1)}
            return
        lo, hi = self.window
        if index_bound is not None:
            hi = index_bound if hi is None else min(hi, index_bound)
        if hi is None:
            raise OutOfWindow("an index bound is needed to count gen1 levels")
        row = {m: 1 for m in range(lo, hi + 1)}
        for n in range(last_level + 1):
            if n > 0:
                first = lo if self.kind is Kind.GEN1 else lo + n
                row = {
                    m: row[m] + (row[m - 1] if m - 1 in row else 0)
                    for m in range(first, hi + 1)
                }
            yield n, {GenVertex(m, n): c for m, c in row.items()}

    def enumerate_paths(self, v: Vertex, cap: int = DEFAULT_ENUMERATION_CAP) -> list[FinitePath]:
        """All finite paths from level 0 to ``v`` in lexicographic vertex order."""
        count = self.path_count(v)
        if count > cap:
            raise CapExceeded(count, cap)
        memo: dict = {}

        def back(w):
            if w in memo:
                return memo[w]
            if w.level == 0:
                out = [(w,)]
            else:
                out = [p + (w,) for u, _ in self.parents(w) for p in back(u)]
            memo[w] = out
            return out

        return [FinitePath(p) for p in sorted(back(v))]

    @cached_property
    def label(self) -> str:
        if self.kind is Kind.PASCAL:
            return f"pascal(depth={self.depth})"
        return f"{self.kind.value}(depth={self.depth}, window={self.window})"


def pascal_to_gen(v: PascalVertex, anchor: int) -> GenVertex:
    """Embed a Pascal vertex into the Pascal subdiagram of a generalized diagram
    rooted at ``anchor``: horizontal steps move one index to the right, vertical
    steps stay on an index, so lower-``i`` parents map to lower-index parents."""
    return GenVertex(anchor + v.i, v.i + v.j)


def gen_to_pascal(v: GenVertex, anchor: int) -> PascalVertex | None:
    k = v.index - anchor
    if k < 0 or k > v.level:
        return None
    return PascalVertex(k, v.level - k)
