"""Pascal order with a continuum of minimal and a continuum of maximal paths.

Guide paths ``C_r`` are built for dyadic ``r`` level by level: ``C_0`` is the
horizontal axis, and each new ``C_{r + 2^-(n+1)}`` branches off ``C_r`` inside
the half-plane ``x + y >= M`` and then walks greedily toward the ray ``L`` at
angle ``(r + 2^-(n+1)) * pi / 2``. Guides with ``r < 1/4`` are shifted right and
labeled 0, their mirror images are shifted up and labeled 1.

Geometry is evaluated in double precision; near-ties (closer than ``TIE_TOL``)
are broken deterministically instead of by float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ..diagram import Diagram, Edge, PascalVertex
from ..errors import ConsistencyError, GreedyDriftError, MissingGuide
from .core import OrderAssignment, OrderBuilder

P = PascalVertex
TIE_TOL = 1e-12
BAND = 2.0
HUG = 1.0
SEPARATION = 5.0


def ray_direction(r) -> tuple[float, float]:
    theta = float(r) * math.pi / 2
    return math.cos(theta), math.sin(theta)


def distance_to_ray(v, r) -> float:
    """Distance from a point of the closed positive quadrant to the ray ``L_r``."""
    c, s = ray_direction(r)
    x, y = v
    if x * c + y * s < 0:
        return math.hypot(x, y)
    return abs(x * s - y * c)


def distance_to_ray_beyond(v, r, M) -> float:
    """Distance from ``v`` to ``L_r`` intersected with the half-plane ``x + y >= M``."""
    c, s = ray_direction(r)
    x, y = v
    t0 = M / (c + s)
    t = x * c + y * s
    if t >= t0:
        return abs(x * s - y * c)
    return math.hypot(x - t0 * c, y - t0 * s)


@dataclass
class GuidePath:
    r: Fraction
    vertices: list
    stabilization_level: int
    entry_level: int | None = None
    parent: Fraction | None = None

    @property
    def start(self) -> PascalVertex:
        return self.vertices[0]

    @property
    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [Edge(vs[k], vs[k + 1]) for k in range(len(vs) - 1)]

    def at_level(self, level: int) -> PascalVertex | None:
        k = level - self.start.level
        if 0 <= k < len(self.vertices):
            return self.vertices[k]
        return None

    def max_band_distance(self) -> float:
        """Largest distance to ``L_r`` from the stabilization level on."""
        return max(
            (distance_to_ray(v, self.r) for v in self.vertices if v.level >= self.stabilization_level),
            default=0.0,
        )


@dataclass
class InductionStep:
    n: int
    M: int
    parent: Fraction
    r: Fraction
    start: PascalVertex
    separation: float


@dataclass
class ContinuumConstruction:
    order: OrderAssignment
    guides: dict
    shift: int
    steps: list
    depth: int
    zero_edges: set = field(default_factory=set, repr=False)
    one_edges: set = field(default_factory=set, repr=False)

    def guide_list(self) -> list[GuidePath]:
        return [self.guides[r] for r in sorted(self.guides)]


def _stabilization(vertices, r) -> int:
    last_bad = None
    for v in vertices:
        if distance_to_ray(v, r) >= BAND:
            last_bad = v.level
    if last_bad is None:
        return vertices[0].level
    if last_bad == vertices[-1].level:
        raise GreedyDriftError(f"C_{r} never enters the band of width {BAND} before level {last_bad}")
    return last_bad + 1


def _greedy_walk(start: PascalVertex, r: Fraction, depth: int) -> tuple[list, int | None]:
    verts = [start]
    w = start
    entry = start.level if distance_to_ray(start, r) <= HUG else None
    while w.level < depth:
        up, right = P(w.i, w.j + 1), P(w.i + 1, w.j)
        du, dr = distance_to_ray(up, r), distance_to_ray(right, r)
        # near-tie: take the step with the smaller horizontal coordinate
        w, d = (up, du) if du - dr < TIE_TOL else (right, dr)
        verts.append(w)
        if entry is None:
            if d <= HUG:
                entry = w.level
        elif d > HUG:
            raise GreedyDriftError(f"C_{r} left the band at {w}: distance {d:.6f}")
    return verts, entry


def _pick_branch_vertex(guide: GuidePath, r_new: Fraction, M: int) -> PascalVertex:
    cands = [v for v in guide.vertices if v.level >= M]
    if not cands:
        raise MissingGuide(f"C_{guide.r} has no vertex beyond level {M}")
    dists = [distance_to_ray_beyond(v, r_new, M) for v in cands]
    best = min(dists)
    ties = [v for v, dv in zip(cands, dists) if dv - best < TIE_TOL]
    return min(ties, key=lambda v: (v.level, v.i))


def build_guides(depth: int, max_dyadic_level: int) -> tuple[dict, list]:
    """Guide paths ``C_r`` for all ``r = p / 2^n``, ``n <= max_dyadic_level``."""
    if max_dyadic_level < 0:
        raise ValueError("max_dyadic_level must be non-negative")
    if depth < 2 ** (max_dyadic_level + 5):
        raise ValueError(f"depth must be at least 2^{max_dyadic_level + 5}")
    axis = [P(x, 0) for x in range(depth + 1)]
    guides = {Fraction(0): GuidePath(Fraction(0), axis, 0, 0)}
    steps = []
    for n in range(max_dyadic_level):
        M = max(max(g.stabilization_level for g in guides.values()), 2 ** (n + 5))
        if M >= depth:
            raise ValueError(f"half-plane threshold {M} does not fit in depth {depth}")
        half = Fraction(1, 2 ** (n + 1))
        new = {}
        for r in sorted(guides):
            r_new = r + half
            start = _pick_branch_vertex(guides[r], r_new, M)
            separation = min(
                distance_to_ray_beyond(v, r_new, M)
                for g in guides.values()
                for v in g.vertices
                if v.level >= M
            )
            verts, entry = _greedy_walk(start, r_new, depth)
            new[r_new] = GuidePath(r_new, verts, _stabilization(verts, r_new), entry, parent=r)
            steps.append(InductionStep(n, M, r, r_new, start, separation))
        guides.update(new)
    return guides, steps


def continuum_order(depth: int, max_dyadic_level: int) -> ContinuumConstruction:
    guides, steps = build_guides(depth, max_dyadic_level)
    quarter = Fraction(1, 4)
    lower = [g for r, g in guides.items() if r < quarter]
    bounding = lower + ([guides[quarter]] if quarter in guides else [])
    # smallest N with every shifted vertex inside the region strictly below y = x
    shift = 0
    for g in bounding:
        for v in g.vertices:
            shift = max(shift, min(v.j - v.i + 1, depth - v.level + 1))

    d = Diagram.pascal(depth)
    b = OrderBuilder(d)
    zero_edges, one_edges = set(), set()
    for g in lower:
        for e in g.edges:
            se = Edge(P(e.source.i + shift, e.source.j), P(e.range.i + shift, e.range.j))
            if se.range.level <= depth:
                b.force(se, 0)
                zero_edges.add(se)
    for g in lower:
        for e in g.edges:
            me = Edge(P(e.source.j, e.source.i + shift), P(e.range.j, e.range.i + shift))
            if me.range.level > depth or me.range.i == 0:
                continue  # y-axis edges are alone in their fibers
            if me in zero_edges:
                raise ConsistencyError(f"{me} is in both shifted guide graphs")
            b.force(me, 1)
            one_edges.add(me)
    order = b.build(name="thm41")
    return ContinuumConstruction(order, guides, shift, steps, depth, zero_edges, one_edges)


# -- audits -------------------------------------------------------------------


def pairwise_intersections(guides: dict) -> dict:
    """``{(r1, r2): shared vertices}`` for every pair of guides."""
    sets = {r: set(g.vertices) for r, g in guides.items()}
    return {(a, b): sets[a] & sets[b] for a, b in combinations(sorted(guides), 2)}


def intersection_violations(guides: dict) -> list:
    bad = []
    for (a, b), shared in pairwise_intersections(guides).items():
        if len(shared) > 1:
            bad.append((a, b, sorted(shared)))
        elif shared:
            (v,) = shared
            if v != guides[a].start and v != guides[b].start:
                bad.append((a, b, [v]))
    return bad


def branch_point_violations(guides: dict) -> list:
    """Guides whose start vertex is not on their parent guide."""
    return [
        r
        for r, g in guides.items()
        if g.parent is not None and g.start not in set(guides[g.parent].vertices)
    ]


def merging_vertices(guides: dict) -> list:
    """Vertices entered by guide edges from two different sources."""
    incoming: dict = {}
    for g in guides.values():
        for e in g.edges:
            incoming.setdefault(e.range, set()).add(e.source)
    return [v for v, srcs in incoming.items() if len(srcs) > 1]


# -- paths in every direction ----------------------------------------------------


def _dyadic_terms(r: Fraction):
    """Yield ``(n_k, r_k)``: positions of binary digits 1 of r and partial sums."""
    x = Fraction(r)
    partial = Fraction(0)
    n = 0
    while x:
        n += 1
        x *= 2
        if x >= 1:
            x -= 1
            partial += Fraction(1, 2**n)
            yield n, partial


def direction_path(r, construction: ContinuumConstruction | dict, depth: int | None = None) -> list:
    """Vertices of the direction-``r`` path from (0, 0) through the stored guides.

    It follows ``C_{r_0}``, ``C_{r_1}``, ... switching at each branch vertex
    ``v_{r_{k+1}}``, and is truncated at ``depth``.
    """
    guides = construction.guides if isinstance(construction, ContinuumConstruction) else construction
    if depth is None:
        depth = construction.depth if isinstance(construction, ContinuumConstruction) else min(
            g.vertices[-1].level for g in guides.values()
        )
    r = Fraction(r)
    if not 0 <= r < 1:
        raise ValueError("direction must lie in [0, 1)")
    current = guides[Fraction(0)]
    out = [P(0, 0)]
    for n_k, r_k in _dyadic_terms(r):
        nxt = guides.get(r_k)
        if nxt is None:
            if 2 ** (n_k + 4) >= depth:
                break
            raise MissingGuide(f"direction {r} needs C_{r_k}, which was not constructed")
        branch = nxt.start
        if branch.level > depth:
            break
        if current.at_level(branch.level) != branch:
            raise MissingGuide(f"C_{r_k} does not branch off C_{current.r}")
        k0 = out[-1].level - current.start.level
        k1 = branch.level - current.start.level
        out.extend(current.vertices[k0 + 1 : k1 + 1])
        current = nxt
    k0 = out[-1].level - current.start.level
    out.extend(v for v in current.vertices[k0 + 1 :] if v.level <= depth)
    return out
