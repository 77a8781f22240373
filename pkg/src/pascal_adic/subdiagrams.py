"""Vertex subdiagrams: Bernoulli band subdiagrams and anchored measure extensions.

A band subdiagram keeps the Pascal vertices ``(x, k - x)`` whose horizontal
frequency ``x / k`` stays within ``2^(1-i)`` of ``p`` once ``k > N_i``. The
thresholds ``N_i`` come from a Hoeffding tail bound with budget ``eps / 2^(i+1)``
per band, so the kept paths have ``nu_p`` mass above ``1 - eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import Diagram, Edge, PascalVertex
from .errors import EmptyLevel
from .measures import BernoulliParam, _bern, format_rational, parse_rational

DIVERGENCE_FACTOR = 10**6


def band_half_width(i: int) -> Fraction:
    if i < 1:
        raise ValueError("band index starts at 1")
    return Fraction(2, 2**i)


def _tail_bound(delta: float, N: int) -> float:
    a = 2 * delta * delta
    return 2 * math.exp(-a * (N + 1)) / (1 - math.exp(-a))


def hoeffding_threshold(p, i: int, budget) -> int:
    """Smallest N with ``2 exp(-2 d^2 (N+1)) / (1 - exp(-2 d^2)) <= budget``, d = 2^(1-i).

    The sum over k > N of the two-sided Hoeffding bounds ``2 exp(-2 d^2 k)``
    is the left-hand side. When d exceeds max(p, 1 - p) the band contains
    every frequency and N = 0.
    """
    b = _bern(p)
    budget = parse_rational(budget)
    if budget <= 0:
        raise ValueError("budget must be positive")
    delta = band_half_width(i)
    if delta > max(b.p, b.q):
        return 0
    d = float(delta)
    a = 2 * d * d
    guess = math.log(2 / (float(budget) * (1 - math.exp(-a)))) / a - 1
    N = max(0, math.floor(guess) - 1)
    while _tail_bound(d, N) > float(budget):
        N += 1
    while N > 0 and _tail_bound(d, N - 1) <= float(budget):
        N -= 1
    return N


@dataclass
class BandSpec:
    p: BernoulliParam
    epsilon: Fraction
    thresholds: list[int]

    def half_width(self, i: int) -> Fraction:
        return band_half_width(i)

    def active_band(self, k: int) -> int | None:
        """Largest band index whose constraint applies on level k."""
        best = None
        for i, N in enumerate(self.thresholds, start=1):
            if N < k:
                best = i
        return best

    def allowed(self, k: int) -> tuple[int, int]:
        """Interval ``[a, b]`` of horizontal coordinates allowed on level k."""
        i = self.active_band(k)
        if i is None or k == 0:
            return 0, k
        d = band_half_width(i)
        p = self.p.p
        # |x - pk| < dk, strictly, in exact arithmetic
        lo_f, hi_f = (p - d) * k, (p + d) * k
        a = max(0, math.floor(lo_f) + 1)
        b = min(k, math.ceil(hi_f) - 1)
        return a, b

    def satisfies(self, k: int, x: int) -> bool:
        i = self.active_band(k)
        if i is None or k == 0:
            return True
        return abs(Fraction(x, k) - self.p.p) < band_half_width(i)

    def certified_budget(self) -> Fraction:
        return sum((self.epsilon / 2 ** (i + 1) for i in range(1, len(self.thresholds) + 1)), Fraction(0))

    def to_json(self) -> dict:
        return {
            "p": format_rational(self.p.p),
            "epsilon": format_rational(self.epsilon),
            "thresholds": list(self.thresholds),
        }


def band_spec(p, epsilon, depth: int) -> BandSpec:
    """Thresholds ``N_1 < N_2 < ...`` for every band that is active before ``depth``."""
    b = _bern(p)
    eps = parse_rational(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    thresholds: list[int] = []
    i = 1
    while True:
        N = hoeffding_threshold(b, i, eps / 2 ** (i + 1))
        if thresholds:
            N = max(N, thresholds[-1] + 1)
        thresholds.append(N)
        if N >= depth:
            return BandSpec(b, eps, thresholds)
        i += 1


@dataclass
class VertexSubdiagram:
    base: Diagram
    W: list[list] = field(repr=False)

    @property
    def depth(self) -> int:
        return len(self.W) - 1

    def contains(self, v) -> bool:
        return v.level < len(self.W) and v in set(self.W[v.level])

    def edges(self, n: int) -> list[Edge]:
        """Induced edges from level n to level n + 1."""
        nxt = set(self.W[n + 1])
        return [e for v in self.W[n] for w, e in self.base.children(v) if w in nxt]

    def is_interval(self, n: int) -> bool:
        xs = sorted(v.i for v in self.W[n])
        return xs == list(range(xs[0], xs[-1] + 1))

    def interval(self, n: int) -> tuple[int, int]:
        xs = [v.i for v in self.W[n]]
        return min(xs), max(xs)


def build_band_subdiagram(p, epsilon, depth: int) -> tuple[VertexSubdiagram, BandSpec]:
    """Vertices of Pascal lying on some path from (0, 0) to level ``depth`` that
    obeys every active band constraint (forward then backward reachability)."""
    spec = band_spec(p, epsilon, depth)
    allowed = [spec.allowed(k) for k in range(depth + 1)]
    fwd = [(0, 0)]
    for k in range(1, depth + 1):
        a, b = fwd[-1]
        lo, hi = max(a, allowed[k][0]), min(b + 1, allowed[k][1])
        if lo > hi:
            raise EmptyLevel(f"no admissible vertex on level {k}")
        fwd.append((lo, hi))
    back = [fwd[depth]]
    for k in range(depth - 1, -1, -1):
        a, b = back[-1]
        lo, hi = max(fwd[k][0], a - 1), min(fwd[k][1], b)
        if lo > hi:
            raise EmptyLevel(f"no admissible vertex on level {k}")
        back.append((lo, hi))
    back.reverse()
    W = [[PascalVertex(x, k - x) for x in range(lo, hi + 1)] for k, (lo, hi) in enumerate(back)]
    return VertexSubdiagram(Diagram.pascal(depth), W), spec


def band_measure_dp(p, spec: BandSpec, depth: int) -> Fraction:
    """Exact ``nu_p`` probability that the first ``depth`` steps obey all active bands.

    Paths are counted per endpoint with integers; every path to ``(x, n - x)``
    has mass ``p^x q^(n-x)``.
    """
    b = _bern(p)
    if depth < 1:
        raise ValueError("depth must be positive")
    counts = {0: 1}
    for k in range(1, depth + 1):
        nxt: dict[int, int] = {}
        for x, c in counts.items():
            for y in (x, x + 1):
                if spec.satisfies(k, y):
                    nxt[y] = nxt.get(y, 0) + c
        counts = nxt
    return sum((c * b.p**x * b.q ** (depth - x) for x, c in counts.items()), Fraction(0))


@dataclass
class Disjointness:
    disjoint: bool
    least_index: int


def band_disjointness(p, q, i: int) -> Disjointness:
    """Whether the open bands of half-width ``2^(1-i)`` around p and q are disjoint,
    i.e. ``|p - q| > 2^(2-i)``, together with the least such index."""
    p, q = parse_rational(p), parse_rational(q)
    if p == q:
        raise ValueError("p and q must differ")
    gap = abs(p - q)
    least = 1
    while not gap > 2 * band_half_width(least):
        least += 1
    return Disjointness(gap > 2 * band_half_width(i), least)


# -- measure extension from anchored Pascal subdiagrams -----------------------------


@dataclass
class ExtensionResult:
    anchor: int
    p: Fraction
    schedule: list[int]
    values: list[Fraction]
    diverged: bool
    closed_form: Fraction | None

    def rows(self):
        return list(zip(self.schedule, self.values))


def extension_closed_form(p, anchor: int) -> Fraction | None:
    """``(1 / (2 - lambda)) / (lambda - 1)^(anchor - 1)`` with lambda = 1/p, for p > 1/2."""
    b = _bern(p)
    if b.p <= Fraction(1, 2):
        return None
    lam = 1 / b.p
    return 1 / (2 - lam) / (lam - 1) ** (anchor - 1)


def extension_value(anchor: int, p, schedule, divergence_factor: int = DIVERGENCE_FACTOR) -> ExtensionResult:
    """Partial values ``sum_{k=0}^n H_{anchor+k}^(n) p^(n-k) q^k`` for n in ``schedule``.

    ``H`` counts paths of the one-sided diagram from every level-0 vertex.
    The divergence flag is raised once a value exceeds ``divergence_factor``
    times the first one; it is a heuristic, not a proof.
    """
    b = _bern(p)
    if anchor < 1:
        raise ValueError("anchor must be at least 1")
    schedule = sorted(set(int(n) for n in schedule))
    if not schedule or schedule[0] < 0:
        raise ValueError("schedule must be a non-empty list of levels")
    last = schedule[-1]
    wanted = set(schedule)
    d = Diagram.gen1(last)
    values = []
    diverged = False
    for n, row in d.iter_level_counts(last, index_bound=anchor + last):
        if n not in wanted:
            continue
        val = sum(
            (row[(anchor + k, n)] * b.p ** (n - k) * b.q**k for k in range(n + 1)),
            Fraction(0),
        )
        values.append(val)
        if val > divergence_factor * values[0]:
            diverged = True
    return ExtensionResult(anchor, b.p, schedule, values, diverged, extension_closed_form(b, anchor))
