"""Exact tail-invariant measures on Pascal and generalized Pascal diagrams.

All arithmetic is over ``fractions.Fraction``. Floats only appear in the
Monte Carlo sampler's summaries and in presentation columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .diagram import FinitePath, PascalVertex

# Sampler: numpy's PCG64 generator, seeded with numpy.random.default_rng(seed).
# One generator per call; steps are drawn level by level in row-major order.
SAMPLER_PRNG = "numpy.random.PCG64"
_CHUNK = 4096


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` (or an integer or decimal string) into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class BernoulliParam:
    p: Fraction

    def __post_init__(self):
        p = parse_rational(self.p)
        if not 0 < p < 1:
            raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> Fraction:
        return 1 - self.p


@dataclass(frozen=True)
class EigenParam:
    lam: Fraction

    def __post_init__(self):
        lam = parse_rational(self.lam)
        if lam <= 1:
            raise ValueError(f"lambda must exceed 1, got {lam}")
        object.__setattr__(self, "lam", lam)

    @property
    def finite(self) -> bool:
        return self.lam < 2


def _bern(p) -> BernoulliParam:
    return p if isinstance(p, BernoulliParam) else BernoulliParam(p)


def _eig(lam) -> EigenParam:
    return lam if isinstance(lam, EigenParam) else EigenParam(lam)


def parse_measure_descriptor(desc: dict):
    """``{"type": "bernoulli", "p": "2/3"}`` or ``{"type": "eigen", "lambda": "3/2"}``."""
    kind = desc.get("type")
    if kind == "bernoulli":
        return BernoulliParam(parse_rational(desc["p"]))
    if kind == "eigen":
        return EigenParam(parse_rational(desc["lambda"]))
    raise ValueError(f"unknown measure type {kind!r}")


# -- Bernoulli measures ----------------------------------------------------------


def bernoulli_vertex_mass(p, v: PascalVertex) -> Fraction:
    b = _bern(p)
    return b.p**v.i * b.q**v.j


def bernoulli_cylinder(p, path: FinitePath) -> Fraction:
    """Product of edge weights: p for horizontal steps, 1 - p for vertical ones."""
    b = _bern(p)
    if path.start != PascalVertex(0, 0):
        raise ValueError("Bernoulli cylinders start at (0, 0)")
    mass = Fraction(1)
    for e in path.edges:
        mass *= b.p if e.range.i == e.source.i + 1 else b.q
    return mass


def x_min_level_measure(p, n: int) -> Fraction:
    """Mass of the level-n minimal cylinders: one per vertex (k, n - k)."""
    b = _bern(p)
    return sum((b.p**k * b.q ** (n - k) for k in range(n + 1)), Fraction(0))


def x_min_tail_bound(p, n: int) -> Fraction:
    """``q^n q / (1 - 2p)`` bound on the level measure, valid for p < 1/2."""
    b = _bern(p)
    if b.p >= Fraction(1, 2):
        raise ValueError("the geometric bound needs p < 1/2")
    return b.q**n * b.q / (1 - 2 * b.p)


# -- eigenpair measures ----------------------------------------------------------


def eigen_vector_one_sided(lam, size: int) -> list[Fraction]:
    """``xi_i = (lambda - 1)^(i - 1)`` for i = 1..size."""
    e = _eig(lam)
    if size < 1:
        raise ValueError("size must be at least 1")
    r = e.lam - 1
    return [r**k for k in range(size)]


def eigen_residual_one_sided(lam, xi: list[Fraction]) -> list[Fraction]:
    """``(F^T xi)_i - lambda xi_i`` on every fully represented row.

    Vertex i has children i and i + 1, so row i of ``F^T xi`` is
    ``xi_i + xi_{i+1}``; the last entry has no right neighbour and is dropped.
    """
    e = _eig(lam)
    return [xi[k] + xi[k + 1] - e.lam * xi[k] for k in range(len(xi) - 1)]


def mu_lambda_cylinder(lam, i: int, n: int) -> Fraction:
    e = _eig(lam)
    if i < 1 or n < 0:
        raise ValueError("need i >= 1 and n >= 0")
    return (e.lam - 1) ** (i - 1) / e.lam**n


@dataclass
class TotalMass:
    partial: Fraction
    closed_form: Fraction | None
    remainder: Fraction | None
    infinite: bool
    witness: list[Fraction] | None = None


def mu_lambda_total(lam, terms: int) -> TotalMass:
    """Partial sum of ``xi_1 + ... + xi_T`` with closed form 1/(2 - lambda) when finite.

    For lambda >= 2 the terms never decrease, which is reported as the
    divergence witness.
    """
    e = _eig(lam)
    xi = eigen_vector_one_sided(e, terms)
    partial = sum(xi, Fraction(0))
    if e.finite:
        closed = 1 / (2 - e.lam)
        return TotalMass(partial, closed, closed - partial, False)
    witness = xi[: min(terms, 8)]
    assert all(b >= a for a, b in zip(xi, xi[1:])) and xi[0] >= 1
    return TotalMass(partial, None, None, True, witness)


def mu_lambda_normalized(lam, anchor: int, j: int, n: int) -> Fraction:
    """Cylinder mass of ``mu_lambda`` restricted to the Pascal subdiagram anchored
    at ``anchor``, divided by ``xi_anchor`` so the root cylinder has mass 1."""
    return mu_lambda_cylinder(lam, j, n) / mu_lambda_cylinder(lam, anchor, 0)


@dataclass
class RestrictionReport:
    ok: bool
    p: Fraction
    checked: int
    counterexample: tuple | None = None


def restriction_check(lam, anchor: int, depth: int, p=None) -> RestrictionReport:
    """Compare the normalized restricted eigen measure with ``nu_p``, p = 1/lambda,
    on every cylinder ``(n, k)`` with ``n <= depth``: vertex ``anchor + k`` on level n."""
    e = _eig(lam)
    p = Fraction(1) / e.lam if p is None else parse_rational(p)
    q = 1 - p
    checked = 0
    for n in range(depth + 1):
        for k in range(n + 1):
            lhs = mu_lambda_normalized(e, anchor, anchor + k, n)
            rhs = p ** (n - k) * q**k
            checked += 1
            if lhs != rhs:
                return RestrictionReport(False, p, checked, (n, k, lhs, rhs))
    return RestrictionReport(True, p, checked)


@dataclass
class TwoSidedEigen:
    window: tuple[int, int]
    values: dict[int, Fraction]
    lam: Fraction
    residuals: dict[int, Fraction]
    divergent_tail: str

    @property
    def identity_holds(self) -> bool:
        return all(r == 0 for r in self.residuals.values())


def eigen_vector_two_sided(p, window: tuple[int, int]) -> TwoSidedEigen:
    """``x_i = (p/q)^i`` on the window, with the identity ``x_{i-1} + x_i = x_i / p``.

    The coordinate sum is infinite: for p > 1/2 the right tail grows, for
    p < 1/2 the left one, and for p = 1/2 every term equals 1.
    """
    b = _bern(p)
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    ratio = b.p / b.q
    x = {i: ratio**i for i in range(lo, hi + 1)}
    lam = 1 / b.p
    res = {i: x[i - 1] + x[i] - lam * x[i] for i in range(lo + 1, hi + 1)}
    if b.p > Fraction(1, 2):
        tail = "right"
    elif b.p < Fraction(1, 2):
        tail = "left"
    else:
        tail = "both"
    return TwoSidedEigen((lo, hi), x, lam, res, tail)


# -- sampling ---------------------------------------------------------------------


def sample_steps(p, depth: int, count: int, seed: int) -> np.ndarray:
    """Boolean array of shape (count, depth); True marks a horizontal step.

    Each step compares a uniform integer in ``[0, den)`` with ``num``, so the
    step probability is exactly p.
    """
    b = _bern(p)
    if depth < 1 or count < 1:
        raise ValueError("depth and count must be positive")
    rng = np.random.default_rng(seed)
    num, den = b.p.numerator, b.p.denominator
    out = np.empty((count, depth), dtype=bool)
    for start in range(0, count, _CHUNK):
        stop = min(count, start + _CHUNK)
        out[start:stop] = rng.integers(0, den, size=(stop - start, depth)) < num
    return out


def steps_to_path(steps) -> FinitePath:
    i = j = 0
    verts = [PascalVertex(0, 0)]
    for h in steps:
        if h:
            i += 1
        else:
            j += 1
        verts.append(PascalVertex(i, j))
    return FinitePath(tuple(verts))


def sample_path(p, depth: int, seed: int) -> FinitePath:
    return steps_to_path(sample_steps(p, depth, 1, seed)[0])


def sample_paths(p, depth: int, count: int, seed: int) -> list[FinitePath]:
    return [steps_to_path(row) for row in sample_steps(p, depth, count, seed)]


def level_masses(p, n: int) -> list[Fraction]:
    """``C(n, k) p^k q^(n-k)`` for k = 0..n: total mass of level-n cylinders at (k, n - k)."""
    from math import comb

    b = _bern(p)
    return [comb(n, k) * b.p**k * b.q ** (n - k) for k in range(n + 1)]


def tail_invariance_violations(mass, paths: Iterable[FinitePath]) -> list:
    """Pairs of paths with the same endpoint but different ``mass(path)``."""
    seen: dict = {}
    bad = []
    for x in paths:
        m = mass(x)
        if x.end in seen and seen[x.end][1] != m:
            bad.append((seen[x.end][0], x))
        seen.setdefault(x.end, (x, m))
    return bad
