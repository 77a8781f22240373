import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pascal_adic import measures as M
from pascal_adic.diagram import Diagram, FinitePath, PascalVertex

F = Fraction
P = PascalVertex

probs = st.fractions(min_value=F(1, 50), max_value=F(49, 50), max_denominator=50)
lambdas = st.fractions(min_value=F(31, 30), max_value=F(4), max_denominator=30).filter(lambda x: x > 1)


def test_parameter_validation():
    for bad in ("0", "1", "3/2", "-1/3"):
        with pytest.raises(ValueError):
            M.BernoulliParam(bad)
    with pytest.raises(ValueError):
        M.EigenParam("1")
    with pytest.raises(ValueError):
        M.parse_rational("1/0")
    assert M.parse_measure_descriptor({"type": "bernoulli", "p": "2/3"}) == M.BernoulliParam(F(2, 3))
    assert M.parse_measure_descriptor({"type": "eigen", "lambda": "3/2"}).lam == F(3, 2)


def test_bernoulli_cylinder_examples():
    x = FinitePath((P(0, 0), P(1, 0), P(2, 0), P(2, 1)))
    assert M.bernoulli_cylinder(F(2, 3), x) == F(4, 27)
    for y in Diagram.pascal(3).enumerate_paths(P(2, 1)):
        assert M.bernoulli_cylinder(F(2, 3), y) == F(4, 27)
    assert M.bernoulli_cylinder(F(1, 2), FinitePath((P(0, 0), P(0, 1), P(1, 1)))) == F(1, 4)


@settings(max_examples=30)
@given(probs, st.integers(0, 30))
def test_level_normalization(p, n):
    assert sum(M.level_masses(p, n)) == 1
    assert sum(comb(n, k) * M.bernoulli_vertex_mass(p, P(k, n - k)) for k in range(n + 1)) == 1


@settings(max_examples=20)
@given(probs)
def test_bernoulli_tail_invariance_and_consistency(p):
    d = Diagram.pascal(8)
    for n in range(8):
        for v in d.level_vertices(n):
            paths = d.enumerate_paths(v)
            assert not M.tail_invariance_violations(lambda x: M.bernoulli_cylinder(p, x), paths)
            x = paths[0]
            kids = [FinitePath(x.vertices + (w,)) for w, _ in d.children(v)]
            assert M.bernoulli_cylinder(p, x) == sum(M.bernoulli_cylinder(p, y) for y in kids)


def test_eigen_vector_examples():
    xi = M.eigen_vector_one_sided(F(3, 2), 6)
    assert xi == [1, F(1, 2), F(1, 4), F(1, 8), F(1, 16), F(1, 32)]
    assert M.eigen_vector_one_sided(2, 5) == [1] * 5
    assert all(r == 0 for r in M.eigen_residual_one_sided(F(3, 2), M.eigen_vector_one_sided(F(3, 2), 200)))


@settings(max_examples=30)
@given(lambdas, st.integers(2, 60))
def test_eigen_identity(lam, size):
    xi = M.eigen_vector_one_sided(lam, size)
    # independent route: explicit matrix with rows i -> {i, i+1}
    A = [[1 if j in (i, i + 1) else 0 for j in range(size)] for i in range(size - 1)]
    for i, row in enumerate(A):
        assert sum(a * x for a, x in zip(row, xi)) == lam * xi[i]


def test_mu_lambda_cylinder():
    assert M.mu_lambda_cylinder(F(3, 2), 3, 2) == F(1, 9)
    assert M.mu_lambda_cylinder(F(3, 2), 1, 0) == 1
    with pytest.raises(ValueError):
        M.mu_lambda_cylinder(F(3, 2), 0, 1)


@settings(max_examples=20)
@given(lambdas)
def test_mu_lambda_additivity(lam):
    for i in range(1, 30):
        for n in range(30):
            assert M.mu_lambda_cylinder(lam, i, n) == M.mu_lambda_cylinder(lam, i, n + 1) + M.mu_lambda_cylinder(
                lam, i + 1, n + 1
            )


def test_mu_lambda_total():
    t = M.mu_lambda_total(F(3, 2), 40)
    assert t.closed_form == 2 and 0 < t.remainder <= F(1, 2**39)
    assert M.mu_lambda_total(F(5, 4), 10).closed_form == F(4, 3)
    inf = M.mu_lambda_total(2, 10)
    assert inf.infinite and inf.closed_form is None and inf.witness == [1] * 8
    assert M.mu_lambda_total(3, 5).infinite


@settings(max_examples=20)
@given(st.fractions(min_value=F(31, 30), max_value=F(59, 30), max_denominator=30).filter(lambda x: 1 < x < 2))
def test_total_mass_remainder_is_geometric(lam):
    t = M.mu_lambda_total(lam, 25)
    r = lam - 1
    assert t.remainder == r**25 / (1 - r)


def test_restriction_examples():
    a = M.restriction_check(F(3, 2), 1, 12)
    assert a.ok and a.p == F(2, 3)
    assert M.restriction_check(F(4, 3), 2, 12).ok and M.restriction_check(F(4, 3), 2, 12).p == F(3, 4)
    neg = M.restriction_check(F(3, 2), 1, 12, p=F(1, 2))
    assert not neg.ok and neg.counterexample is not None


@settings(max_examples=20)
@given(st.fractions(min_value=F(21, 20), max_value=F(39, 20), max_denominator=20).filter(lambda x: 1 < x < 2), st.integers(1, 5))
def test_restriction_property(lam, anchor):
    assert M.restriction_check(lam, anchor, 8).ok


def test_x_min_examples():
    assert M.x_min_level_measure(F(1, 2), 3) == F(1, 2)
    assert M.x_min_level_measure(F(1, 2), 10) == F(11, 1024)
    for n in range(31):
        assert M.x_min_level_measure(F(1, 2), n) == F(n + 1, 2**n)


def test_x_min_bound_and_decay():
    for n in range(61):
        assert M.x_min_level_measure(F(1, 3), n) <= M.x_min_tail_bound(F(1, 3), n)
    for p in (F(1, 3), F(1, 2), F(2, 3)):
        vals = [M.x_min_level_measure(p, n) for n in range(61)]
        assert all(b < a for a, b in zip(vals[1:], vals[2:]))
        assert vals[60] < F(1, 10**6)
        # swapping p and 1 - p gives the maximal-path measure
        assert vals == [M.x_min_level_measure(1 - p, n) for n in range(61)]


def test_two_sided_examples():
    t = M.eigen_vector_two_sided(F(2, 3), (-3, 3))
    assert [t.values[i] for i in range(-3, 4)] == [F(1, 8), F(1, 4), F(1, 2), 1, 2, 4, 8]
    assert t.lam == F(3, 2) and t.identity_holds and t.divergent_tail == "right"
    h = M.eigen_vector_two_sided(F(1, 2), (-50, 50))
    assert all(v == 1 for v in h.values.values()) and h.lam == 2 and h.divergent_tail == "both"
    assert M.eigen_vector_two_sided(F(1, 3), (-2, 2)).divergent_tail == "left"


@settings(max_examples=30)
@given(probs, st.integers(-20, 0), st.integers(1, 20))
def test_two_sided_identity(p, lo, width):
    t = M.eigen_vector_two_sided(p, (lo, lo + width))
    assert t.identity_holds


def test_sampler_reproducible():
    a = M.sample_paths(F(7, 10), 50, 20, seed=123)
    b = M.sample_paths(F(7, 10), 50, 20, seed=123)
    c = M.sample_paths(F(7, 10), 50, 20, seed=124)
    assert a == b and a != c
    assert M.sample_path(F(7, 10), 50, 123) == a[0]
    assert all(len(x) == 50 and x.start == P(0, 0) for x in a)


def test_sampler_mean():
    steps = M.sample_steps(F(7, 10), 500, 10**5, seed=2024)
    freq = steps.mean(axis=1)
    se = math.sqrt(0.7 * 0.3 / 500) / math.sqrt(10**5)
    assert abs(freq.mean() - 0.7) < 3 * se


def test_sampler_cylinder_frequencies():
    p = F(2, 5)
    count = 10**5
    steps = M.sample_steps(p, 5, count, seed=77)
    codes = steps.astype(np.int64) @ (1 << np.arange(5))
    hist = np.bincount(codes, minlength=32)
    for code in range(32):
        bits = [(code >> k) & 1 for k in range(5)]
        path = M.steps_to_path(bits)
        exact = float(M.bernoulli_cylinder(p, path))
        sigma = math.sqrt(exact * (1 - exact) / count)
        assert abs(hist[code] / count - exact) < 3 * sigma + 1e-12
