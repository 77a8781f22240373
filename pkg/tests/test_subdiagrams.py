import math
from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pascal_adic import subdiagrams as S
from pascal_adic.diagram import PascalVertex
from pascal_adic.measures import BernoulliParam, mu_lambda_total

F = Fraction
P = PascalVertex


def threshold_oracle(p, i, budget):
    d = 2.0 ** (1 - i)
    if d > max(p, 1 - p):
        return 0
    N = 0
    while 2 * math.exp(-2 * d * d * (N + 1)) / (1 - math.exp(-2 * d * d)) > budget:
        N += 1
    return N


def test_hoeffding_examples():
    assert S.hoeffding_threshold(F(1, 2), 2, F(1, 20)) == 9
    assert S.hoeffding_threshold(F(1, 2), 1, F(1, 40)) == 0
    assert S.hoeffding_threshold(F(9, 10), 1, F(1, 10**9)) == 0


@settings(max_examples=60)
@given(
    st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20),
    st.integers(1, 6),
    st.fractions(min_value=F(1, 1000), max_value=F(1, 2), max_denominator=1000),
)
def test_hoeffding_matches_linear_search(p, i, budget):
    assert S.hoeffding_threshold(p, i, budget) == threshold_oracle(float(p), i, float(budget))
    assert S.hoeffding_threshold(p, i, budget / 2) >= S.hoeffding_threshold(p, i, budget)


def test_hoeffding_closed_form_is_tail_sum():
    d = 0.25
    N = S.hoeffding_threshold(F(1, 2), 3, F(1, 100))
    tail = sum(2 * math.exp(-2 * d * d * k) for k in range(N + 1, N + 20000))
    assert tail <= 0.01 + 1e-12


def test_band_spec_thresholds_increase():
    spec = S.band_spec(F(1, 2), F(1, 10), 400)
    assert spec.thresholds[0] == 0
    assert all(a < b for a, b in zip(spec.thresholds, spec.thresholds[1:]))
    assert spec.thresholds[-1] >= 400
    assert spec.certified_budget() < F(1, 10)
    assert spec.to_json()["epsilon"] == "1/10"


def test_band_subdiagram_intervals_and_vertical_path():
    sub, spec = S.build_band_subdiagram(F(1, 2), F(1, 10), 100)
    N2 = spec.thresholds[1]
    for n in range(101):
        assert sub.is_interval(n)
        lo, hi = sub.interval(n)
        assert lo <= n / 2 <= hi
    assert all(sub.contains(P(0, k)) for k in range(N2 + 1))
    assert not any(sub.contains(P(0, k)) for k in range(N2 + 1, 101))
    for n in range(100):
        for e in sub.edges(n):
            assert sub.contains(e.source) and sub.contains(e.range)


def test_band_subdiagram_every_vertex_is_on_a_feasible_path():
    sub, spec = S.build_band_subdiagram(F(3, 10), F(1, 2), 40)
    for n in range(40):
        for v in sub.W[n]:
            assert any(sub.contains(w) for w, _ in sub.base.children(v))
        if n:
            for v in sub.W[n]:
                assert any(sub.contains(u) for u, _ in sub.base.parents(v))


def test_smaller_epsilon_gives_larger_levels():
    a, _ = S.build_band_subdiagram(F(1, 2), F(1, 10), 200)
    b, _ = S.build_band_subdiagram(F(1, 2), F(1, 100), 200)
    for n in range(201):
        assert set(a.W[n]) <= set(b.W[n])


def brute_band_measure(spec, depth):
    p = spec.p.p
    total = F(0)
    for steps in product((0, 1), repeat=depth):
        x, ok = 0, True
        for k, s in enumerate(steps, start=1):
            x += s
            i = spec.active_band(k)
            if i is not None and not abs(F(x, k) - p) < F(2, 2**i):
                ok = False
                break
        if ok:
            total += p**x * (1 - p) ** (depth - x)
    return total


@pytest.mark.parametrize("p", [F(3, 10), F(1, 2), F(2, 3)])
def test_band_measure_matches_enumeration(p):
    spec = S.BandSpec(BernoulliParam(p), F(1, 2), [0, 2, 5, 9, 40])
    assert S.band_measure_dp(p, spec, 12) == brute_band_measure(spec, 12)


def test_band_measure_values():
    spec = S.band_spec(F(1, 2), F(1, 10), 200)
    assert S.band_measure_dp(F(1, 2), spec, spec.thresholds[1]) == 1
    for depth in (20, 80, 200):
        assert S.band_measure_dp(F(1, 2), spec, depth) > F(9, 10)
    for p in (F(3, 10), F(7, 10), F(1, 3)):
        spec = S.band_spec(p, F(1, 10), 200)
        assert S.band_measure_dp(p, spec, 200) > F(9, 10)


def test_band_disjointness_examples():
    d4 = S.band_disjointness(F(3, 10), F(7, 10), 4)
    assert d4.disjoint and d4.least_index == 4
    assert not S.band_disjointness(F(3, 10), F(7, 10), 2).disjoint
    assert S.band_disjointness(F(1, 10), F(9, 10), 2).least_index == 3
    with pytest.raises(ValueError):
        S.band_disjointness(F(1, 2), F(1, 2), 3)


@given(
    st.fractions(min_value=0, max_value=1, max_denominator=64),
    st.fractions(min_value=0, max_value=1, max_denominator=64),
    st.integers(1, 8),
)
def test_disjointness_is_interval_disjointness(p, q, i):
    if p == q:
        return
    d = F(2, 2**i)
    intervals_disjoint = p + d <= q - d or q + d <= p - d
    assert S.band_disjointness(p, q, i).disjoint == intervals_disjoint


def test_feasible_sets_disjoint_past_threshold():
    a, sa = S.build_band_subdiagram(F(3, 10), F(1, 10), 400)
    b, sb = S.build_band_subdiagram(F(7, 10), F(1, 10), 400)
    start = max(sa.thresholds[3], sb.thresholds[3])
    assert start < 400
    for n in range(start + 1, 401):
        assert not set(a.W[n]) & set(b.W[n])
    # earlier levels may overlap: the subdiagrams are not disjoint as graphs
    assert set(a.W[10]) & set(b.W[10])


# -- extension -------------------------------------------------------------------------------


def extension_oracle(anchor, p, n):
    q = 1 - p
    total = F(0)
    for k in range(n + 1):
        H = sum(comb(n, t) for t in range(min(n, anchor + k - 1) + 1))
        total += H * p ** (n - k) * q**k
    return total


@pytest.mark.parametrize("anchor", [1, 2, 3])
def test_extension_matches_direct_formula(anchor):
    r = S.extension_value(anchor, F(3, 4), range(0, 30, 3))
    assert r.values == [extension_oracle(anchor, F(3, 4), n) for n in r.schedule]


def test_extension_examples():
    for p, limit in ((F(3, 4), F(3, 2)), (F(2, 3), F(2))):
        r = S.extension_value(1, p, range(201))
        assert r.closed_form == limit == 1 / mu_lambda_total(1 / p, 1).closed_form ** -1
        assert abs(r.values[-1] - limit) < F(1, 10**9)
        assert not r.diverged
    assert S.extension_value(1, F(2, 5), range(201)).diverged


# for p = 9/10 and anchors 2, 3 the gap is still ~1e-6 at n = 200 and ~5e-11 at n = 300
@pytest.mark.parametrize("anchor", [1, 2, 3])
@pytest.mark.parametrize("p,n_max", [(F(2, 3), 200), (F(3, 4), 200), (F(9, 10), 300)])
def test_extension_limits_and_monotonicity(anchor, p, n_max):
    r = S.extension_value(anchor, p, range(n_max + 1))
    assert all(a <= b for a, b in zip(r.values, r.values[1:]))
    lam = 1 / p
    route2 = mu_lambda_total(lam, 1).closed_form / (lam - 1) ** (anchor - 1)
    assert abs(float(r.values[-1]) - float(route2)) < 1e-9


def test_extension_input_errors():
    with pytest.raises(ValueError):
        S.extension_value(0, F(3, 4), [1])
    with pytest.raises(ValueError):
        S.extension_value(1, F(3, 4), [])
