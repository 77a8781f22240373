import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pascal_adic.diagram import Diagram, Edge, FinitePath, GenVertex, PascalVertex
from pascal_adic.errors import CapExceeded, OutOfWindow
from pascal_adic.export import orbit_json
from pascal_adic.measures import bernoulli_cylinder
from pascal_adic.orders import OrderBuilder, barrier_order, canonical_order, countable_max_order, mirrored_order
from pascal_adic.vershik import (
    AtExtreme,
    barrier_certificate,
    barrier_hit_dp,
    extreme_path_exists,
    fiber_orbit,
    predecessor,
    successor,
)

P = PascalVertex
V = GenVertex


def brute_successor(order, x):
    """Next path in the reverse-lexicographic order of label sequences."""
    paths = order.diagram.enumerate_paths(x.end)

    def key(y):
        return [order.label(e) for e in reversed(y.edges)]

    ranked = sorted(paths, key=key)
    k = ranked.index(x)
    return ranked[k + 1] if k + 1 < len(ranked) else AtExtreme.MAXIMAL


def test_successor_example():
    o = canonical_order(Diagram.pascal(4))
    x = FinitePath((P(0, 0), P(0, 1), P(1, 1)))
    assert successor(o, x) == FinitePath((P(0, 0), P(1, 0), P(1, 1)))
    assert successor(o, o.extreme_path(P(2, 2), "max")) is AtExtreme.MAXIMAL
    assert predecessor(o, o.extreme_path(P(2, 2), "min")) is AtExtreme.MINIMAL
    assert len(fiber_orbit(o, P(2, 1))) == 3


@pytest.mark.parametrize("make", [canonical_order, mirrored_order, lambda d: countable_max_order(d.depth)])
def test_successor_matches_label_ordering(make):
    o = make(Diagram.pascal(6))
    for n in range(7):
        for v in o.diagram.level_vertices(n):
            for x in o.diagram.enumerate_paths(v):
                assert successor(o, x) == brute_successor(o, x)


def random_order(depth, choices):
    d = Diagram.pascal(depth)
    b = OrderBuilder(d)
    for (i, j), lab in choices.items():
        if 1 <= i and 1 <= j and i + j <= depth:
            b.force(Edge(P(i - 1, j), P(i, j)), lab)
    return b.build()


@settings(max_examples=25, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(1, 6), st.integers(1, 6)), st.sampled_from([0, 1]), max_size=20))
def test_towers_for_random_orders(choices):
    o = random_order(7, choices)
    d = o.diagram
    for n in range(8):
        for v in d.level_vertices(n):
            chain = fiber_orbit(o, v)
            assert len(chain) == d.path_count(v)
            assert set(chain) == set(d.enumerate_paths(v))
            succs = [successor(o, x) for x in chain[:-1]]
            assert len(set(succs)) == len(succs)
            for x, y in zip(chain, chain[1:]):
                assert y.end == x.end
                assert predecessor(o, y) == x
                assert bernoulli_cylinder("2/3", x) == bernoulli_cylinder("2/3", y)


def test_tower_on_two_by_two():
    for o in (canonical_order(Diagram.pascal(4)), countable_max_order(4)):
        chain = fiber_orbit(o, P(2, 2))
        assert len(chain) == 6
        assert chain[-1] == o.extreme_path(P(2, 2), "max")


def test_gen1_leftmost_tower():
    o = canonical_order(Diagram.gen1(9, hi=11))
    assert len(fiber_orbit(o, V(1, 9))) == 1


def test_fiber_orbit_cap():
    with pytest.raises(CapExceeded):
        fiber_orbit(canonical_order(Diagram.pascal(30)), P(15, 15), cap=100)


def test_successor_rejects_foreign_path():
    o = canonical_order(Diagram.pascal(3))
    with pytest.raises(OutOfWindow):
        successor(o, FinitePath((P(0, 0), P(1, 1))))


def test_orbit_json_format():
    o = canonical_order(Diagram.pascal(3))
    data = json.loads(orbit_json(o, fiber_orbit(o, P(1, 1))))
    assert data[0][0] == {"level": 0, "from": "0,0", "to": "0,1", "label": 0}
    assert len(data) == 2 and all(len(x) == 2 for x in data)


# -- barriers ----------------------------------------------------------------------------


def exhaustive_hit(edges, start, level):
    edges = set(edges)
    for steps in product((0, 1), repeat=level):
        m, hit = start, False
        for k, s in enumerate(steps):
            hit |= Edge(V(m, k), V(m + s, k + 1)) in edges
            m += s
        if not hit:
            return False
    return True


def test_barrier_certificates():
    d = Diagram.gen2(56, -2, 40)
    _, barriers = barrier_order(d, {(0, 0): 1, (0, 1): 2, (1, 0): 3})
    for b in barriers:
        r = barrier_certificate(barriers, d, b.n, b.i)
        assert r.hit_all and r.witness is None
    k3 = next(b for b in barriers if b.K == 3)
    for level in (7, 8):
        assert barrier_hit_dp(d, k3.edges, 0, level).hit_all == exhaustive_hit(k3.edges, 0, level)


def test_corrupted_barrier_escapes():
    d = Diagram.gen2(20, -2, 12)
    _, barriers = barrier_order(d, {(0, 0): 1})
    edges = [e for e in barriers[0].edges if e != Edge(V(2, 5), V(2, 6))]
    r = barrier_hit_dp(d, edges, 0, 8)
    assert not r.hit_all
    assert r.witness.start == V(0, 0) and r.witness.end.level == 8
    assert not set(r.witness.edges) & set(edges)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 8), st.integers(0, 7), st.integers(0, 1)), max_size=25), st.integers(1, 8))
def test_barrier_dp_matches_enumeration(raw, level):
    d = Diagram.gen2(10, -1, 20)
    edges = [Edge(V(m, k), V(m + s, k + 1)) for m, k, s in raw]
    r = barrier_hit_dp(d, edges, 0, level)
    assert r.hit_all == exhaustive_hit(edges, 0, level)
    if not r.hit_all:
        assert not set(r.witness.edges) & set(edges)


def test_no_extreme_paths_past_barriers():
    d = Diagram.gen2(56, -2, 40)
    order, _ = barrier_order(d, {(0, 0): 1, (0, 1): 2, (1, 0): 3})
    assert not extreme_path_exists(order, 0, "max", 8)
    assert not extreme_path_exists(order, 0, "min", 20)
    assert not extreme_path_exists(order, 1, "max", 56)
    assert extreme_path_exists(order, 0, "min", 7)


def test_barrier_dp_window_and_kind_errors():
    with pytest.raises(ValueError):
        barrier_hit_dp(Diagram.pascal(5), [], 0, 3)
    with pytest.raises(OutOfWindow):
        barrier_hit_dp(Diagram.gen2(10, 0, 3), [], 0, 6)
