import numpy as np
import pytest
from hypothesis import given, strategies as st

from creature_lab.creature import Creature
from creature_lab.gauge import (ABOVE, BELOW, EQUAL, EmptyTailError, GaugeError, check_gauges,
                                classify_distance, comparison_coloring, compare_functions,
                                dichotomy, distance_colorings, front_compare, front_to_function,
                                gauge, is_strong_zoo, make_strong, node_class, strength_coloring)
from creature_lab.generate import gen_zoo, seed_zoo, strong_random_zoo, z1
from creature_lab.growth import Affine, PointwiseMax, Power, Successor, library
from creature_lab.zoo import Front, Zoo, as_nodes, ext_front, glue, roots_front

f1, f2 = Successor(), Affine(1, 5)


def test_node_class_z1():
    Z = z1()
    assert node_class(Z, f1, "a0") == "strong"
    assert node_class(Z, f2, "a0") == "weak"
    assert all(node_class(Z, f, l) == "weak" for f in (f1, f2) for l in Z.ext())


def test_strong_cuts():
    Z = z1()
    assert is_strong_zoo(Z, f1) == 0
    assert is_strong_zoo(Z, f2) == 0
    assert is_strong_zoo(Z, Affine(1, 20)) is None


def test_make_strong():
    Z = z1()
    assert make_strong(Z, f1) == Z
    with pytest.raises(EmptyTailError) as e:
        make_strong(Z, Affine(1, 20))
    assert len(e.value.partial) == 1
    s6 = gen_zoo({"creatures": 6, "depth": 1, "arity": 4, "gap": 10})
    t = make_strong(s6, Affine(1, 15))
    assert t.roots() == s6.roots()[::2]


def test_strength_coloring_pairs():
    Z = z1()
    c1, c2 = strength_coloring(Z, f1), strength_coloring(Z, f2)
    assert c1(frozenset((0, 1))) == "undecided"
    assert c1(frozenset((0, 2))) == "strong"
    assert c2(frozenset((0, 3))) == "weak"


def test_gauge_z1():
    Z = z1()
    assert gauge(Z, f1).front.nodes == frozenset(Z.ext())
    assert gauge(Z, f2).front.nodes == frozenset(Z.roots())
    with pytest.raises(GaugeError):
        gauge(Z, Affine(1, 20))


def test_check_gauges_z1():
    Z = z1()
    assert check_gauges(ext_front(Z), Z, f1)
    assert check_gauges(roots_front(Z), Z, f2)
    assert not check_gauges(roots_front(Z), Z, f1)


def test_front_compare_examples():
    Z = z1()
    c = front_compare(ext_front(Z), roots_front(Z), Z)
    assert c.relation == BELOW and c.strict and c.distance == 1 and c.cut == 0
    c = front_compare(ext_front(Z), ext_front(Z), Z)
    assert c.relation == EQUAL and c.distance == 0
    g = glue(seed_zoo(10, 6), [0, 5, 10])
    assert front_compare(ext_front(g), roots_front(g), g).distance == 2
    assert front_compare(roots_front(Z), ext_front(Z), Z).relation == ABOVE


def test_comparison_coloring_constant():
    Z = z1()
    c = comparison_coloring(ext_front(Z), roots_front(Z), Z)
    assert set(c.assignment.values()) == {"small"}


def test_distance_colorings_plus_one():
    Z = z1()
    cs0 = distance_colorings(ext_front(Z), roots_front(Z), Z, 0)
    assert set(cs0[0].assignment.values()) == {"big"}
    assert classify_distance(cs0) is None
    assert classify_distance(distance_colorings(ext_front(Z), roots_front(Z), Z, 3)) == 1


def _crossing(seed):
    # depth 2 creatures; inside every creature F takes the middle node on even
    # children and the leaves on odd ones, G the other way round
    s = glue(seed_zoo(32, 6, prefix=f"x{seed}"), [0, 8, 16, 24, 32])
    F, G = set(), set()
    for S in s.creatures:
        for i, v in enumerate(S.succ(S.root)):
            (F if i % 2 == 0 else G).add(v)
            (G if i % 2 == 0 else F).update(S.succ(v))
    return s, Front(frozenset(F)), Front(frozenset(G))


def test_crossing_needs_and_gets_homogenization():
    s, F, G = _crossing(0)
    assert not front_compare(F, G, s).definite
    d = dichotomy(F, G, s, 5)
    assert d.comparison.definite
    assert d.profile.kind in ("plus", "exceeds")


def test_front_to_function_roundtrip():
    Z = z1()
    p = front_to_function(roots_front(Z), Z)
    assert [p(n) for n in range(4)] == [4, 4, 4, 4]
    assert gauge(Z, p).front == roots_front(Z)
    s = seed_zoo(6, 6)
    r = gauge(s, front_to_function(ext_front(s), s))
    assert front_compare(r.front, ext_front(r.zoo), r.zoo).relation == EQUAL


def test_compare_functions():
    Z = z1()
    r = compare_functions(Z, f1, f2)
    assert r.relation == "≺" and r.cut == 0
    assert compare_functions(Z, f2, f2).relation == "≈"


@given(st.integers(0, 10 ** 6), st.sampled_from(list(library())), st.sampled_from(list(library())))
def test_pointwise_le_never_reverses(seed, a, b):
    f, g = library()[a], library()[b]
    s = strong_random_zoo(seed, PointwiseMax(f, g))
    xs = np.arange(s.max_ext() + 1)

    def above(u, v):
        # -1 marks values past int64, which count as huge
        a, b = u.values(xs), v.values(xs)
        return bool(((a < 0) & (b >= 0) | (a > b) & (b >= 0)).any())

    if above(f, g):
        f, g = g, f
    if above(f, g):
        return  # the two cross inside the prefix
    try:
        r = compare_functions(s, f, g)
    except (GaugeError, EmptyTailError):
        return
    assert r.relation not in ("≻", "≽")


@given(st.integers(0, 10 ** 6), st.sampled_from(list(library())))
def test_gauge_output_gauges(seed, name):
    f = library()[name]
    s = strong_random_zoo(seed, f)
    try:
        r = gauge(s, f)
    except GaugeError:
        return
    assert check_gauges(r.front, r.zoo, f)
    # gauging a gauged prefix is a no-op
    assert gauge(r.zoo, f).front == r.front
