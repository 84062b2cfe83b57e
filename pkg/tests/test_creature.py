import pytest
from hypothesis import given, strategies as st

from creature_lab.creature import (Creature, ImproperCreatureError, LabelSource, front_check,
                                   is_subtree, leaf, lex_compare, min_max_of, nor_node, star,
                                   validate_creature)
from creature_lab.generate import random_creature


def test_validate_basic():
    assert validate_creature(leaf(7)) is None
    assert validate_creature(star("a0", range(4))) is None


def test_overlapping_intervals():
    bad = Creature("r", {"r": ["x", "y"], "x": [0, 3], "y": [2, 5]})
    v = validate_creature(bad)
    assert v is not None and v.clause == "overlapping-leaf-intervals"


def test_norm():
    assert star("r", range(4)).norm() == 4
    t = Creature("r", {"r": ["a", "b"], "a": [0, 1, 2, 3, 4], "b": [5, 6, 7, 8]})
    assert t.norm() == 2
    with pytest.raises(ImproperCreatureError):
        leaf(7).norm()


def test_min_max_and_lex():
    c = star("a0", range(4))
    assert min_max_of(leaf(7), 7) == (7, 7)
    assert min_max_of(c, "a0") == (0, 3)
    t = Creature("r", {"r": ["x", "y"], "x": [0, 1, 2, 3], "y": [10, 12]})
    assert min_max_of(t, "y") == (10, 12)
    assert lex_compare(c, 2, 5 - 2) == "lt"
    assert lex_compare(c, "a0", 1) == "tree-comparable"
    u = Creature("r", {"r": ["x", "y"], "x": [0, 1, 2, 3], "y": [10, 11, 12, 13]})
    assert lex_compare(u, "x", "y") == "lt"
    assert lex_compare(u, "y", "x") == "gt"


def test_subtree():
    c = star("a0", range(4))
    assert is_subtree(c, c)
    assert is_subtree(star("a0", range(3)), c)
    assert not is_subtree(star("other", range(3)), c)


def test_fronts_in_a_creature():
    c = star("a0", range(4))
    assert front_check(c, ["a0"])
    assert front_check(c, list(range(4)))
    assert not front_check(c, ["a0", 0])
    assert not front_check(c, [0, 1, 2])


def test_nor_node():
    assert nor_node(star("r", range(4)), "r") == 0
    assert nor_node(star("r", range(256)), "r") == 1
    assert nor_node(star("r", range(255)), "r") == 0
    assert nor_node(Creature("r", {"r": [0, 1, 2]}), "r") == 0


def test_json_roundtrip_and_relabel():
    c = Creature("r", {"r": ["x", "y"], "x": [0, 1, 2, 3], "y": [10, 11, 12, 13]})
    assert Creature.from_json(c.to_json()) == c
    d = c.relabel({"x": "z"})
    assert "z" in d.nodes and d.leaves == c.leaves


def test_label_source_avoids():
    src = LabelSource("v").avoid(["v0", "v1", "v7"])
    got = {src.fresh() for _ in range(5)}
    assert not got & {"v0", "v1", "v7"}


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_random_creatures_are_valid(seed, depth):
    S = random_creature(seed, depth, (4, 7), start=seed % 50)
    assert validate_creature(S) is None
    assert S.norm() >= 4
    # branches are root-to-leaf paths through every leaf exactly once
    assert sorted(b[-1] for b in S.branches()) == list(S.leaves)
    for v in S.walk():
        lo, hi = min_max_of(S, v)
        assert lo <= hi
