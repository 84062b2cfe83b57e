import itertools

import pytest
from hypothesis import given, strategies as st

from creature_lab.coloring import (BINARY, BRANCH, UNARY, Coloring, EmptyResultError,
                                   HomogenizationError, homogenize_binary, homogenize_branch,
                                   homogenize_unary, homogenize_zoo, is_homogeneous,
                                   is_homogeneous_zoo, monochromatic_subset, product_coloring,
                                   ramsey, ramsey_inv)
from creature_lab.creature import star
from creature_lab.generate import random_coloring, random_zoo
from creature_lab.zoo import Zoo


def test_ramsey_numbers():
    assert ramsey(2) == 16
    assert ramsey_inv(64) == 3
    assert ramsey_inv(4) == 1


def test_is_homogeneous_branch_parity():
    s = star("a0", range(4))
    c = Coloring(BRANCH, {l: l % 2 for l in range(4)}, (0, 1))
    assert is_homogeneous(star("a0", [0, 2]), s, c)
    assert not is_homogeneous(star("a0", [0, 1]), s, c)
    const = Coloring(BRANCH, {l: 0 for l in range(4)}, (0, 1))
    assert is_homogeneous(s, s, const)


def test_unary_majority_leftmost():
    s = star("a0", range(4))
    c = Coloring(UNARY, {0: 0, 1: 0, 2: 1, 3: 1, "a0": 0}, (0, 1))
    assert homogenize_unary(s, c, 2).leaves == (0, 1)
    const = Coloring(UNARY, {v: 1 for v in s.walk()}, (0, 1))
    assert homogenize_unary(s, const, s.norm()) == s


def test_unary_insufficient():
    s = star("a0", range(5))
    c = Coloring(UNARY, {0: 0, 1: 1, 2: 0, 3: 1, 4: 0, "a0": 0}, (0, 1))
    with pytest.raises(HomogenizationError):
        homogenize_unary(s, c, 4)


def _brute_mono(items, col, n):
    # first n-subset in lexicographic order whose pairs share a color
    for sub in itertools.combinations(items, n):
        if len({col[frozenset(p)] for p in itertools.combinations(sub, 2)}) == 1:
            return list(sub)
    return None


def _brute_mono_color(items, col, n, color):
    for sub in itertools.combinations(items, n):
        if all(col[frozenset(p)] == color for p in itertools.combinations(sub, 2)):
            return list(sub)
    return None


def test_binary_parity_six():
    s = star("r", range(6))
    m = {frozenset(p): (p[0] + p[1]) % 2 for p in itertools.combinations(range(6), 2)}
    t = homogenize_binary(s, Coloring(BINARY, m, (0, 1)), 3)
    assert list(t.leaves) == _brute_mono(range(6), m, 3) == [0, 2, 4]


def test_binary_not_found():
    # 5 points, pentagon / pentagram coloring: no monochromatic triangle
    m = {frozenset((i, j)): int((j - i) % 5 in (1, 4)) for i, j in itertools.combinations(range(5), 2)}
    assert _brute_mono(range(5), m, 3) is None
    with pytest.raises(HomogenizationError):
        homogenize_binary(star("r", range(5)), Coloring(BINARY, m, (0, 1)), 3)


def test_branch_examples():
    s = star("a0", range(4))
    t, v = homogenize_branch(s, Coloring(BRANCH, {l: l % 2 for l in range(4)}, (0, 1)), 2)
    assert t.leaves == (0, 2) and v == 0
    t, v = homogenize_branch(star("r", [0, 1, 2]), Coloring(BRANCH, {0: 0, 1: 1, 2: 1}, (0, 1)), 2)
    assert t.leaves == (1, 2) and v == 1


def test_zoo_branch_majority_drop():
    s = Zoo([star(f"a{i}", range(10 * i, 10 * i + 4)) for i in range(4)])
    vals = [0, 1, 0, 0]
    c = Coloring(BRANCH, {l: vals[l // 10] for l in s.ext()}, (0, 1))
    t = homogenize_zoo(s, c)
    assert t.roots() == ["a0", "a2", "a3"]


def test_zoo_floor_failure():
    s = Zoo([star(f"a{i}", range(10 * i, 10 * i + 4)) for i in range(2)])
    m = {}
    for S in s.creatures:
        ls = list(S.leaves)
        for i, j in itertools.combinations(range(4), 2):
            m[frozenset((ls[i], ls[j]))] = (i + j) % 2
    with pytest.raises(EmptyResultError):
        homogenize_zoo(s, Coloring(BINARY, m, (0, 1)))


def test_monochromatic_subset_matches_brute():
    import numpy as np
    rng = np.random.default_rng(3)
    for _ in range(30):
        m = {frozenset(p): int(rng.integers(0, 2)) for p in itertools.combinations(range(9), 2)}
        c = Coloring(BINARY, m, (0, 1))
        got = monochromatic_subset(list(range(9)), c, 3)
        want = _brute_mono(range(9), m, 3)
        assert (got is None) == (want is None)
        if got is not None:
            color, sub = got
            assert {m[frozenset(p)] for p in itertools.combinations(sub, 2)} == {color}
            # lex-first among subsets of the first color that has one
            assert sub == _brute_mono_color(range(9), m, 3, color)


def test_product_coloring_json():
    s = star("a0", range(4))
    a = Coloring(UNARY, {v: 0 for v in s.walk()}, (0, 1))
    b = Coloring(UNARY, {v: 1 for v in s.walk()}, (0, 1))
    p = product_coloring([a, b])
    assert p(0) == (0, 1)
    assert Coloring.from_json(p.to_json())(0) == (0, 1)


@given(st.integers(0, 10 ** 6), st.sampled_from([UNARY, BRANCH]))
def test_homogenized_zoo_is_homogeneous(seed, kind):
    s = random_zoo(seed, n=(2, 4), arity=(8, 12))
    c = random_coloring(s, kind, 2, seed)
    try:
        t = homogenize_zoo(s, c)
    except EmptyResultError:
        return
    assert is_homogeneous_zoo(t, s, c)
