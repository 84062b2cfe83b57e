import pytest
from hypothesis import given, strategies as st

from creature_lab.coloring import BINARY, BRANCH, UNARY
from creature_lab.generate import (gen_zoo, random_coloring, random_front, random_growth,
                                   random_zoo, seed_zoo, strong_random_zoo, z1)
from creature_lab.growth import check_growth
from creature_lab.zoo import ZooError, effective_cut, validate_prefix


def test_gen_z1_like():
    s = gen_zoo({"creatures": 4, "depth": 1, "arity": 4, "gap": 10})
    assert [S.leaves for S in s.creatures][:2] == [(0, 1, 2, 3), (14, 15, 16, 17)]
    assert validate_prefix(s) is None
    z = gen_zoo({"creatures": 2, "depth": 1, "arity": 4, "gap": 6})
    assert z.ext() == z1().ext()


def test_gen_deterministic():
    shape = {"creatures": 5, "depth": 2, "arity": [4, 8], "gap": [1, 5]}
    assert gen_zoo(shape, 7).to_json() == gen_zoo(shape, 7).to_json()


@pytest.mark.parametrize("shape", [{"arity": 3}, {"depth": 4}, {"gap": 0}, {"creatures": 0}])
def test_gen_rejects(shape):
    with pytest.raises(ZooError):
        gen_zoo(shape)


def test_seed_zoo_extends():
    s = seed_zoo(4, 6)
    assert s.extended(8).tail(0).creatures[:4] == s.creatures


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_random_zoos_valid(seed, depth):
    s = random_zoo(seed, depth=depth)
    assert validate_prefix(s) is None


@given(st.integers(0, 10 ** 6), st.sampled_from([UNARY, BINARY, BRANCH]))
def test_random_coloring_total_and_seeded(seed, kind):
    s = random_zoo(seed, n=(2, 3))
    c = random_coloring(s, kind, 3, seed)
    assert random_coloring(s, kind, 3, seed).to_json() == c.to_json()
    assert set(c.assignment.values()) <= {0, 1, 2}


@given(st.integers(0, 10 ** 6))
def test_random_front_is_front(seed):
    s = random_zoo(seed)
    assert effective_cut(random_front(s, seed), s) == 0


@given(st.integers(0, 10 ** 6))
def test_random_growth_valid(seed):
    assert check_growth(random_growth(seed, table_len=50), 40) is None


@given(st.integers(0, 10 ** 6))
def test_strong_random_zoo_gaps(seed):
    from creature_lab.growth import Affine
    f = Affine(2, 3)
    s = strong_random_zoo(seed, f)
    assert validate_prefix(s) is None
    for a, b in zip(s.creatures, s.creatures[1:]):
        assert f(a.hi(a.root)) <= b.lo(b.root)
