import pytest
from hypothesis import given, strategies as st

from creature_lab.creature import Creature, star
from creature_lab.generate import MUTATIONS, random_zoo, seed_zoo, z1
from creature_lab.zoo import (BlockTooShortError, ChainNotNestedError, FloorViolation, Front,
                              RecycledNodeError, Zoo, ZooError, apply_recipe, check_le, drop,
                              effective_cut, eq_star, ext_front, front_enumerate, glue, limit,
                              rename_disjoint, roots_front, shrink, star_front_check,
                              validate_prefix)


def test_validate_prefix():
    assert validate_prefix(z1()) is None
    v = validate_prefix(Zoo([star("a", range(3)), star("b", range(10, 14))]))
    assert v.clause == "norm-floor"
    v = validate_prefix(Zoo([star("a", range(4)), star("b", range(2, 6))]))
    assert v is not None


def test_eq_star():
    Z = z1()
    assert eq_star(Z, Z) == (0, 0)
    assert eq_star(Z, Z.tail(1)) == (1, 0)
    assert eq_star(Z, Zoo([star("q", range(20, 24))])) is None


def test_drop():
    s = seed_zoo(4, 6)
    assert len(drop(s, [0, 2])) == 2
    assert drop(s, [0, 1, 2, 3]) == s
    with pytest.raises(ZooError):
        drop(s, [])


def test_shrink():
    s = seed_zoo(3, 8)
    assert shrink(s, list(s.creatures)) == s
    half = [star(S.root, S.leaves[::2]) for S in s.creatures]
    t = shrink(s, half)
    assert validate_prefix(t) is None and t.norms() == [4, 4, 4]
    with pytest.raises(FloorViolation):
        shrink(s, {0: star(s.creatures[0].root, s.creatures[0].leaves[:3])})


def test_glue():
    s = seed_zoo(10, 6)
    g = glue(s, [0, 5, 10])
    assert len(g) == 2 and [len(S.succ(S.root)) for S in g.creatures] == [5, 5]
    assert validate_prefix(g) is None
    with pytest.raises(BlockTooShortError):
        glue(s, [0, 3])


def test_apply_recipe_cases():
    s = seed_zoo(6, 6)
    improper = [Creature(k) for k in (0, 2, 4)]
    assert apply_recipe(s, improper) == drop(s, [0, 2, 4])
    one = [Creature("t", {"t": [0, 1, 2, 3, 4]})]
    assert apply_recipe(s, one).tail(0).creatures[0].leaves == glue(s, [0, 5]).creatures[0].leaves
    recycled = [Creature(s.creatures[5].root, {s.creatures[5].root: [0, 1, 2, 3, 4]})]
    with pytest.raises(RecycledNodeError):
        apply_recipe(s, recycled, strict=True)


def test_check_le():
    s = seed_zoo(10, 6)
    w = check_le(drop(s, [0, 2, 4, 6, 8]), s)
    assert w is not None and all(R.is_leaf(R.root) for R in w.recipe)
    g = glue(s, [0, 5, 10])
    w = check_le(g, s, strict=True)
    assert [R.root for R in w.recipe] == g.roots()
    assert check_le(z1(), s) is None


def test_rename_disjoint():
    s = seed_zoo(4, 6)
    r = rename_disjoint(s, [s])
    assert r.ext() == s.ext() and not r.internal_nodes() & s.internal_nodes()
    other = Zoo([star("zz", range(100, 106))])
    assert rename_disjoint(other, [s]) == other


def test_limit_cases():
    s0 = seed_zoo(6, 6)
    res = limit([s0])
    assert res.zoo.creatures[0] == s0.creatures[0]
    # member n needs a head of norm >= n + 4, so blocks of 6
    chain = [seed_zoo(48, 8)]
    chain.append(glue(chain[0], list(range(0, 49, 6))))
    chain.append(drop(chain[1], [1, 3, 5, 7]))
    res = limit(chain)
    assert len(res.zoo) == 3
    for n, sn in enumerate(chain):
        assert check_le(res.zoo.tail(n), sn, strict=True) is not None
    with pytest.raises(ChainNotNestedError):
        limit([seed_zoo(6, 6), z1()])


def test_star_fronts():
    s = seed_zoo(4, 6)
    assert star_front_check(ext_front(s), s) == 0
    assert front_enumerate(ext_front(s), s) == s.ext()
    assert star_front_check(roots_front(s), s) == 0
    assert star_front_check(Front(frozenset(s.roots()[1:])), s) == 1
    assert effective_cut(Front(frozenset(s.roots()[1:])), s) == 1


def test_json_roundtrip():
    s = seed_zoo(5, 6)
    t = Zoo.from_json(s.to_json())
    assert t == s and t.to_json() == s.to_json()
    F = roots_front(s)
    assert Front.from_json(F.to_json()) == F


@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(MUTATIONS)))
def test_mutations_are_caught(seed, name):
    import numpy as np
    s = random_zoo(seed, n=(2, 5))
    assert validate_prefix(s) is None
    fn, clause = MUTATIONS[name]
    try:
        bad = fn(s, np.random.default_rng(seed))
    except Exception:
        # the constructor itself may already refuse the broken tree
        return
    v = validate_prefix(bad)
    assert v is not None and v.clause == clause


@given(st.integers(0, 10 ** 6))
def test_le_is_reflexive_and_drop_transitive(seed):
    s = random_zoo(seed, n=(3, 6))
    assert check_le(s, s, strict=True) is not None
    t = drop(s, list(range(0, len(s), 2)))
    u = drop(t, [len(t) - 1])
    assert check_le(u, t) is not None and check_le(u, s) is not None
