import pytest

from creature_lab.builder import demand, generic_builder
from creature_lab.gauge import gauge
from creature_lab.generate import seed_zoo, z1
from creature_lab.growth import Affine, Successor
from creature_lab.lab import (ArityExhaustedError, NeverDefiniteError, PremiseError,
                              chain_compare, restrict_front, verify_crucial, verify_leq,
                              verify_not)
from creature_lab.zoo import Front, as_nodes, ext_front, roots_front

f1, f2 = Successor(), Affine(1, 5)


def test_leq_z1():
    r = verify_leq(z1(), f1, f2)
    assert r.ok and r.checked == [(0, 2)] and r.points() == [0, 1, 2]
    # the bound by hand: h_A(0) = 1, f2(1) = 6, h_A(6) = 10
    assert all(f1(n) <= 10 for n in r.points())


def test_leq_equal_functions():
    r = verify_leq(z1(), f2, f2)
    assert r.ok and r.relation == "≈"


def test_leq_detector_fires():
    with pytest.raises(PremiseError):
        verify_leq(z1(), f2, f1)
    r = verify_leq(z1(), f2, f1, check_premise=False)
    assert not r.ok and r.counterexample["n"] == 0


def test_not_z1():
    r = verify_not(z1(), f1, f2, 3)
    assert r.ok
    w = r.witnesses[3]
    assert w.eta == "a0" and w.iterate == 3 and w.top == 3 and w.g_value == 5
    assert verify_not(z1(), f1, f2, 0).ok
    with pytest.raises(ArityExhaustedError):
        verify_not(z1(), f1, f2, 4)


def test_crucial():
    Z = z1()
    F1 = gauge(Z, f2).front
    assert verify_crucial(Z, f2, F1, F1) == 0
    S0 = Z.creatures[0]
    F2 = Front((as_nodes(F1) - {S0.root}) | set(S0.leaves), cut=1)
    assert verify_crucial(Z, f2, F1, F2) == 1
    with pytest.raises(PremiseError):
        verify_crucial(Z, f2, F1, ext_front(Z))


def test_chain_compare():
    log = generic_builder(seed_zoo(20, 8), [demand("root-shift")])
    z0 = log.stages[0].zoo
    r = chain_compare(log, ext_front(z0), roots_front(z0))
    assert r.stage == 0 and r.relation == "below"
    r = chain_compare(log, roots_front(z0), roots_front(z0))
    assert r.relation == "equal" and r.stage == 0


def test_chain_compare_never_definite():
    Z = z1()
    with pytest.raises(NeverDefiniteError):
        chain_compare([Z], Front(frozenset(["a0"])), ext_front(Z))


def test_restrict_front():
    Z = z1()
    F = restrict_front(ext_front(Z), Z.tail(1))
    assert F.nodes == frozenset(Z.tail(1).ext())
