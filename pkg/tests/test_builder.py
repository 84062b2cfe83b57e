import json

from creature_lab.builder import ChainLog, Demand, demand, generic_builder, verify_chain_properties
from creature_lab.coloring import BRANCH, UNARY
from creature_lab.gauge import front_compare, is_strong_zoo
from creature_lab.generate import gen_zoo, seed_zoo
from creature_lab.growth import Affine, Successor
from creature_lab.lab import restrict_front
from creature_lab.zoo import check_le, ext_front, roots_front


def test_single_make_strong():
    seed = gen_zoo({"creatures": 6, "depth": 1, "arity": 4, "gap": 10})
    log = generic_builder(seed, [demand("make-strong", Affine(1, 5))])
    assert len(log.stages) - 1 == 1
    assert is_strong_zoo(log.final, Affine(1, 5)) == 0
    assert log.demands[0].status == "satisfied"


def test_root_shift_distance_one():
    log = generic_builder(seed_zoo(20, 8), [demand("root-shift")])
    z = log.final
    old = restrict_front(roots_front(log.stages[0].zoo), z)
    c = front_compare(old, roots_front(z), z)
    assert c.relation == "below" and c.distance == 1


def test_small_integration():
    ds = [demand("homogenize", coloring={"rule": "random", "kind": UNARY, "colors": 2, "seed": 1}),
          demand("homogenize", coloring={"rule": "random", "kind": BRANCH, "colors": 2, "seed": 2}),
          demand("homogenize", coloring={"rule": "random", "kind": UNARY, "colors": 3, "seed": 3}),
          demand("make-strong", Successor()),
          demand("make-strong", Affine(1, 5))]
    log = generic_builder(seed_zoo(64, 16), ds, max_stages=5)
    assert sum(st.kind == "demand" for st in log.stages) <= 5
    assert all(d.status == "satisfied" for d in log.demands)
    assert all(ok for _, ok in log.stage_relations())
    assert all(log.reverify().values())


def test_stages_are_strictly_nested():
    log = generic_builder(seed_zoo(128, 16), [demand("root-shift"), demand("make-strong", Successor())])
    zs = log.zoos()
    for a, b in zip(zs, zs[1:]):
        assert check_le(b.tail(0), a, strict=True) is not None or any(
            check_le(b.tail(k), a, strict=True) is not None for k in range(len(b)))


def test_chainlog_json_roundtrip():
    ds = [demand("make-strong", Affine(1, 5)), demand("root-shift"),
          demand("homogenize", coloring={"rule": "dichotomy", "F": "ext", "G": "roots", "N": 3})]
    log = generic_builder(seed_zoo(64, 12), ds)
    text = json.dumps(log.to_json(), sort_keys=True)
    back = ChainLog.from_json(json.loads(text))
    assert json.dumps(back.to_json(), sort_keys=True) == text
    assert back.reverify() == log.reverify()


def test_demand_json():
    d = demand("make-strong", Affine(2, 1))
    assert Demand.from_json(d.to_json()).to_json() == d.to_json()


def test_chain_properties_pairs():
    log = generic_builder(seed_zoo(20, 8), [demand("root-shift")])
    z0 = log.stages[0].zoo
    rep = verify_chain_properties(log, pairs=[(ext_front(z0), roots_front(z0)), (roots_front(z0), roots_front(z0))])
    a, b = rep["pairs"]
    assert a["comparable"] and a["kind"] == "plus" and a["n"] == 1
    assert b["relation"] == "equal"
    assert rep["ext_class"]["ok"]


def test_chain_properties_dichotomy_stage():
    ds = [demand("root-shift"),
          demand("homogenize", coloring={"rule": "dichotomy", "F": "ext", "G": "roots", "N": 5})]
    log = generic_builder(seed_zoo(64, 12), ds)
    rep = verify_chain_properties(log)
    assert rep["ok"] and rep["pairs"][0]["comparable"]
