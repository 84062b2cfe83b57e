"""Brute-force checks of the bridge between front order and ≤_A."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .gauge import (ABOVE, BELOW, EQUAL, FrontComparison, check_gauges, compare_functions,
                    front_compare)
from .growth import HA, IndexSet, OutOfRangeError
from .zoo import Front, FrontError, Zoo, as_nodes, effective_cut


class PremiseError(ValueError):
    pass


class EmptyRangeError(ValueError):
    pass


class ArityExhaustedError(ValueError):
    pass


class NeverDefiniteError(ValueError):
    pass


def _safe(fn, x):
    try:
        return fn(x)
    except OutOfRangeError:
        return None


@dataclass
class LeqReport:
    ok: bool
    checked: list  # maximal intervals [lo, hi] of checked n
    counterexample: dict | None = None
    part1_checked: int = 0
    cut: int = 0
    relation: str | None = None

    def __bool__(self):
        return self.ok

    @property
    def count(self):
        return sum(hi - lo + 1 for lo, hi in self.checked)

    def points(self):
        return [n for lo, hi in self.checked for n in range(lo, hi + 1)]

    def to_json(self):
        ch = self.checked
        return {"ok": self.ok, "checked": self.count, "intervals": [list(x) for x in ch],
                "range": [ch[0][0], ch[-1][1]] if ch else None,
                "counterexample": self.counterexample, "part1_checked": self.part1_checked,
                "cut": self.cut, "relation": self.relation}


def verify_leq(s: Zoo, f, g, check_premise: bool = True) -> LeqReport:
    """f(n) <= h_A(g(h_A(n))) with A = ext beyond the cut, wherever all three
    evaluations stay inside the leaf range; plus f(k) <= h_A(g(k)) on A.

    h_A is constant on each [a_{i-1}, a_i - 1] and f is monotone, so one
    evaluation at the right end of each such interval settles all of it.
    check_premise=False skips gauging and the f ≼ g premise, which lets one
    feed a deliberately wrong pair to see the detector fire.
    """
    rel = None
    if check_premise:
        cmp = compare_functions(s, f, g)
        rel = cmp.relation
        if rel not in ("≈", "≺", "≼"):
            raise PremiseError(f"premise f ≼ g fails: relation {rel}")
        t, cut = cmp.zoo, cmp.cut
    else:
        t, cut = s, 0
    A_list = t.tail(cut).ext()
    top = A_list[-1]
    hA = HA(IndexSet(A_list))
    checked, bad = [], None
    lo = 0
    for a in A_list:
        # every n in [lo, a-1] has h_A(n) = a
        if lo <= a - 1:
            b = _safe(g, a)
            c = None if b is None or b >= top else hA(b)
            if c is not None:
                hi = a - 1
                if checked and checked[-1][1] == lo - 1:
                    checked[-1] = (checked[-1][0], hi)
                else:
                    checked.append((lo, hi))
                fn = f(hi)
                if fn > c and bad is None:
                    # report the least offending n of the interval
                    n = next(m for m in range(lo, hi + 1) if f(m) > c) if hi - lo < 10 ** 5 else hi
                    bad = {"n": n, "f(n)": f(n), "bound": c, "h_A(n)": a, "g(h_A(n))": b}
        lo = a
    if not checked:
        raise EmptyRangeError("no n has h_A(g(h_A(n))) inside the prefix")
    p1 = 0
    for k in A_list:
        gk = _safe(g, k)
        c = None if gk is None or gk >= top else hA(gk)
        if c is None:
            continue
        p1 += 1
        if f(k) > c and bad is None:
            bad = {"k": k, "f(k)": f(k), "bound": c, "part": 1}
    return LeqReport(bad is None, checked, bad, p1, cut, rel)


@dataclass
class NotWitness:
    j: int
    eta: object
    first: object
    last: object
    iterate: int
    top: int
    g_value: int

    def to_json(self):
        return {"j": self.j, "eta": self.eta, "first": self.first, "last": self.last,
                "iterate": self.iterate, "max": self.top, "g": self.g_value}


@dataclass
class NotReport:
    ok: bool
    witnesses: list
    failed_j: int | None = None
    cut: int = 0

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "witnesses": [w.to_json() for w in self.witnesses],
                "failed_j": self.failed_j, "cut": self.cut}


def verify_not(s: Zoo, f, g, J: int, check_premise: bool = True, fronts=None) -> NotReport:
    """For j <= J: an η in F(g) with more than j successors and the F(f)-nodes
    C above it satisfy max(h_A, f)^j(min ν_1) <= max ν_l < g(min ν_1)."""
    if fronts is not None:
        t, cut, Ff, Fg = fronts
    else:
        cmp = compare_functions(s, f, g)
        if check_premise and cmp.relation != "≺":
            raise PremiseError(f"premise f ≺ g fails: relation {cmp.relation}")
        t, cut, Ff, Fg = cmp.zoo, cmp.cut, cmp.front_f, cmp.front_g
    region = t.tail(cut)
    A_list = region.ext()
    hA = HA(IndexSet(A_list))
    gnodes = sorted((v for v in as_nodes(Fg) if v in region), key=region.lo)
    fnodes = as_nodes(Ff)
    out = []
    for j in range(J + 1):
        eta = next((v for v in gnodes if len(region.succ(v)) > j), None)
        if eta is None:
            raise ArityExhaustedError(f"no node of F(g) has more than {j} successors")
        S = region.creature_of(eta)
        C = sorted((v for v in S.nodes if v in fnodes and v != eta and S.is_below(eta, v)),
                   key=S.lo)
        if not C:
            return NotReport(False, out, j, cut)
        x0, top = S.lo(C[0]), S.hi(C[-1])
        x = x0
        for _ in range(j):
            a, b = _safe(hA, x), _safe(f, x)
            if a is None or b is None:
                x = None
                break
            x = max(a, b)
        gv = g(x0)
        if x is None or not (x <= top < gv):
            return NotReport(False, out, j, cut)
        out.append(NotWitness(j, eta, C[0], C[-1], x, top, gv))
    return NotReport(True, out, None, cut)


def _per_creature_nodes(F, s: Zoo):
    nodes = as_nodes(F)
    return [frozenset(v for v in S.nodes if v in nodes) for S in s.creatures]


def verify_crucial(s: Zoo, f, F1, F2) -> int:
    """Two gauging fronts must agree beyond their cuts; returns the least cut
    from which they coincide."""
    for name, F in (("F1", F1), ("F2", F2)):
        if not check_gauges(F, s, f):
            raise PremiseError(f"{name} does not gauge f")
    c = max(effective_cut(F1, s), effective_cut(F2, s))
    a, b = _per_creature_nodes(F1, s), _per_creature_nodes(F2, s)
    for n in range(c, len(s)):
        if a[n] != b[n]:
            raise AssertionError(f"gauging fronts disagree in creature {n} beyond cut {c}")
    m = c
    while m > 0 and a[m - 1] == b[m - 1]:
        m -= 1
    return m


@dataclass
class ChainComparison:
    relation: str
    stage: int
    comparison: FrontComparison
    later: list = field(default_factory=list)

    def to_json(self):
        return {"relation": self.relation, "stage": self.stage,
                "comparison": self.comparison.to_json(), "later": self.later}


def restrict_front(F, s: Zoo) -> Front:
    return Front(as_nodes(F) & s.nodes())


def chain_compare(stages: Sequence[Zoo], F, G, home: int = 0) -> ChainComparison:
    """First stage (from `home`) where the restricted fronts compare definitely.
    Later stages must agree with it."""
    stages = list(getattr(stages, "zoos", lambda: stages)())
    first = None
    later = []
    for i in range(home, len(stages)):
        z = stages[i]
        Fi, Gi = restrict_front(F, z), restrict_front(G, z)
        try:
            if effective_cut(Fi, z) is None or effective_cut(Gi, z) is None:
                continue
            cmp = front_compare(Fi, Gi, z)
        except FrontError:
            continue
        if not cmp.definite:
            continue
        if first is None:
            first = (i, cmp)
        else:
            later.append((i, cmp.relation))
            if not _compatible(first[1].relation, cmp.relation):
                raise AssertionError(f"stage {i} reverses the relation found at stage {first[0]}")
    if first is None:
        raise NeverDefiniteError("never definite within the chain")
    return ChainComparison(first[1].relation, first[0], first[1], later)


def _compatible(a, b):
    if a == b:
        return True
    # equal refines both one-sided relations
    return EQUAL in (a, b) and {a, b} <= {EQUAL, BELOW, ABOVE}
