"""The ten acceptance checks as plain functions.

Each returns a Result; `run_all` runs them in order. The selftest command and
tests/test_acceptance.py are thin wrappers around this module.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .builder import demand, generic_builder
from .coloring import (BINARY, BRANCH, UNARY, Coloring, EmptyResultError, homogenize_binary,
                       homogenize_branch, homogenize_unary, homogenize_zoo, is_homogeneous_zoo)
from .creature import Creature, LabelSource
from .gauge import (EQUAL, EmptyTailError, GaugeError, check_gauges, compare_functions,
                    dichotomy, front_compare, gauge, make_strong)
from .generate import (MUTATIONS, random_coloring, random_creature, random_front, random_growth,
                       random_zoo, seed_zoo, strong_random_zoo, z1)
from .growth import Affine, IndexSet, PointwiseMax, Successor, le_A, library, orbit_set, sandwich_check
from .lab import EmptyRangeError, verify_crucial, verify_leq, verify_not
from .zoo import (Front, RecipeError, UniformDepth1Source, Zoo, apply_recipe, as_nodes, check_le, glue,
                  ext_front, limit, roots_front, validate_prefix)


@dataclass
class Result:
    number: int
    name: str
    ok: bool
    seconds: float
    limit: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def in_time(self):
        return self.limit is None or self.seconds < self.limit

    @property
    def passed(self):
        return self.ok and self.in_time

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        why = ""
        if not self.passed:
            why = " :: " + (self.details.get("failure") or
                            ("over time" if not self.in_time else "see details"))
        return f"[{status}] {self.number:2d} {self.name}: {self.seconds:.2f}s{lim}{why}"

    def to_json(self):
        return {"number": self.number, "name": self.name, "passed": self.passed, "ok": self.ok,
                "seconds": round(self.seconds, 3), "limit": self.limit, "details": self.details}


def _timed(number, name, limit=None):
    def wrap(fn):
        def run(quick=False):
            t0 = time.perf_counter()
            try:
                ok, det = fn(quick)
            except Exception as e:  # a crash is a failure, with context
                ok, det = False, {"failure": f"{type(e).__name__}: {e}"}
            return Result(number, name, ok, time.perf_counter() - t0, limit, det)
        run.number, run.title = number, name
        return run
    return wrap


def _random_shrink(S: Creature, rng, floor=4) -> Creature:
    """random subtree keeping at least `floor` successors everywhere"""
    keep = {}
    stack = [S.root]
    while stack:
        v = stack.pop()
        ch = S.succ(v)
        if not ch:
            continue
        k = int(rng.integers(min(floor, len(ch)), len(ch) + 1))
        idx = sorted(rng.choice(len(ch), size=k, replace=False))
        sub = [ch[i] for i in idx]
        keep[v] = sub
        stack.extend(sub)
    return S.prune(keep)


def _random_refine(s: Zoo, rng, floor=4) -> Zoo:
    """random drop (keeping >= 1 creature) followed by random shrinking"""
    n = len(s)
    k = int(rng.integers(max(1, n // 2), n + 1))
    keep = sorted(rng.choice(n, size=k, replace=False))
    return Zoo([_random_shrink(s.creatures[i], rng, floor) for i in keep])


# -- 1 ----------------------------------------------------------------------------

@_timed(1, "validators and mutation catalogue", 5.0)
def criterion_1(quick=False):
    n = 200 if quick else 1000
    invalid, missed = [], {}
    for i in range(n):
        z = random_zoo(i, n=(2, 6), depth=2, arity=(4, 10))
        v = validate_prefix(z)
        if v is not None:
            invalid.append((i, v.clause))
            continue
        rng = np.random.default_rng(10_000 + i)
        for name, (mut, clause) in MUTATIONS.items():
            got = validate_prefix(mut(z, rng))
            if got is None or got.clause != clause:
                missed.setdefault(name, []).append(i)
    ok = not invalid and not missed
    det = {"prefixes": n, "mutations": sorted(MUTATIONS), "invalid": invalid[:5],
           "missed": {k: v[:5] for k, v in missed.items()}}
    if not ok:
        det["failure"] = f"{len(invalid)} generated prefixes invalid, missed mutations {sorted(missed)}"
    return ok, det


# -- 2 ----------------------------------------------------------------------------

def _mono3_exists(col):
    return any(col[(a, b)] == col[(a, c)] == col[(b, c)]
               for a, b, c in itertools.combinations(range(6), 3))


@_timed(2, "homogenization at desk scale", 10.0)
def criterion_2(quick=False):
    S = Creature("r", {"r": range(6)})
    pairs = list(itertools.combinations(range(6), 2))
    bad = []
    total = 2 ** 15
    masks = range(total) if not quick else range(0, total, 8)
    for m in masks:
        col = {p: (m >> i) & 1 for i, p in enumerate(pairs)}
        c = Coloring(BINARY, {frozenset(p): v for p, v in col.items()}, (0, 1))
        if not _mono3_exists(col):  # oracle: R(3,3) = 6 says this never happens
            bad.append((m, "oracle"))
            continue
        try:
            T = homogenize_binary(S, c, 3)
        except Exception as e:
            bad.append((m, str(e)))
            continue
        kept = T.succ("r")
        if len(kept) < 3 or len({c(a, b) for a, b in itertools.combinations(kept, 2)}) != 1:
            bad.append((m, "not monochromatic"))
    rng = np.random.default_rng(2)
    trials = 100 if quick else 500
    small = []
    for n in (2, 3, 4):
        for t in range(trials):
            S2 = random_creature(rng, 2, 2 * n, 0, LabelSource("u"), p_internal=0.5)
            kind = UNARY if t % 2 == 0 else BRANCH
            c = random_coloring(S2, kind, 2, rng)
            try:
                T = homogenize_unary(S2, c, n) if kind == UNARY else homogenize_branch(S2, c, n)[0]
                ok = T.norm() >= n and is_homogeneous_zoo(Zoo([T]), Zoo([S2]), c)
            except Exception as e:
                ok = False
            if not ok:
                small.append((n, t, kind))
    ok = not bad and not small
    det = {"binary_colorings": len(masks), "binary_failures": bad[:5],
           "unary_branch_trials": 3 * trials, "unary_branch_failures": small[:5]}
    if not ok:
        det["failure"] = (f"homogeneity invariant broken: {len(bad)} binary, "
                          f"{len(small)} unary/branch failures")
    return ok, det


# -- 3 ----------------------------------------------------------------------------

@_timed(3, "homogeneity persists under refinement")
def criterion_3(quick=False):
    rng = np.random.default_rng(3)
    trials = 50 if quick else 200
    fails, skipped = [], 0
    kinds = (UNARY, BINARY, BRANCH)
    for t in range(trials):
        s = random_zoo(rng, n=(2, 6), depth=2, arity=(6, 12))
        c = random_coloring(s, kinds[t % 3], 2, rng)
        try:
            h = homogenize_zoo(s, c)
        except EmptyResultError:
            skipped += 1
            continue
        if not is_homogeneous_zoo(h, s, c):
            fails.append((t, "after homogenize"))
            continue
        r = _random_refine(h, rng)
        if check_le(r, h, strict=True) is None:
            fails.append((t, "refinement not ≦"))
        elif not is_homogeneous_zoo(r, s, c):
            fails.append((t, "lost after refinement"))
    ok = not fails
    det = {"trials": trials, "empty_homogenizations": skipped, "failures": fails[:5]}
    if not ok:
        det["failure"] = f"homogeneity persistence violated in {len(fails)} trials"
    return ok, det


# -- 4 ----------------------------------------------------------------------------

@_timed(4, "gauge fixture Z1", 1.0)
def criterion_4(quick=False):
    s = z1()
    f1, f2 = Successor(), Affine(1, 5)
    r1, r2 = gauge(s, f1), gauge(s, f2)
    ext, roots = as_nodes(ext_front(s)), as_nodes(roots_front(s))
    a = as_nodes(r1.front) == ext and r1.zoo == s
    b = as_nodes(r2.front) == roots and r2.zoo == s
    cmp = front_compare(r1.front, r2.front, s)
    c = cmp.relation == "below" and cmp.strict and cmp.distance == 1 and cmp.cut == 0
    ok = a and b and c
    det = {"F(f1)": sorted(map(str, as_nodes(r1.front))), "F(f2)": sorted(map(str, as_nodes(r2.front))),
           "comparison": cmp.to_json()}
    if not ok:
        det["failure"] = ("F(Z1,f1) != ext" if not a else "F(Z1,f2) != roots" if not b
                          else "F(f1)+1 ≈ F(f2) at cut 0 fails")
    return ok, det


# -- 5 ----------------------------------------------------------------------------

@_timed(5, "leq and not checks")
def criterion_5(quick=False):
    rng = np.random.default_rng(5)
    lib = list(library().values())
    want = 50 if quick else 200
    done = attempts = strict = 0
    short = {"seen": 0, "empty_range_raised": 0}
    fails = []
    while done < want and attempts < 20 * want:
        attempts += 1
        if attempts % 2:
            # f <= g pointwise: pick from the ordered library
            i, j = sorted(rng.choice(len(lib), size=2, replace=True))
            f, g = lib[i], lib[j]
        else:
            f, g = random_growth(rng), random_growth(rng)
        s = strong_random_zoo(rng, PointwiseMax(f, g))
        try:
            cmp = compare_functions(s, f, g)
            if cmp.relation in ("≻", "≽"):
                f, g = g, f
                cmp = compare_functions(s, f, g)
        except (GaugeError, EmptyTailError):
            continue
        rel = cmp.relation
        if rel not in ("≈", "≺", "≼"):
            continue
        if len(cmp.zoo) - cmp.cut < 2:
            # one creature left after gauging: the check has nothing to bite on
            short["seen"] += 1
            try:
                verify_leq(s, f, g)
            except EmptyRangeError:
                short["empty_range_raised"] += 1
            continue
        done += 1
        try:
            r = verify_leq(s, f, g)
            if not r.ok or not r.checked:
                fails.append((attempts, "leq", r.to_json()))
        except Exception as e:
            fails.append((attempts, "leq", f"{type(e).__name__}: {e}"))
        if rel == "≺":
            strict += 1
            region = cmp.zoo.tail(cmp.cut)
            gn = [v for v in as_nodes(cmp.front_g) if v in region]
            J = min(len(region.succ(v)) for v in gn) - 1
            try:
                nr = verify_not(s, f, g, J)
                if not nr.ok or len(nr.witnesses) != J + 1:
                    fails.append((attempts, "not", nr.to_json()))
            except Exception as e:
                fails.append((attempts, "not", f"{type(e).__name__}: {e}"))
    ok = done >= want and not fails
    det = {"trials": done, "strict_trials": strict, "attempts": attempts,
           "single_creature_comparisons": short, "failures": fails[:3]}
    if not ok:
        det["failure"] = (f"only {done} established trials" if done < want
                          else f"{len(fails)} instances failed, first: {fails[0][1]}")
    return ok, det


# -- 6 ----------------------------------------------------------------------------

def _alt_front(S: Creature, current: frozenset) -> frozenset:
    """another front of S: the root, or the leaves when the root is taken"""
    return frozenset([S.root]) if current != frozenset([S.root]) else frozenset(S.leaves)


@_timed(6, "crucial uniqueness and restriction")
def criterion_6(quick=False):
    rng = np.random.default_rng(6)
    lib = list(library().values())
    trials = 30 if quick else 100
    fails, cuts = [], []
    t_ok = 0
    while t_ok < trials:
        f = lib[int(rng.integers(0, len(lib)))]
        s = strong_random_zoo(rng, f)
        try:
            r = gauge(s, f)
        except GaugeError:
            continue
        t_ok += 1
        t, F1 = r.zoo, r.front
        S0 = t.creatures[0]
        mine = frozenset(v for v in S0.nodes if v in as_nodes(F1))
        F2 = Front((as_nodes(F1) - mine) | _alt_front(S0, mine), cut=1)
        try:
            cuts.append(verify_crucial(t, f, F1, F2))
        except Exception as e:
            fails.append(("crucial", f"{type(e).__name__}: {e}"))
        # restriction: F(s,f) ∩ t' against a fresh gauge of t' ≦ s
        tp = _random_refine(t, rng)
        try:
            r2 = gauge(tp, f)
            F_restr = Front(as_nodes(F1) & r2.zoo.nodes())
            if not check_gauges(F_restr, r2.zoo, f):
                fails.append(("restriction", "F(s,f) ∩ t does not gauge f"))
            else:
                verify_crucial(r2.zoo, f, F_restr, r2.front)
        except Exception as e:
            fails.append(("restriction", f"{type(e).__name__}: {e}"))
    ok = not fails
    det = {"trials": trials, "max_cut": max(cuts) if cuts else None, "failures": fails[:3]}
    if not ok:
        det["failure"] = f"{len(fails)} failures, first {fails[0]}"
    return ok, det


# -- 7 ----------------------------------------------------------------------------

@_timed(7, "dichotomy pipeline")
def criterion_7(quick=False):
    rng = np.random.default_rng(7)
    trials = 30 if quick else 100
    fails = []
    crossing = 0
    for t in range(trials):
        s = random_zoo(rng, n=(3, 6), depth=2, arity=(12, 16), p_internal=0.7)
        F, G = random_front(s, rng), random_front(s, rng)
        for _ in range(20):
            if front_compare(F, G, s).relation == "incomparable-within-prefix":
                break
            G = random_front(s, rng)
        crossing += front_compare(F, G, s).relation == "incomparable-within-prefix"
        try:
            r = dichotomy(F, G, s, N=5)
        except Exception as e:
            fails.append((t, f"{type(e).__name__}: {e}"))
            continue
        if not r.comparison.definite or r.profile.kind not in ("plus", "exceeds"):
            fails.append((t, r.comparison.relation, r.profile.kind))
    ok = not fails
    det = {"trials": trials, "crossing_pairs": crossing, "failures": fails[:3]}
    if not ok:
        det["failure"] = f"{len(fails)} trials stayed undecided, first {fails[0]}"
    return ok, det


# -- 8 ----------------------------------------------------------------------------

def _random_chain(rng, length=5):
    depth = int(rng.integers(1, 3))
    labels = LabelSource("c")
    out, start = [], 0
    for k in range(12):
        S = random_creature(rng, depth, (16, 22), start, labels, p_internal=0.3)
        out.append(S)
        start = S.hi(S.root) + 1 + int(rng.integers(1, 10))
    chain = [Zoo(out)]
    while len(chain) < length:
        prev = chain[-1]
        n = len(prev)
        keep = sorted(rng.choice(n, size=max(length + 2, n - int(rng.integers(0, 3))), replace=False))
        nxt = []
        for i in keep:
            S = prev.creatures[i]
            sub = {}
            for v in S.internal:
                ch = S.succ(v)
                k = max(len(ch) - int(rng.integers(0, 3)), 9)
                sub[v] = list(ch[:min(k, len(ch))])
            nxt.append(S.prune(sub))
        chain.append(Zoo(nxt))
    return chain


@_timed(8, "fusion limit", 5.0)
def criterion_8(quick=False):
    rng = np.random.default_rng(8)
    chains = 5 if quick else 20
    fails = []
    for c in range(chains):
        chain = _random_chain(rng)
        try:
            res = limit(chain)
        except Exception as e:
            fails.append((c, f"{type(e).__name__}: {e}"))
            continue
        t = res.zoo
        for n, sn in enumerate(chain):
            w = check_le(t.tail(n), sn, strict=True)
            if w is None:
                fails.append((c, f"tail {n} not ≦ member {n}"))
                break
            rebuilt = apply_recipe(sn, w.recipe, w.choice, strict=True)
            if rebuilt != t.tail(n):
                fails.append((c, f"witness {n} does not rebuild the tail"))
                break
    # negative control: glue the last two creatures under an internal label of
    # the dropped first one; plain ≤ holds, strict ≦ must refuse the recycling
    s = glue(seed_zoo(15, 6), [0, 5, 10, 15])
    S0, S1, S2 = s.creatures
    old = S0.succ(S0.root)[0]
    succ = {old: [S1.root, S2.root]}
    for S in (S1, S2):
        succ.update({v: list(S.succ(v)) for v in S.internal})
    g = Zoo([Creature(old, succ)])
    control = check_le(g, s) is not None and check_le(g, s, strict=True) is None
    if not control:
        fails.append(("control", "strict ≦ accepted a recycled internal node"))
    ok = not fails
    det = {"chains": chains, "failures": fails[:3], "strict_control": control}
    if not ok:
        det["failure"] = f"{len(fails)} chains failed, first {fails[0]}"
    return ok, det


def _span(s, a, b):
    return s.creatures[a].lo(s.creatures[a].root), s.creatures[b - 1].hi(s.creatures[b - 1].root) + 1


# -- 9 ----------------------------------------------------------------------------

def builder_demands():
    return [
        demand("make-strong", Successor()),
        demand("make-strong", Affine(1, 5)),
        demand("make-strong", Affine(1, 10)),
        demand("homogenize", coloring={"rule": "random", "kind": UNARY, "colors": 2, "seed": 91}),
        demand("homogenize", coloring={"rule": "random", "kind": BRANCH, "colors": 2, "seed": 92}),
        demand("homogenize", coloring={"rule": "dichotomy", "F": "ext", "G": "roots", "N": 5}),
        demand("root-shift"),
        demand("root-shift"),
    ]


@_timed(9, "generic builder integration")
def criterion_9(quick=False):
    # two rounds of gluing plus homogenization eat creatures fast; start long
    seed = seed_zoo(1024, 16)
    log_ = generic_builder(seed, builder_demands(), max_stages=12, glue_block=12)
    n_stages = len(log_.stages) - 1
    rel = log_.stage_relations()
    rev = log_.reverify()
    bad_d = [d.label for d in log_.demands if d.status != "satisfied"]
    ok = (n_stages <= 12 and not bad_d and all(v for v in rev.values())
          and all(ok_ for _, ok_ in rel))
    det = {"stages": n_stages, "kinds": [st.kind for st in log_.stages],
           "demands": [[d.label, d.status, d.stage, d.cut] for d in log_.demands],
           "stage_relations_ok": all(ok_ for _, ok_ in rel), "events": log_.events}
    if not ok:
        det["failure"] = ("unsatisfied demands " + ", ".join(bad_d) if bad_d else
                          "stage relation broken" if not all(o for _, o in rel) else
                          f"{n_stages} stages" if n_stages > 12 else "re-verification failed")
    return ok, det


# -- 10 ----------------------------------------------------------------------------

def _random_indexset(rng):
    k = int(rng.integers(0, 3))
    if k == 0:
        return IndexSet([int(rng.integers(0, 5))], ("ap", int(rng.integers(1, 6))))
    if k == 1:
        fin = sorted(set(int(x) for x in rng.integers(0, 200, size=8)))
        return IndexSet(fin, ("ap", int(rng.integers(1, 20))))
    return IndexSet([0], ("orbit", Affine(2, 1)))


@_timed(10, "growth-order sanity")
def criterion_10(quick=False):
    rng = np.random.default_rng(10)
    lib = library()
    B = 10 ** 4
    fails = []
    for (a, h), (b, g) in itertools.product(lib.items(), repeat=2):
        r = sandwich_check(h, g, B)
        if not r.ok:
            fails.append(("sandwich", a, b, r.counterexample))
    n_orbit = 20 if quick else 50
    for i in range(n_orbit):
        g = random_growth(rng, table_len=None)
        try:
            A = orbit_set(g, B)
        except AssertionError as e:
            fails.append(("orbit", repr(g), str(e)))
            continue
        from .growth import HA
        hA = HA(A)
        xs = np.arange(B + 1)
        gv, h2 = g.values(xs), hA.values(hA.values(xs))
        ok = (gv < 0) | (h2 < 0) | (gv <= h2)
        if not ok.all():
            fails.append(("orbit", repr(g), int(np.nonzero(~ok)[0][0])))
    n_le = 50 if quick else 200
    fns = list(lib.values())
    trans = 0
    for i in range(n_le):
        f, g, h = (fns[int(j)] for j in rng.integers(0, len(fns), size=3))
        A = _random_indexset(rng)
        Bq = 2000
        rf = le_A(f, f, A, kmax=4, B=Bq)
        if rf.k != 1:
            fails.append(("reflexive", repr(f), rf.to_json()))
        r1, r2 = le_A(f, g, A, kmax=6, B=Bq), le_A(g, h, A, kmax=6, B=Bq)
        if r1 and r2:
            trans += 1
            r3 = le_A(f, h, A, kmax=max(1, r1.k * r2.k), B=Bq)
            if not r3:
                fails.append(("transitive", repr(f), repr(g), repr(h), r1.k, r2.k))
    ok = not fails
    det = {"library_pairs": len(lib) ** 2, "orbit_functions": n_orbit, "le_triples": n_le,
           "transitive_instances": trans, "failures": fails[:3]}
    if not ok:
        det["failure"] = f"{fails[0][0]} property fails: {fails[0][1:]}"
    return ok, det


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]
QUICK = (1, 2, 4, 8, 9)


def run_all(quick=False, only=None, echo=None) -> list:
    out = []
    for crit in CRITERIA:
        if only and crit.number not in only:
            continue
        if quick and only is None and crit.number not in QUICK:
            continue
        r = crit(quick=quick)
        if echo:
            echo(r.line())
        out.append(r)
    return out
