"""Strong and weak nodes, gauging fronts and the front orders.

Orientation follows the usual convention for fronts: F ≼ G when on every
branch the F-node sits at or above (further from the root than) the G-node.
The per-branch distance is depth(F-node) - depth(G-node), so F + n ≈ G means
the distance is eventually n.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import faults, kernels
from .coloring import (BINARY, BRANCH, EXHAUSTIVE_THRESHOLD, Coloring, _pair_matrix, _ramsey_chain,
                       homogenize_zoo, product_coloring)
from .creature import Creature
from .growth import GrowthFunction, OutOfRangeError, Piecewise
from .zoo import Front, FrontError, Zoo, as_nodes, effective_cut

log = logging.getLogger(__name__)

STRONG, WEAK, NEITHER = "strong", "weak", "neither"
UNDECIDED = "undecided"


class GaugeError(ValueError):
    pass


class EmptyTailError(ValueError):
    """make_strong could not find a second creature; .partial holds what it kept"""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


def _f(f, x):
    try:
        return f(x)
    except OutOfRangeError as e:
        raise GaugeError(f"evaluation-bound exceeded: {e}") from None


def _le(a, b):
    # the single comparison the fault harness can flip
    return a > b if faults.active("flip-strong") else a <= b


def node_class(s: Zoo, f: GrowthFunction, v, creature: Creature | None = None) -> str:
    S = creature or s.creature_of(v)
    ch = S.succ(v)
    lo, hi = S.lo(v), S.hi(v)
    weak = _f(f, lo) > hi
    if not ch:
        return WEAK
    strong = len(ch) >= 2 and all(_le(_f(f, S.hi(a)), S.lo(b)) for a, b in zip(ch, ch[1:]))
    if strong and weak and not faults.active("flip-strong"):
        raise AssertionError(f"{v!r} is both f-strong and f-weak (is f monotone?)")
    if strong:
        return STRONG
    return WEAK if weak else NEITHER


def classify(s: Zoo, f) -> dict:
    out = {}
    for S in s.creatures:
        for v in S.walk():
            out[v] = node_class(s, f, v, S)
    return out


def gaps_ok(s: Zoo, f) -> list:
    """gap n holds iff f(max ext S_n) <= min ext S_{n+1}"""
    cs = s.creatures
    return [_f(f, a.hi(a.root)) <= b.lo(b.root) for a, b in zip(cs, cs[1:])]


def is_strong_zoo(s: Zoo, f) -> int | None:
    """Least cut from which every creature gap is f-strong; None when the
    last gap of the prefix already fails."""
    ok = gaps_ok(s, f)
    m = len(ok)
    while m > 0 and ok[m - 1]:
        m -= 1
    if ok and not ok[-1]:
        return None
    return m


def make_strong(s: Zoo, f) -> Zoo:
    """Greedy subsequence whose gaps are all f-strong."""
    keep = [s.creatures[0]]
    for S in s.creatures[1:]:
        if _f(f, keep[-1].hi(keep[-1].root)) <= S.lo(S.root):
            keep.append(S)
    t = Zoo(keep)
    if len(keep) == 1 and len(s) > 1:
        raise EmptyTailError("empty tail: no creature of the prefix lies far enough out", t)
    return t


def strength_coloring(s: Zoo, f) -> Coloring:
    asg = {}
    for S in s.creatures:
        for v in S.internal:
            ch = S.succ(v)
            for i, a in enumerate(ch):
                for b in ch[i + 1:]:
                    if _f(f, S.hi(a)) < S.lo(b):
                        col = STRONG
                    elif _f(f, S.lo(a)) > S.hi(b):
                        col = WEAK
                    else:
                        col = UNDECIDED
                    asg[frozenset((a, b))] = col
    return Coloring(BINARY, asg, (STRONG, WEAK, UNDECIDED))


def lowest_weak_front(s: Zoo, f) -> Front:
    nodes = set()
    for S in s.creatures:
        stack = [S.root]
        while stack:
            v = stack.pop()
            if node_class(s, f, v, S) == WEAK:
                nodes.add(v)
            else:
                stack.extend(S.succ(v))
    return Front(frozenset(nodes))


def gauge_clauses(F, s: Zoo, f) -> dict:
    """The three gauging clauses, each checked on its own."""
    cut = effective_cut(F, s)
    if cut is None:
        return {"front": False, "weak": False, "separated": False, "almost_strong": False, "cut": None}
    nodes = as_nodes(F)
    region = s.tail(cut)
    members = sorted((v for v in nodes if v in region), key=region.lo)
    weak = all(node_class(region, f, v) == WEAK for v in members)
    sep = all(_le(_f(f, region.hi(a)), region.lo(b)) for a, b in zip(members, members[1:]))
    strong = is_strong_zoo(s, f) is not None
    if weak and sep and not strong:
        log.warning("gauging clauses (1),(2) hold but the prefix is not almost f-strong")
    return {"front": True, "weak": weak, "separated": sep, "almost_strong": strong, "cut": cut}


def check_gauges(F, s: Zoo, f) -> bool:
    c = gauge_clauses(F, s, f)
    return c["front"] and c["weak"] and c["separated"] and c["almost_strong"]


@dataclass
class GaugeResult:
    zoo: Zoo
    front: Front
    trimmed: int = 0
    dropped: list = field(default_factory=list)
    below_guarantee: bool = True

    def to_json(self):
        return {"zoo": self.zoo.to_json(), "front": self.front.to_json(), "trimmed": self.trimmed,
                "dropped": self.dropped, "below_guarantee": self.below_guarantee}


# r(r(4)) = 4**256 has 513 bits
_GUARANTEE_BITS = 513


def gauge(s: Zoo, f) -> GaugeResult:
    """t ≦ s gauging f, and the canonical front F(t, f).

    Trim to the f-strong tail, then shrink every node that is neither
    strong nor weak to a monochromatic set of the strength coloring (floor 4;
    creatures where that fails are dropped). Nodes that already classify are
    left alone, so a prefix that gauges f comes back unchanged.
    """
    cut = is_strong_zoo(s, f)
    if cut is None:
        raise GaugeError("fails-within-prefix: the prefix is not almost f-strong")
    base = s.tail(cut)
    col = None
    kept, dropped = [], []
    for i, S in enumerate(base.creatures):
        keep = {}
        ok = True
        stack = [S.root]
        while stack:
            v = stack.pop()
            ch = S.succ(v)
            if not ch:
                continue
            cls = node_class(base, f, v, S)
            if cls == NEITHER:
                if col is None:
                    col = strength_coloring(base, f)
                # the larger of the two monochromatic sets, strong on ties
                found = None
                for colour in (STRONG, WEAK):
                    got = _mono_of(ch, col, colour)
                    if got is not None and (found is None or len(got) > len(found)):
                        found = got
                if found is None:
                    ok = False
                    break
                keep[v] = found
                stack.extend(found)
            else:
                stack.extend(ch)
        if not ok:
            dropped.append(cut + i)
            continue
        kept.append(S.prune(keep) if keep else S)
    if not kept:
        raise GaugeError("homogenization failure at floor: every creature was dropped")
    t = Zoo(kept)
    F = lowest_weak_front(t, f)
    if not check_gauges(F, t, f):
        raise GaugeError("the lowest-weak front does not gauge f")
    below = any(n.bit_length() < _GUARANTEE_BITS for n in t.norms())
    return GaugeResult(t, F, cut, dropped, below)


def _mono_of(ch, col: Coloring, colour, size: int = 4):
    """A `size`-subset of ch monochromatic in `colour`: the largest one when
    there are at most EXHAUSTIVE_THRESHOLD successors, otherwise the lex-first
    one extended greedily."""
    ch = list(ch)
    pairs = {frozenset((a, b)): (0 if col(a, b) == colour else 1)
             for i, a in enumerate(ch) for b in ch[i + 1:]}
    restricted = Coloring(BINARY, pairs, (0, 1))
    if len(ch) <= 64:
        mat = _pair_matrix(ch, restricted, None)
        idx = kernels.mono_subset(mat, size, 0)
        if idx is not None and len(ch) <= EXHAUSTIVE_THRESHOLD:
            k = size + 1
            while k <= len(ch):
                nxt = kernels.mono_subset(mat, k, 0)
                if nxt is None:
                    break
                idx, k = nxt, k + 1
        sub = None if idx is None else [ch[i] for i in idx]
    else:
        found = _ramsey_chain(ch, restricted, size, [0, 1, None])
        sub = found[1] if found is not None and found[0] == 0 else None
    if sub is None:
        return None
    got = list(sub)
    for x in ch:
        if x not in got and all(col(x, y) == colour for y in got):
            got.append(x)
    order = {x: i for i, x in enumerate(ch)}
    return sorted(got, key=order.__getitem__)


# -- comparing fronts ----------------------------------------------------------------

def branch_nodes(F, s: Zoo) -> dict:
    """leaf -> the F-node on its branch (None if F meets it 0 or 2+ times)"""
    nodes = as_nodes(F)
    out = {}
    for S in s.creatures:
        for l in S.leaves:
            hit = [v for v in S.path(l) if v in nodes]
            out[l] = hit[0] if len(hit) == 1 else None
    return out


def branch_distances(F, G, s: Zoo) -> dict:
    """leaf -> depth(F-node) - depth(G-node), None where undefined"""
    bf, bg = branch_nodes(F, s), branch_nodes(G, s)
    out = {}
    for l in bf:
        a, b = bf[l], bg[l]
        out[l] = None if a is None or b is None else s.depth(a) - s.depth(b)
    return out


EQUAL, BELOW, ABOVE, INCOMPARABLE = "equal", "below", "above", "incomparable-within-prefix"


def _category(ds):
    if any(d is None for d in ds):
        return None
    if all(d == 0 for d in ds):
        return EQUAL
    if all(d >= 0 for d in ds):
        return BELOW
    if all(d <= 0 for d in ds):
        return ABOVE
    return None


@dataclass
class FrontComparison:
    """relation 'below' means F ≼ G (F meets branches above G), 'above' G ≼ F."""

    relation: str
    cut: int | None
    strict: bool = False
    distance: int | None = None  # eventually constant distance, if any
    distances: dict = field(default_factory=dict, repr=False)

    @property
    def definite(self):
        return self.relation != INCOMPARABLE

    def symbol(self):
        if self.relation == EQUAL:
            return "≈"
        if self.relation == BELOW:
            return "≺" if self.strict else "≼"
        if self.relation == ABOVE:
            return "≻" if self.strict else "≽"
        return "?"

    def to_json(self):
        return {"relation": self.relation, "symbol": self.symbol(), "cut": self.cut,
                "strict": self.strict, "distance": self.distance}


def _per_creature(dist, s: Zoo):
    return [[dist[l] for l in S.leaves] for S in s.creatures]


def front_compare(F, G, s: Zoo) -> FrontComparison:
    cf, cg = effective_cut(F, s), effective_cut(G, s)
    if cf is None or cg is None:
        raise FrontError("both arguments must be *fronts of the prefix")
    base = max(cf, cg)
    dist = branch_distances(F, G, s)
    per = _per_creature(dist, s)
    rel, m = INCOMPARABLE, None
    for m0 in range(base, len(s)):
        ds = [d for row in per[m0:] for d in row]
        cat = _category(ds)
        if cat is not None:
            rel, m = cat, m0
            break
    if m is None:
        return FrontComparison(INCOMPARABLE, None, distances=dist)
    ds = [d for row in per[m:] for d in row]
    strict = rel != EQUAL and all(d != 0 for d in ds)
    # eventually constant distance: least cut from which all distances agree
    const = None
    for m1 in range(m, len(s)):
        tail = {d for row in per[m1:] for d in row}
        if len(tail) == 1:
            const = tail.pop()
            break
    return FrontComparison(rel, m, strict, const, dist)


@dataclass
class DistanceProfile:
    kind: str  # "plus", "exceeds" or "undetermined"
    n: int | None
    N: int
    cut: int | None
    per_creature: list = field(default_factory=list, repr=False)

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "N": self.N, "cut": self.cut,
                "per_creature": [sorted(set(r), key=lambda d: (d is None, d)) for r in self.per_creature]}


def front_distance(F, G, s: Zoo, N: int) -> DistanceProfile:
    """F + n ≈ G for the eventual constant n <= N, or exceeds-N when the
    distances eventually all exceed N."""
    cf, cg = effective_cut(F, s), effective_cut(G, s)
    if cf is None or cg is None:
        raise FrontError("both arguments must be *fronts of the prefix")
    base = max(cf, cg)
    per = _per_creature(branch_distances(F, G, s), s)
    for m in range(base, len(s)):
        ds = {d for row in per[m:] for d in row}
        if None in ds:
            continue
        if len(ds) == 1 and 0 <= min(ds) <= N:
            return DistanceProfile("plus", ds.pop(), N, m, per)
        if min(ds) > N:
            return DistanceProfile("exceeds", None, N, m, per)
    return DistanceProfile("undetermined", None, N, None, per)


# -- dichotomy colorings -------------------------------------------------------------

def comparison_coloring(F, G, s: Zoo) -> Coloring:
    asg = {}
    for l, d in branch_distances(F, G, s).items():
        asg[l] = "unknown" if d is None else ("small" if d >= 0 else "big")
    return Coloring(BRANCH, asg, ("small", "big", "unknown"))


def successor_coloring(F, G, s: Zoo) -> Coloring:
    asg = {}
    for l, d in branch_distances(F, G, s).items():
        asg[l] = "unknown" if d is None or d < 0 else ("equal" if d == 0 else "bigger")
    return Coloring(BRANCH, asg, ("equal", "bigger", "unknown"))


def distance_colorings(F, G, s: Zoo, N: int) -> list:
    dist = branch_distances(F, G, s)
    out = []
    for n in range(N + 1):
        asg = {l: ("unknown" if d is None or d < 0 else ("small" if d <= n else "big"))
               for l, d in dist.items()}
        out.append(Coloring(BRANCH, asg, ("small", "big", "unknown")))
    return out


def dichotomy_colorings(F, G, s: Zoo, N: int) -> list:
    """every coloring the dichotomy uses, in both orientations"""
    return ([comparison_coloring(F, G, s), successor_coloring(F, G, s), successor_coloring(G, F, s)]
            + distance_colorings(F, G, s, N) + distance_colorings(G, F, s, N))


def classify_distance(cs: list):
    """n̄ = least n with c_n constantly small (None if all big) on a homogeneous prefix"""
    for n, c in enumerate(cs):
        vals = set(c.assignment.values())
        if vals == {"small"}:
            return n
    return None


@dataclass
class DichotomyResult:
    zoo: Zoo
    comparison: FrontComparison
    profile: DistanceProfile

    def to_json(self):
        return {"zoo": self.zoo.to_json(), "comparison": self.comparison.to_json(),
                "profile": self.profile.to_json()}


def dichotomy(F, G, s: Zoo, N: int = 5) -> DichotomyResult:
    """Homogenize for the joint dichotomy coloring, then compare on the result."""
    cut = max(effective_cut(F, s) or 0, effective_cut(G, s) or 0)
    region = s.tail(cut)
    joint = product_coloring(dichotomy_colorings(F, G, region, N))
    t = homogenize_zoo(region, joint)
    Ft, Gt = Front(as_nodes(F) & t.nodes()), Front(as_nodes(G) & t.nodes())
    cmp = front_compare(Ft, Gt, t)
    if cmp.relation == ABOVE:
        prof = front_distance(Gt, Ft, t, N)
    else:
        prof = front_distance(Ft, Gt, t, N)
    return DichotomyResult(t, cmp, prof)


# -- fronts and functions ------------------------------------------------------------

def front_to_function(F, s: Zoo) -> Piecewise:
    """Growth function gauged by F: max[η]+1 on [min[η], max[η]] for η in F
    beyond its cut, n+1 elsewhere."""
    cut = effective_cut(F, s)
    if cut is None:
        raise FrontError("not a *front of the prefix")
    region = s.tail(cut)
    nodes = as_nodes(F)
    segs = [(region.lo(v), region.hi(v), region.hi(v) + 1) for v in nodes if v in region]
    return Piecewise(segs)


@dataclass
class FunctionComparison:
    relation: str  # ≈ ≺ ≼ ≻ ≽ or needs-refinement
    cut: int | None
    zoo: Zoo
    front_f: Front
    front_g: Front
    comparison: FrontComparison

    def to_json(self):
        return {"relation": self.relation, "cut": self.cut, "zoo": self.zoo.to_json(),
                "front_f": self.front_f.to_json(), "front_g": self.front_g.to_json(),
                "comparison": self.comparison.to_json()}


def gauge_both(s: Zoo, f, g):
    """t ≦ s gauging f and g, with both canonical fronts on t."""
    t = gauge(gauge(s, f).zoo, g).zoo
    Ff = lowest_weak_front(t, f)
    Fg = lowest_weak_front(t, g)
    if not (check_gauges(Ff, t, f) and check_gauges(Fg, t, g)):
        raise GaugeError("joint gauging failed")
    return t, Ff, Fg


def compare_functions(s: Zoo, f, g) -> FunctionComparison:
    t, Ff, Fg = gauge_both(s, f, g)
    cmp = front_compare(Ff, Fg, t)
    rel = cmp.symbol() if cmp.definite else "needs-refinement"
    return FunctionComparison(rel, cmp.cut, t, Ff, Fg, cmp)
