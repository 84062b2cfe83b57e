"""Seeded random instances: prefixes, colorings, fronts, growth functions,
plus the catalogue of invariant-breaking mutations used to test validators."""

from __future__ import annotations

import numpy as np

from .coloring import BINARY, BRANCH, UNARY, Coloring
from .creature import Creature, LabelSource, star
from .growth import Affine, Expo, Power, Successor, Table, library
from .zoo import NORM_FLOOR, Front, UniformDepth1Source, Zoo, ZooError


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def z1() -> Zoo:
    """the two-creature fixture: stars over {0..3} and {10..13}"""
    return Zoo([star("a0", range(4)), star("a1", range(10, 14))], name="Z1")


def random_creature(rng, depth: int, arity=(4, 10), start: int = 0,
                    labels: LabelSource | None = None, p_internal: float = 0.5) -> Creature:
    """Random proper creature of depth <= `depth` with leaves from `start` on.

    Every internal node gets an arity drawn from `arity` (inclusive), leaves
    are handed out left to right so sibling intervals never overlap.
    """
    rng = _rng(rng)
    labels = labels or LabelSource("v")
    lo, hi = (arity, arity) if isinstance(arity, int) else arity
    succ = {}
    nxt = [start]

    def build(d, force=False):
        if d == 0 or (not force and rng.random() >= p_internal):
            x = nxt[0]
            nxt[0] += 1
            return x
        v = labels.fresh()
        a = int(rng.integers(lo, hi + 1))
        succ[v] = [build(d - 1) for _ in range(a)]
        return v

    root = build(depth, force=True)
    return Creature(root, succ)


def random_zoo(seed=None, n: int | tuple = (2, 6), depth: int = 2, arity=(4, 10),
               gap=(1, 10), prefix: str = "v", p_internal: float = 0.5) -> Zoo:
    rng = _rng(seed)
    if not isinstance(n, int):
        n = int(rng.integers(n[0], n[1] + 1))
    glo, ghi = (gap, gap) if isinstance(gap, int) else gap
    labels = LabelSource(prefix)
    out, start = [], 0
    for _ in range(n):
        S = random_creature(rng, depth, arity, start, labels, p_internal)
        out.append(S)
        start = S.hi(S.root) + 1 + int(rng.integers(glo, ghi + 1))
    return Zoo(out)


def strong_random_zoo(seed, F, n=(2, 6), depth: int = 2, arity=(4, 10), gap=(0, 20),
                      ceiling: int = 2 ** 16, prefix: str = "v", p_internal: float = 0.5,
                      start=(0, 12)) -> Zoo:
    """Random prefix whose creature gaps are F-strong by construction.

    Leaves stay below `ceiling` so F can still be evaluated on them: the
    first creature is redrawn smaller (down to a 4-leaf star) until the next
    one fits, and the prefix ends at the first creature that does not.
    """
    rng = _rng(seed)
    if not isinstance(n, int):
        n = int(rng.integers(n[0], n[1] + 1))
    glo, ghi = (gap, gap) if isinstance(gap, int) else gap
    lo_a = arity if isinstance(arity, int) else arity[0]
    labels = LabelSource(prefix)
    out = []
    first = start if isinstance(start, int) else int(rng.integers(start[0], start[1] + 1))
    start = first
    for k in range(n):
        tries = [(start, depth, arity, p_internal)] * (8 if k == 0 else 1)
        if k == 0:
            tries += [(first, 1, arity, 1.0), (first, 1, lo_a, 1.0), (0, 1, lo_a, 1.0)]
        nxt = None
        for st, d, ar, p in tries:
            S = random_creature(rng, d, ar, st, labels, p)
            nxt = F(S.hi(S.root)) + int(rng.integers(glo, ghi + 1))
            if nxt <= ceiling or k > 0:
                break
        out.append(S)
        if nxt > ceiling:
            break
        start = nxt
    return Zoo(out)


def gen_zoo(shape: dict, seed=0) -> Zoo:
    """Prefix from a shape spec: creatures, depth (<= 3), arity (int, [lo, hi]
    or per-creature list), gap (int or [lo, hi])."""
    n = int(shape.get("creatures", 4))
    depth = int(shape.get("depth", 1))
    arity = shape.get("arity", 4)
    gap = shape.get("gap", 10)
    if n < 1:
        raise ZooError("need at least one creature")
    if not 1 <= depth <= 3:
        raise ZooError(f"depth {depth} outside 1..3")
    if isinstance(arity, int):
        sched = [(arity, arity)] * n
    elif len(arity) == 2 and len(arity) != n:
        sched = [tuple(arity)] * n
    else:
        if len(arity) != n:
            raise ZooError("arity schedule must list one entry per creature")
        sched = [(a, a) for a in arity]
    if min(a for a, _ in sched) < NORM_FLOOR or any(a > b for a, b in sched):
        raise ZooError(f"arity below the floor {NORM_FLOOR}")
    glo, ghi = (gap, gap) if isinstance(gap, int) else tuple(gap)
    if glo < 1 or ghi < glo:
        raise ZooError("gaps must be positive")
    rng = _rng(seed)
    labels = LabelSource(shape.get("prefix", "v"))
    out, start = [], 0
    # depth 1 stays a plain star so the fixture shapes come out exact
    p = 1.0 if depth == 1 else float(shape.get("p_internal", 0.5))
    for k in range(n):
        S = random_creature(rng, depth, sched[k], start, labels, p)
        out.append(S)
        start = S.hi(S.root) + 1 + int(rng.integers(glo, ghi + 1))
    return Zoo(out)


def seed_zoo(n: int, arity=12, gap: int = 10, prefix: str = "s") -> Zoo:
    """Depth-1 seed with a source, so builders can extend it."""
    sched = (arity,) * n if isinstance(arity, int) else tuple(arity)
    src = UniformDepth1Source(sched, gap, prefix=prefix)
    return Zoo.from_source(src, n, name="seed")


# -- colorings, fronts, functions --------------------------------------------------------

def random_coloring(s, kind: str, k: int = 2, seed=None) -> Coloring:
    """Uniform random k-coloring of every key of the given kind in s (a Zoo
    or a single Creature). Keys are visited in a fixed order so the result
    only depends on s and the seed."""
    rng = _rng(seed)
    creatures = s.creatures if isinstance(s, Zoo) else [s]
    keys = []
    for S in creatures:
        if kind == BRANCH:
            keys.extend(S.leaves)
        elif kind == UNARY:
            keys.extend(S.walk())
        elif kind == BINARY:
            for v in S.walk():
                ch = S.succ(v)
                keys.extend(frozenset((a, b)) for i, a in enumerate(ch) for b in ch[i + 1:])
        else:
            raise ValueError(f"unknown coloring kind {kind!r}")
    vals = rng.integers(0, k, size=len(keys))
    return Coloring(kind, {key: int(v) for key, v in zip(keys, vals)}, tuple(range(k)))


def random_front(s: Zoo, seed=None, p_stop: float = 0.5) -> Front:
    rng = _rng(seed)
    nodes = set()
    for S in s.creatures:
        stack = [S.root]
        while stack:
            v = stack.pop()
            ch = S.succ(v)
            if not ch or rng.random() < p_stop:
                nodes.add(v)
            else:
                stack.extend(ch)
    return Front(frozenset(nodes))


def random_growth(seed=None, table_len: int | None = None):
    """A random closed-form growth function (or a random monotone table)."""
    rng = _rng(seed)
    r = int(rng.integers(0, 6))
    if r == 0:
        return Successor()
    if r == 1:
        return Affine(int(rng.integers(1, 4)), int(rng.integers(1, 12)))
    if r == 2:
        return Power(int(rng.integers(2, 4)))
    if r == 3:
        return Expo(int(rng.integers(2, 4)))
    if r == 4 and table_len:
        steps = rng.integers(1, 4, size=table_len)
        vals = np.arange(table_len) + np.maximum.accumulate(steps)
        return Table([int(v) for v in vals])
    lib = list(library().values())
    return lib[int(rng.integers(0, len(lib)))]


# -- mutations --------------------------------------------------------------------

def _succ(S: Creature):
    return {v: list(S.succ(v)) for v in S.internal}


def mut_duplicate_child(s: Zoo, rng) -> Zoo:
    """a node listed twice: no longer a tree"""
    i = int(rng.integers(0, len(s)))
    S = s.creatures[i]
    succ = _succ(S)
    succ[S.root] = succ[S.root] + [succ[S.root][0]]
    return _replace(s, i, Creature(S.root, succ))


def mut_numeric_label(s: Zoo, rng) -> Zoo:
    """an internal node relabelled with a natural number"""
    i = int(rng.integers(0, len(s)))
    S = s.creatures[i]
    v = sorted(S.internal, key=str)[int(rng.integers(0, len(S.internal)))]
    return _replace(s, i, S.relabel({v: 10 ** 9 + i}))


def mut_interleave(s: Zoo, rng) -> Zoo:
    """root successors split into two new nodes taking alternate children"""
    i = int(rng.integers(0, len(s)))
    S = s.creatures[i]
    succ = _succ(S)
    ch = succ[S.root]
    x, y = "_mx", "_my"
    succ[x], succ[y] = ch[0::2], ch[1::2]
    succ[S.root] = [x, y]
    return _replace(s, i, Creature(S.root, succ))


def mut_below_floor(s: Zoo, rng) -> Zoo:
    """one internal node cut down to 3 successors"""
    i = int(rng.integers(0, len(s)))
    S = s.creatures[i]
    v = sorted(S.internal, key=str)[int(rng.integers(0, len(S.internal)))]
    return _replace(s, i, S.prune({v: S.succ(v)[:3]}))


def mut_shared_root(s: Zoo, rng) -> Zoo:
    """two creatures share a node"""
    i = int(rng.integers(1, len(s)))
    S = s.creatures[i]
    return _replace(s, i, S.relabel({S.root: s.creatures[i - 1].root}))


def mut_swap(s: Zoo, rng) -> Zoo:
    """two neighbouring creatures swapped: leaf ranges no longer increase"""
    i = int(rng.integers(1, len(s)))
    cs = list(s.creatures)
    cs[i - 1], cs[i] = cs[i], cs[i - 1]
    return Zoo(cs)


def _replace(s, i, S):
    cs = list(s.creatures)
    cs[i] = S
    return Zoo(cs)


# name -> (mutation, clause validate_prefix should report); all need >= 2 creatures
MUTATIONS = {
    "duplicate-child": (mut_duplicate_child, "not-a-tree"),
    "numeric-label": (mut_numeric_label, "internal-label-is-natural"),
    "interleave": (mut_interleave, "overlapping-leaf-intervals"),
    "below-floor": (mut_below_floor, "norm-floor"),
    "shared-root": (mut_shared_root, "creatures-not-disjoint"),
    "swap": (mut_swap, "leaf-ranges-not-increasing"),
}
