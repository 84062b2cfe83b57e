"""Zoo prefixes, gluing recipes, the refinement relations and fronts."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import faults
from .creature import (Creature, CreatureError, LabelSource, Violation,
                       is_subtree, validate_creature)

NORM_FLOOR = 4


class ZooError(ValueError):
    pass


class FloorViolation(ZooError):
    pass


class BlockTooShortError(ZooError):
    pass


class RecipeError(ZooError):
    pass


class DisjointnessError(RecipeError):
    pass


class RecycledNodeError(RecipeError):
    pass


class ChainNotNestedError(ZooError):
    pass


class NormalizationError(ZooError):
    pass


class SourceExhaustedError(ZooError):
    pass


class FrontError(ValueError):
    pass


# -- sources -----------------------------------------------------------------

@dataclass(frozen=True)
class UniformDepth1Source:
    """Creature k is a star over `arity(k)` consecutive leaves, followed by a
    gap. Past the schedule the arity keeps growing by one per creature."""

    arity_schedule: tuple
    gap: int = 10
    start: int = 0
    prefix: str = "s"
    limit: int | None = None  # optional hard cap on the number of creatures

    def __post_init__(self):
        object.__setattr__(self, "arity_schedule", tuple(self.arity_schedule))
        if not self.arity_schedule or min(self.arity_schedule) < NORM_FLOOR:
            raise ZooError("arity schedule must be nonempty with entries >= 4")
        if self.gap < 1:
            raise ZooError("gap must be positive")

    def arity(self, k: int) -> int:
        a = self.arity_schedule
        return a[k] if k < len(a) else a[-1] + (k - len(a) + 1)

    norm_floor = arity

    def creature(self, k: int) -> Creature:
        if self.limit is not None and k >= self.limit:
            raise SourceExhaustedError(f"source has only {self.limit} creatures")
        base = self.start + sum(self.arity(i) + self.gap for i in range(k))
        root = f"{self.prefix}{k}"
        return Creature(root, {root: range(base, base + self.arity(k))})

    def to_json(self):
        out = {"kind": "uniform-depth1", "arity_schedule": list(self.arity_schedule),
               "gap": self.gap}
        if self.start:
            out["start"] = self.start
        if self.prefix != "s":
            out["prefix"] = self.prefix
        if self.limit is not None:
            out["limit"] = self.limit
        return out

    @classmethod
    def from_json(cls, obj):
        if obj.get("kind", "uniform-depth1") != "uniform-depth1":
            raise ZooError(f"unknown source kind {obj.get('kind')!r}")
        return cls(tuple(obj["arity_schedule"]), obj.get("gap", 10), obj.get("start", 0),
                   obj.get("prefix", "s"), obj.get("limit"))


# -- zoo prefixes --------------------------------------------------------------

class Zoo:
    """A finite prefix S_0, S_1, ... of a zoo.

    `source`, when present, can produce the creatures past the prefix; only
    seed zoos carry one, every transformation returns a plain prefix.
    """

    __slots__ = ("creatures", "source", "name", "_where")

    def __init__(self, creatures: Iterable[Creature], source=None, name=None):
        self.creatures = tuple(creatures)
        self.source = source
        self.name = name
        self._where = None

    @classmethod
    def from_source(cls, source, n: int, name=None) -> "Zoo":
        return cls([source.creature(k) for k in range(n)], source, name)

    def extended(self, n: int) -> "Zoo":
        if n <= len(self):
            return self
        if self.source is None:
            raise SourceExhaustedError("prefix has no source to extend from")
        more = [self.source.creature(k) for k in range(len(self), n)]
        return Zoo(self.creatures + tuple(more), self.source, self.name)

    def __len__(self):
        return len(self.creatures)

    def __iter__(self):
        return iter(self.creatures)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Zoo(self.creatures[i])
        return self.creatures[i]

    def tail(self, m: int) -> "Zoo":
        return Zoo(self.creatures[m:])

    def key(self):
        return tuple(S.key() for S in self.creatures)

    def __eq__(self, other):
        return isinstance(other, Zoo) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Zoo({len(self)} creatures)"

    # node lookups across the prefix
    def where(self, v) -> int:
        if self._where is None:
            w = {}
            for i, S in enumerate(self.creatures):
                for x in S.nodes:
                    w.setdefault(x, i)
            self._where = w
        try:
            return self._where[v]
        except KeyError:
            raise KeyError(f"{v!r} is not a node of the prefix") from None

    def __contains__(self, v):
        try:
            self.where(v)
            return True
        except KeyError:
            return False

    def creature_of(self, v) -> Creature:
        return self.creatures[self.where(v)]

    def lo(self, v):
        return self.creature_of(v).lo(v)

    def hi(self, v):
        return self.creature_of(v).hi(v)

    def succ(self, v):
        return self.creature_of(v).succ(v)

    def depth(self, v):
        return self.creature_of(v).depth(v)

    def path(self, v):
        return self.creature_of(v).path(v)

    def nodes(self) -> frozenset:
        out = set()
        for S in self.creatures:
            out |= S.nodes
        return frozenset(out)

    def internal_nodes(self) -> frozenset:
        out = set()
        for S in self.creatures:
            out |= S.internal
        return frozenset(out)

    def ext(self) -> list:
        return [l for S in self.creatures for l in S.leaves]

    def roots(self) -> list:
        return [S.root for S in self.creatures]

    def max_ext(self) -> int:
        return self.creatures[-1].hi(self.creatures[-1].root)

    def norms(self) -> list:
        return [S.norm() for S in self.creatures]

    def to_json(self):
        out = {"creatures": [S.to_json() for S in self.creatures]}
        if self.source is not None:
            out["source"] = self.source.to_json()
        return out

    @classmethod
    def from_json(cls, obj, name=None):
        src = obj.get("source")
        return cls([Creature.from_json(c) for c in obj["creatures"]],
                   UniformDepth1Source.from_json(src) if src else None, name)

    def check(self, floor: int = NORM_FLOOR) -> "Zoo":
        v = validate_prefix(self, floor)
        if v is not None:
            cls = FloorViolation if v.clause == "norm-floor" else ZooError
            raise cls(str(v))
        return self


def validate_prefix(s: Zoo, floor: int = NORM_FLOOR) -> Violation | None:
    seen = set()
    prev_hi = None
    for i, S in enumerate(s.creatures):
        v = validate_creature(S)
        if v is not None:
            return Violation(v.clause, f"creature {i}: {v.detail}")
        if not S.is_proper:
            return Violation("improper-creature", f"creature {i}")
        nodes = S.nodes
        clash = seen & nodes
        if clash:
            return Violation("creatures-not-disjoint", f"creature {i} repeats {sorted(map(str, clash))[:3]}")
        seen |= nodes
        lo = S.lo(S.root)
        if prev_hi is not None and prev_hi >= lo:
            return Violation("leaf-ranges-not-increasing", f"creature {i} starts at {lo} <= {prev_hi}")
        prev_hi = S.hi(S.root)
        if S.norm() < floor:
            return Violation("norm-floor", f"creature {i} has norm {S.norm()} < {floor}")
    return None


def eq_star(s: Zoo, t: Zoo):
    """Least alignment (n0, k0) with S_{n0+i} = T_{k0+i} on the overlap,
    or None when the prefixes never line up."""
    pos = {S.key(): n for n, S in enumerate(s.creatures)}
    for k0, T in enumerate(t.creatures):
        n0 = pos.get(T.key())
        if n0 is None:
            continue
        m = min(len(s) - n0, len(t) - k0)
        if all(s.creatures[n0 + i] == t.creatures[k0 + i] for i in range(m)):
            return n0, k0
    return None


def roots_front(s: Zoo) -> "Front":
    return Front(frozenset(s.roots()))


def ext_front(s: Zoo) -> "Front":
    return Front(frozenset(s.ext()))


# -- recipes and witnesses -----------------------------------------------------

@dataclass
class Witness:
    """Recipe R with t_n = int(R_n) ∪ pieces, plus the chosen subtrees S_k'."""

    recipe: tuple
    choice: dict = field(default_factory=dict)

    def leaves(self) -> list:
        return [k for R in self.recipe for k in R.leaves]

    def is_improper(self) -> bool:
        return all(not R.is_proper for R in self.recipe)

    def index_map(self) -> list:
        """for each creature of t, the s-indices it was built from"""
        return [list(R.leaves) for R in self.recipe]

    def to_json(self):
        return {"recipe": [R.to_json() for R in self.recipe],
                "choice": {str(k): v.to_json() for k, v in sorted(self.choice.items())}}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(Creature.from_json(r) for r in obj["recipe"]),
                   {int(k): Creature.from_json(v) for k, v in obj.get("choice", {}).items()})


def validate_recipe(r: Sequence[Creature], n_src: int | None = None,
                    floor: int = NORM_FLOOR) -> Violation | None:
    prev = None
    for i, R in enumerate(r):
        v = validate_creature(R)
        if v is not None:
            return Violation(v.clause, f"recipe creature {i}: {v.detail}")
        if R.is_proper and R.norm() < floor:
            return Violation("norm-floor", f"recipe creature {i} has norm {R.norm()}")
        lo, hi = R.lo(R.root), R.hi(R.root)
        if prev is not None and prev >= lo:
            return Violation("recipe-not-increasing", f"recipe creature {i}")
        if n_src is not None and hi >= n_src:
            return Violation("index-out-of-range", f"recipe creature {i} names creature {hi}")
        prev = hi
    return None


def apply_recipe(s: Zoo, r: Sequence[Creature], choice=None, strict: bool = False,
                 floor: int = NORM_FLOOR) -> Zoo:
    """Replace every leaf k of the recipe by the chosen subtree S_k' <= S_k."""
    bad = validate_recipe(r, len(s), floor)
    if bad is not None:
        raise RecipeError(str(bad))
    choice = dict(choice or {})
    s_int = s.internal_nodes() if strict else frozenset()
    out = []
    for R in r:
        pieces = []
        for k in R.leaves:
            Sk = choice.get(k, s.creatures[k])
            if not is_subtree(Sk, s.creatures[k]):
                raise RecipeError(f"choice for creature {k} is not a subtree of it")
            pieces.append((k, Sk))
        if not R.is_proper:
            out.append(pieces[0][1])
            continue
        rint = R.internal
        for k, Sk in pieces:
            if rint & Sk.nodes:
                raise DisjointnessError(f"recipe nodes reappear inside creature {k}")
        if strict and rint & s_int:
            raise RecycledNodeError(f"recipe reuses internal nodes {sorted(map(str, rint & s_int))[:3]}")
        sub = {k: Sk.root for k, Sk in pieces}
        kids = {v: [sub.get(c, c) if R.is_leaf(c) else c for c in R.succ(v)] for v in rint}
        for _, Sk in pieces:
            kids.update(Sk.succ_map())
        out.append(Creature(R.root, kids))
    t = Zoo(out)
    t.check(floor)
    return t


def _decompose(T: Creature, s: Zoo, root_ix: dict):
    """(recipe creature, pieces) for one creature of t, or None."""
    pieces = {}
    rkids = {}

    def walk(v):
        k = root_ix.get(v)
        if k is not None:
            sub = T.subtree(v)
            if is_subtree(sub, s.creatures[k]):
                pieces[k] = sub
                return k
        ch = T.succ(v)
        if not ch:
            return None
        got = []
        for c in ch:
            x = walk(c)
            if x is None:
                return None
            got.append(x)
        rkids[v] = got
        return v

    top = walk(T.root)
    if top is None:
        return None
    return Creature(top, rkids), pieces


def creature_le(T: Creature, s: Zoo, strict: bool = False, _ix=None):
    ix = _ix if _ix is not None else {S.root: k for k, S in enumerate(s.creatures)}
    d = _decompose(T, s, ix)
    if d is None:
        return None
    R, pieces = d
    if strict and R.internal & s.internal_nodes():
        return None
    return d


def check_le(t: Zoo, s: Zoo, strict: bool = False) -> Witness | None:
    """Witness for t ≤ s (t ≦ s with strict), or None."""
    ix = {S.root: k for k, S in enumerate(s.creatures)}
    s_int = s.internal_nodes() if strict else None
    recipe, choice = [], {}
    prev = -1
    for T in t.creatures:
        d = _decompose(T, s, ix)
        if d is None:
            return None
        R, pieces = d
        if strict and R.internal & s_int and not faults.active("skip-disjoint"):
            return None
        ks = sorted(pieces)
        if ks[0] <= prev or any(k in choice for k in ks):
            return None
        prev = ks[-1]
        choice.update(pieces)
        recipe.append(R)
    return Witness(tuple(recipe), choice)


def star_le(t: Zoo, s: Zoo, strict: bool = False):
    """(m, witness) with m least such that t.tail(m) ≤ s, or None."""
    ix = {S.root: k for k, S in enumerate(s.creatures)}
    s_int = s.internal_nodes() if strict else None
    ok = []
    for T in t.creatures:
        d = _decompose(T, s, ix)
        if d is not None and strict and d[0].internal & s_int:
            d = None
        ok.append(d is not None)
    m = len(ok)
    while m > 0 and ok[m - 1]:
        m -= 1
    if m == len(t):
        return None
    w = check_le(t.tail(m), s, strict)
    return (m, w) if w is not None else None


# -- constructions ---------------------------------------------------------------

def drop(s: Zoo, keep: Sequence[int]) -> Zoo:
    keep = list(keep)
    if not keep:
        raise ZooError("drop needs a nonempty index list")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ZooError("drop indices must be increasing")
    if keep[0] < 0 or keep[-1] >= len(s):
        raise RecipeError("drop index out of range")
    return Zoo([s.creatures[k] for k in keep])


def shrink(s: Zoo, choice, floor: int = NORM_FLOOR) -> Zoo:
    """choice: list of subtrees (one per creature) or {index: subtree}."""
    if not isinstance(choice, dict):
        choice = dict(enumerate(choice))
    out = []
    for k, S in enumerate(s.creatures):
        T = choice.get(k, S)
        if not is_subtree(T, S):
            raise RecipeError(f"choice for creature {k} is not a subtree of it")
        if T.norm() < floor:
            raise FloorViolation(f"creature {k} shrinks to norm {T.norm()} < {floor}")
        out.append(T)
    return Zoo(out)


def glue_recipe(cutpoints: Sequence[int], n_src: int, labels: LabelSource,
                min_block: int = NORM_FLOOR + 1) -> list:
    cuts = list(cutpoints)
    if not cuts or cuts[0] != 0:
        raise ZooError("cutpoints must start at 0")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ZooError("cutpoints must be increasing")
    if cuts[-1] > n_src:
        raise RecipeError(f"cutpoint {cuts[-1]} beyond the prefix ({n_src} creatures)")
    if len(cuts) < 2:
        raise BlockTooShortError("need at least one block")
    out = []
    for a, b in zip(cuts, cuts[1:]):
        if b - a < min_block:
            raise BlockTooShortError(f"block [{a},{b}) has length {b - a} < {min_block}")
        tau = labels.fresh()
        out.append(Creature(tau, {tau: range(a, b)}))
    return out


def glue(s: Zoo, cutpoints: Sequence[int], labels: LabelSource | None = None) -> Zoo:
    """One fresh root over each block S_{n_k} .. S_{n_{k+1}-1}; creatures past
    the last cutpoint are dropped."""
    if labels is None:
        labels = LabelSource("g").avoid(s.internal_nodes())
    else:
        labels.avoid(s.internal_nodes())
    r = glue_recipe(cutpoints, len(s), labels)
    return apply_recipe(s, r, strict=True)


def rename_disjoint(t: Zoo, against: Sequence[Zoo], base: Zoo | None = None,
                    labels: LabelSource | None = None) -> Zoo:
    """Copy of t whose internal labels avoid every prefix in `against`.

    Labels that t legitimately shares with `base` (inside the embedded pieces
    of a t ≤ base witness) are kept, so t ≤ base survives the renaming.
    """
    forbidden = set()
    for z in against:
        forbidden |= z.internal_nodes()
    protected = set()
    if base is not None:
        w = check_le(t, base)
        if w is not None:
            for piece in w.choice.values():
                protected |= piece.internal
    clash = (t.internal_nodes() & forbidden) - protected
    if not clash:
        return t
    labels = labels or LabelSource("r")
    labels.avoid(forbidden | t.internal_nodes())
    mapping = {v: labels.fresh() for v in sorted(clash, key=str)}
    return Zoo([S.relabel(mapping) for S in t.creatures])


@dataclass
class LimitResult:
    zoo: Zoo
    witnesses: list
    trims: list
    nesting_cuts: list

    def to_json(self):
        return {"zoo": self.zoo.to_json(), "trims": self.trims,
                "nesting_cuts": self.nesting_cuts,
                "witnesses": [w.to_json() for w in self.witnesses]}


def limit(chain: Sequence[Zoo], extend_tail: bool = False, floor_offset: int = 4) -> LimitResult:
    """Diagonal of a finite ≦-chain: the head of each (trimmed) member.

    Each member is trimmed from the front until its head starts past the
    previous head, has norm >= n + floor_offset, and is itself ≦ every
    earlier member. With extend_tail the rest of the last member follows the
    heads.
    """
    chain = list(chain)
    if not chain:
        raise ZooError("empty chain")
    nest = [0]
    for i in range(len(chain) - 1):
        r = star_le(chain[i + 1], chain[i], strict=True)
        if r is None:
            raise ChainNotNestedError(f"member {i + 1} is not ≦* member {i}")
        nest.append(r[0])
    heads, trims = [], []
    prev = -1
    for n, sn in enumerate(chain):
        found = None
        for j in range(nest[n], len(sn)):
            S = sn.creatures[j]
            if S.lo(S.root) <= prev or S.norm() < n + floor_offset:
                continue
            one = Zoo([S])
            if all(check_le(one, chain[k], strict=True) is not None for k in range(n)):
                found = j
                break
        if found is None:
            raise NormalizationError(f"no usable head in member {n} within the prefix")
        S = sn.creatures[found]
        heads.append(S)
        trims.append(found)
        prev = S.hi(S.root)
    tail = list(chain[-1].creatures[trims[-1] + 1:]) if extend_tail else []
    t = Zoo(heads + tail)
    ws = []
    for n, sn in enumerate(chain):
        w = check_le(t.tail(n), sn, strict=True)
        if w is None:
            raise ChainNotNestedError(f"diagonal tail {n} is not ≦ member {n}")
        ws.append(w)
    return LimitResult(t, ws, trims, nest)


# -- fronts ------------------------------------------------------------------

@dataclass(frozen=True)
class Front:
    """A node set of a zoo prefix; branches of creatures before `cut` are exempt."""

    nodes: frozenset
    cut: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))

    def __contains__(self, v):
        return v in self.nodes

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def restrict(self, t: Zoo) -> "Front":
        tn = t.nodes()
        return Front(self.nodes & tn, 0)

    def with_cut(self, cut):
        return Front(self.nodes, cut)

    def to_json(self):
        key = lambda x: (isinstance(x, str), x)
        return {"nodes": sorted(self.nodes, key=key), "cut": self.cut}

    @classmethod
    def from_json(cls, obj):
        return cls(frozenset(obj["nodes"]), obj.get("cut", 0))


def as_nodes(F) -> frozenset:
    return F.nodes if isinstance(F, Front) else frozenset(F)


def front_ok_per_creature(F, s: Zoo) -> list:
    nodes = as_nodes(F)
    ok = []
    for S in s.creatures:
        good = True
        for l in S.leaves:
            if sum(1 for v in S.path(l) if v in nodes) != 1:
                good = False
                break
        ok.append(good)
    return ok


def star_front_check(F, s: Zoo) -> int | None:
    """Least cut beyond which F meets every branch exactly once; None if the
    last creature already fails."""
    nodes = as_nodes(F)
    allnodes = s.nodes()
    if not nodes <= allnodes:
        raise FrontError(f"front has nodes outside the prefix: {sorted(map(str, nodes - allnodes))[:3]}")
    ok = front_ok_per_creature(nodes, s)
    m = len(ok)
    while m > 0 and ok[m - 1]:
        m -= 1
    return None if m == len(s) else m


def effective_cut(F, s: Zoo) -> int | None:
    c = star_front_check(F, s)
    if c is None:
        return None
    return max(c, F.cut if isinstance(F, Front) else 0)


def front_enumerate(F, s: Zoo) -> list:
    """F beyond its cut in lex order, checking consecutive members are ⋖-adjacent."""
    cut = effective_cut(F, s)
    if cut is None:
        raise FrontError("not a *front of the prefix")
    nodes = as_nodes(F)
    region = s.tail(cut)
    members = sorted((v for v in nodes if v in region), key=lambda v: region.lo(v))
    leaves = region.ext()
    if members and region.lo(members[0]) != leaves[0]:
        raise FrontError("first front member does not start the fronted region")
    for a, b in zip(members, members[1:]):
        ha, lb = region.hi(a), region.lo(b)
        if ha >= lb:
            raise FrontError(f"{a!r} and {b!r} are not lexicographically ordered")
        i = bisect.bisect_right(leaves, ha)
        if i < len(leaves) and leaves[i] < lb:
            raise FrontError(f"leaf {leaves[i]} lies strictly between {a!r} and {b!r}")
    return members
