"""Node, pair and branch colorings; Ramsey bounds; homogenization."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
import numpy as np

from . import faults, kernels
from .creature import Creature, CreatureError, is_subtree

UNARY, BINARY, BRANCH = "unary-node", "binary-node", "branch"
KINDS = (UNARY, BINARY, BRANCH)

EXHAUSTIVE_THRESHOLD = 20
INT64_MAX = 2 ** 63 - 1


class HomogenizationError(ValueError):
    """insufficient norm / no monochromatic set found"""


class EmptyResultError(ValueError):
    pass


class ScopeError(ValueError):
    pass


def ramsey(n: int) -> int:
    if n < 1:
        raise ValueError("ramsey needs n >= 1")
    v = 4 ** n
    if v > INT64_MAX:
        raise OverflowError(f"4^{n} exceeds the int64 range")
    return v


def ramsey_inv(k: int) -> int:
    if k < 4:
        raise ValueError("ramsey_inv needs k >= 4")
    # max n with 4^n <= k
    return (k.bit_length() - 1) // 2


@dataclass
class Coloring:
    """A coloring with finitely many colors.

    unary-node keys are nodes, binary-node keys are frozensets of two sibling
    nodes, branch keys are leaves. Missing keys read as None, which sorts
    after every listed color.
    """

    kind: str
    assignment: dict
    colors: tuple = ()
    scope: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown coloring kind {self.kind!r}")
        if self.kind == BINARY:
            self.assignment = {frozenset(k): v for k, v in self.assignment.items()}
        if not self.colors:
            self.colors = tuple(sorted(set(self.assignment.values()), key=_sortkey))
        else:
            extra = set(self.assignment.values()) - set(self.colors)
            self.colors = tuple(self.colors) + tuple(sorted(extra, key=_sortkey))

    def __call__(self, *key):
        if self.kind == BINARY:
            k = frozenset(key[0] if len(key) == 1 else key)
        else:
            (k,) = key
        return self.assignment.get(k)

    def rank(self, color) -> int:
        try:
            return self.colors.index(color)
        except ValueError:
            return len(self.colors)

    @classmethod
    def constant(cls, kind, keys, color=0, scope=None):
        return cls(kind, {k: color for k in keys}, (color,), scope)

    def to_json(self):
        rows = []
        for k, v in self.assignment.items():
            if self.kind == BINARY:
                a, b = sorted(k, key=_sortkey)
                rows.append([a, b, v])
            else:
                rows.append([k, v])
        rows.sort(key=lambda r: [_sortkey(x) for x in r])
        out = {"kind": self.kind, "colors": list(self.colors), "assignment": rows}
        if self.scope is not None:
            out["scope"] = self.scope
        return out

    @classmethod
    def from_json(cls, obj):
        kind = obj["kind"]
        asg = {}
        for row in obj["assignment"]:
            if kind == BINARY:
                asg[frozenset(row[:2])] = _tup(row[2])
            else:
                asg[row[0]] = _tup(row[1])
        return cls(kind, asg, tuple(_tup(x) for x in obj.get("colors", ())), obj.get("scope"))


def _tup(x):
    # product colors come back from JSON as lists
    return tuple(_tup(y) for y in x) if isinstance(x, list) else x


def _sortkey(x):
    # ints, then strings, then None; tuples componentwise
    if x is None:
        return (2, 0)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, (tuple, list)):
        return (3, tuple(_sortkey(y) for y in x))
    return (0, x)


def _check_scope(c: Coloring, s, kind=None):
    if kind is not None and c.kind != kind:
        raise ScopeError(f"expected a {kind} coloring, got {c.kind}")
    if c.scope is not None and getattr(s, "name", None) not in (None, c.scope):
        raise ScopeError(f"coloring scoped to {c.scope!r}, not {s.name!r}")


def is_homogeneous(t: Creature, s: Creature, c: Coloring) -> bool:
    _check_scope(c, s)
    if not is_subtree(t, s):
        raise ScopeError("t is not a subtree of s")
    return _homog(t, c, s.internal)


def _homog(t: Creature, c: Coloring, where) -> bool:
    if c.kind == BRANCH:
        return len({c(l) for l in t.leaves}) <= 1
    for v in t.internal:
        if v not in where:
            continue
        ch = t.succ(v)
        if c.kind == UNARY:
            if len({c(x) for x in ch}) > 1:
                return False
        else:
            vals = {c(a, b) for a, b in combinations(ch, 2)}
            if len(vals) > 1:
                return False
    return True


# -- unary -------------------------------------------------------------------

def homogenize_unary(s: Creature, c: Coloring, n: int) -> Creature:
    """Keep at every node the largest color class of its successors (ties go
    to the earlier color), top-down."""
    _check_scope(c, s, UNARY)
    if not s.is_proper:
        raise CreatureError("improper creature")
    keep = {}
    stack = [s.root]
    while stack:
        v = stack.pop()
        ch = s.succ(v)
        if not ch:
            continue
        cls = _classes(ch, c)
        col, members = max(cls.items(), key=lambda kv: (len(kv[1]), -c.rank(kv[0])))
        if len(members) < n:
            raise HomogenizationError(
                f"insufficient-norm at {v!r}: largest class has {len(members)} < {n}")
        if faults.active("lose-color") and len(members) < len(ch):
            members = members + [x for x in ch if x not in members][:1]
        keep[v] = members
        stack.extend(members)
    return s.prune(keep)


def _classes(ch, c):
    out = {}
    for x in ch:
        out.setdefault(c(x), []).append(x)
    return out


# -- binary ------------------------------------------------------------------

def _pair_matrix(items, c: Coloring, colors):
    m = len(items)
    col = np.full((m, m), 255, dtype=np.uint8)
    for i in range(m):
        for j in range(i + 1, m):
            k = c.rank(c(items[i], items[j]))
            col[i, j] = col[j, i] = k
    return col


def _palette(c: Coloring):
    # listed colors then None for undefined pairs
    return list(c.colors) + [None]


def monochromatic_subset(items, c: Coloring, n: int, threshold: int = EXHAUSTIVE_THRESHOLD):
    """(color, subset) with every pair of `subset` colored `color`, or None.

    Exhaustive (kernel) for len(items) <= threshold: colors tried in order,
    first subset in lex order. Beyond the threshold a constructive Ramsey
    chain is used, which is only guaranteed for len(items) >= 4**n.
    """
    items = list(items)
    if n <= 1:
        return (None, items[:max(n, 0)]) if len(items) >= n else None
    pal = _palette(c)
    if len(items) <= min(threshold, 64):
        col = _pair_matrix(items, c, pal)
        for k, cc in enumerate(pal):
            sub = kernels.mono_subset(col, n, k)
            if sub is not None:
                return cc, [items[i] for i in sub]
        return None
    return _ramsey_chain(items, c, n, pal)


def _ramsey_chain(items, c, n, pal):
    """Greedy chain from the standard proof of Ramsey's theorem. With more
    than two colors the color index is split into bits (little-endian) and
    the two-color argument is run once per bit."""
    nbits = max(1, (len(pal) - 1).bit_length())
    cur = list(items)
    for bit in range(nbits):
        chosen, marks = [], []
        pool = cur
        while pool:
            v, rest = pool[0], pool[1:]
            cls = {0: [], 1: []}
            for u in rest:
                cls[(c.rank(c(v, u)) >> bit) & 1].append(u)
            b = 0 if len(cls[0]) >= len(cls[1]) else 1
            chosen.append(v)
            marks.append(b)
            pool = cls[b]
        cnt = Counter(marks)
        b = max((0, 1), key=lambda x: (cnt[x], -x))
        # pairs inside cur now agree on this bit
        cur = [v for v, bb in zip(chosen, marks) if bb == b]
    if len(cur) < n:
        return None
    return (c(cur[0], cur[1]) if len(cur) > 1 else None), cur


def _extend_mono(items, c, chosen, color):
    """grow a monochromatic set greedily to a maximal one"""
    got = list(chosen)
    gs = set(got)
    for x in items:
        if x in gs:
            continue
        if all(c(x, y) == color for y in got):
            got.append(x)
            gs.add(x)
    return got


def homogenize_binary(s: Creature, c: Coloring, n: int,
                      threshold: int = EXHAUSTIVE_THRESHOLD) -> Creature:
    _check_scope(c, s, BINARY)
    if not s.is_proper:
        raise CreatureError("improper creature")
    keep = {}
    stack = [s.root]
    while stack:
        v = stack.pop()
        ch = s.succ(v)
        if not ch:
            continue
        found = monochromatic_subset(ch, c, n, threshold)
        if found is None:
            raise HomogenizationError(f"not-found: no monochromatic {n}-subset under {v!r}")
        color, sub = found
        if len(sub) >= 2:
            color = c(sub[0], sub[1])
            sub = _extend_mono(ch, c, sub, color)
        order = {x: i for i, x in enumerate(ch)}
        sub = sorted(sub, key=order.__getitem__)
        keep[v] = sub
        stack.extend(sub)
    return s.prune(keep)


# -- branch ------------------------------------------------------------------

def branch_values(s: Creature, c: Coloring) -> dict:
    """c' from the downward induction: leaves carry c, an internal node takes
    the majority value of its successors (ties to the earlier color)."""
    val = {}
    for v in reversed(list(s.walk())):
        ch = s.succ(v)
        if not ch:
            val[v] = c(v)
            continue
        cnt = Counter(val[x] for x in ch)
        val[v] = max(cnt, key=lambda col: (cnt[col], -c.rank(col)))
    return val


def homogenize_branch(s: Creature, c: Coloring, n: int):
    _check_scope(c, s, BRANCH)
    if not s.is_proper:
        raise CreatureError("improper creature")
    val = branch_values(s, c)
    top = val[s.root]
    keep = {}
    stack = [s.root]
    while stack:
        v = stack.pop()
        ch = s.succ(v)
        if not ch:
            continue
        good = [x for x in ch if val[x] == top]
        if len(good) < n:
            raise HomogenizationError(f"insufficient-norm at {v!r}: {len(good)} < {n}")
        keep[v] = good
        stack.extend(good)
    return s.prune(keep), top


# -- joint colorings -----------------------------------------------------------

def product_coloring(colorings) -> Coloring:
    """Several colorings of one kind viewed as a single tuple-valued one."""
    kinds = {c.kind for c in colorings}
    if len(kinds) != 1:
        raise ValueError("product of colorings of different kinds")
    kind = kinds.pop()
    keys = set()
    for c in colorings:
        keys |= set(c.assignment)
    asg = {k: tuple(c.assignment.get(k) for c in colorings) for k in keys}
    return Coloring(kind, asg)


# -- zoos --------------------------------------------------------------------

def homogenize_creature(S: Creature, c: Coloring, n: int):
    if c.kind == UNARY:
        return homogenize_unary(S, c, n), None
    if c.kind == BINARY:
        return homogenize_binary(S, c, n), None
    return homogenize_branch(S, c, n)


def homogenize_zoo(s, c: Coloring, floor: int = 4, report: dict | None = None):
    """t ≦ s homogeneous for c, using only shrinking and dropping.

    Per creature target max(floor, ramsey_inv(norm)); creatures that cannot
    reach it are dropped. Branch colorings additionally keep only creatures
    with the most frequent constant value (ties: first occurring).
    """
    from .zoo import Zoo

    _check_scope(c, s)
    kept, vals, dropped = [], [], []
    for i, S in enumerate(s.creatures):
        nrm = S.norm()
        target = max(floor, ramsey_inv(nrm) if nrm >= 4 else 0)
        try:
            T, v = homogenize_creature(S, c, target)
        except HomogenizationError:
            dropped.append(i)
            continue
        kept.append(T)
        vals.append(v)
    if c.kind == BRANCH and kept:
        cnt = Counter(vals)
        best = max(cnt, key=lambda v: (cnt[v], -vals.index(v)))
        kept = [T for T, v in zip(kept, vals) if v == best]
        if report is not None:
            report["value"] = best
    if report is not None:
        report["dropped"] = dropped
    if not kept:
        raise EmptyResultError("homogenization dropped every creature of the prefix")
    return Zoo(kept)


def is_homogeneous_zoo(t, s, c: Coloring) -> bool:
    """t homogeneous for a coloring living on s (nodes of t outside s are free)."""
    if c.kind == BRANCH:
        return len({c(l) for l in t.ext()}) <= 1
    where = s.internal_nodes() if s is not None else None
    for T in t.creatures:
        if not _homog(T, c, where if where is not None else T.internal):
            return False
    return True
