"""Creatures: finite rooted trees whose leaves are natural numbers.

Internal nodes carry string labels, leaves are ints. Children are always kept
sorted by their leaf interval, so two creatures with the same shape compare
equal regardless of the order they were built in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

Node = Hashable


class CreatureError(ValueError):
    pass


class ImproperCreatureError(CreatureError):
    """norm of a single-leaf creature"""


class UnknownNodeError(KeyError):
    pass


def is_leaf_label(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


@dataclass(frozen=True)
class Violation:
    clause: str
    detail: str = ""

    def __str__(self):
        return f"{self.clause}: {self.detail}" if self.detail else self.clause

    def to_json(self):
        return {"clause": self.clause, "detail": self.detail}


class Creature:
    """A finite tree. `succ` maps internal labels to their children.

    Construction does not validate; call validate_creature (or .check()).
    """

    __slots__ = ("root", "_kids", "_par", "_lo", "_hi", "_key", "_order")

    def __init__(self, root: Node, succ: Mapping[Node, Iterable[Node]] | None = None):
        self.root = root
        kids = {}
        if succ:
            for k, v in succ.items():
                v = tuple(v)
                if v:
                    kids[k] = v
        self._kids = kids
        self._par = None
        self._lo = None
        self._key = None
        self._order = None

    # -- structure ---------------------------------------------------------
    def _reachable(self):
        # returns (order, parent) of the tree hanging from root, or raises on
        # a node met twice
        order, par = [], {self.root: None}
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            for c in self._kids.get(v, ()):
                if c in par:
                    raise CreatureError(f"node {c!r} reached twice")
                par[c] = v
                stack.append(c)
        return order, par

    def _index(self):
        if self._lo is not None:
            return
        order, par = self._reachable()
        lo, hi = {}, {}
        for v in reversed(order):
            ch = self._kids.get(v)
            if not ch:
                lo[v] = hi[v] = v
            else:
                lo[v] = min(lo[c] for c in ch)
                hi[v] = max(hi[c] for c in ch)
        # sorted children make lex order and equality canonical
        kids = {}
        for v in order:
            ch = self._kids.get(v)
            if ch:
                kids[v] = tuple(sorted(ch, key=lambda c: (lo[c], hi[c])))
        self._kids = kids
        self._par, self._lo, self._hi = par, lo, hi
        self._order = order

    @property
    def nodes(self) -> frozenset:
        self._index()
        return frozenset(self._par)

    def __contains__(self, v):
        self._index()
        return v in self._par

    def __len__(self):
        self._index()
        return len(self._par)

    @property
    def leaves(self) -> tuple:
        self._index()
        return tuple(sorted(v for v in self._par if v not in self._kids))

    @property
    def internal(self) -> frozenset:
        self._index()
        return frozenset(self._kids)

    def is_leaf(self, v) -> bool:
        self._need(v)
        return v not in self._kids

    @property
    def is_proper(self) -> bool:
        return bool(self._kids.get(self.root))

    def _need(self, v):
        self._index()
        if v not in self._par:
            raise UnknownNodeError(v)

    def succ(self, v) -> tuple:
        self._need(v)
        return self._kids.get(v, ())

    def parent(self, v):
        self._need(v)
        return self._par[v]

    def lo(self, v) -> int:
        self._need(v)
        return self._lo[v]

    def hi(self, v) -> int:
        self._need(v)
        return self._hi[v]

    def path(self, v) -> tuple:
        """root ... v"""
        self._need(v)
        out = []
        while v is not None:
            out.append(v)
            v = self._par[v]
        return tuple(reversed(out))

    def depth(self, v) -> int:
        return len(self.path(v)) - 1

    def height(self) -> int:
        return max(self.depth(l) for l in self.leaves)

    def is_below(self, a, b) -> bool:
        """a ⊴ b (a on the path from the root to b)"""
        self._need(a)
        self._need(b)
        while b is not None:
            if b == a:
                return True
            b = self._par[b]
        return False

    def walk(self):
        """nodes in depth-first order, children left to right"""
        self._index()
        stack = [self.root]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(reversed(self._kids.get(v, ())))

    def norm(self) -> int:
        self._index()
        if not self.is_proper:
            raise ImproperCreatureError("norm of an improper creature is undefined")
        return min(len(ch) for ch in self._kids.values())

    def branches(self) -> list:
        return [self.path(l) for l in self.leaves]

    def subtree(self, v) -> "Creature":
        self._need(v)
        kids, stack = {}, [v]
        while stack:
            x = stack.pop()
            ch = self._kids.get(x)
            if ch:
                kids[x] = ch
                stack.extend(ch)
        return Creature(v, kids)

    def prune(self, keep: Mapping[Node, Iterable[Node]]) -> "Creature":
        """Subtree keeping, at each listed node, only the given children."""
        self._index()
        kids, stack = {}, [self.root]
        while stack:
            x = stack.pop()
            ch = self._kids.get(x)
            if not ch:
                continue
            if x in keep:
                want = set(keep[x])
                bad = want - set(ch)
                if bad:
                    raise CreatureError(f"{sorted(map(str, bad))} are not successors of {x!r}")
                ch = tuple(c for c in ch if c in want)
                if not ch:
                    raise CreatureError(f"empty successor set at {x!r}")
            kids[x] = ch
            stack.extend(ch)
        return Creature(self.root, kids)

    def relabel(self, mapping: Mapping[Node, Node]) -> "Creature":
        m = lambda v: mapping.get(v, v)
        return Creature(m(self.root), {m(k): [m(c) for c in ch] for k, ch in self._kids.items()})

    def succ_map(self) -> dict:
        self._index()
        return dict(self._kids)

    # -- identity ----------------------------------------------------------
    def key(self):
        if self._key is None:
            self._index()

            def k(v):
                ch = self._kids.get(v)
                return v if not ch else (v, tuple(k(c) for c in ch))

            self._key = k(self.root)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Creature) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self._kids:
            return f"Creature({self.root!r})"
        return f"Creature({self.root!r}, {len(self.leaves)} leaves, [{self.lo(self.root)}..{self.hi(self.root)}])"

    # -- json --------------------------------------------------------------
    def to_json(self):
        self._index()

        def enc(v):
            ch = self._kids.get(v)
            if not ch:
                return v
            return {"id": v, "children": [enc(c) for c in ch]}

        return enc(self.root)

    @classmethod
    def from_json(cls, obj) -> "Creature":
        kids = {}

        def dec(o):
            if isinstance(o, dict):
                lab = o["id"]
                kids[lab] = [dec(c) for c in o.get("children", [])]
                return lab
            return o

        return cls(dec(obj), kids)

    def check(self) -> "Creature":
        v = validate_creature(self)
        if v is not None:
            raise CreatureError(str(v))
        return self


def leaf(n: int) -> Creature:
    return Creature(n)


def star(root: str, leaves: Iterable[int]) -> Creature:
    """depth-1 creature"""
    return Creature(root, {root: list(leaves)})


def validate_creature(c: Creature) -> Violation | None:
    """None if c is a creature, else the first violated clause."""
    try:
        order, par = c._reachable()
    except CreatureError as e:
        return Violation("not-a-tree", str(e))
    kids = c._kids
    for v in order:
        if v in kids:
            if is_leaf_label(v) or isinstance(v, (int, float, bool)):
                return Violation("internal-label-is-natural", repr(v))
            if not isinstance(v, str):
                return Violation("internal-label-not-string", repr(v))
        elif not is_leaf_label(v):
            return Violation("leaf-not-natural", repr(v))
    # interval clause only needs checking between siblings
    lo, hi = {}, {}
    for v in reversed(order):
        ch = kids.get(v)
        if not ch:
            lo[v] = hi[v] = v
            continue
        s = sorted(ch, key=lambda x: lo[x])
        for a, b in zip(s, s[1:]):
            if hi[a] >= lo[b]:
                return Violation(
                    "overlapping-leaf-intervals",
                    f"{a!r}[{lo[a]},{hi[a]}] vs {b!r}[{lo[b]},{hi[b]}]",
                )
        lo[v], hi[v] = lo[s[0]], max(hi[x] for x in s)
    return None


def min_max_of(c: Creature, v) -> tuple:
    return c.lo(v), c.hi(v)


def lex_compare(c: Creature, a, b) -> str:
    """'lt' / 'gt' for incomparable nodes, 'eq' for a == b, else 'tree-comparable'."""
    c._need(a)
    c._need(b)
    if a == b:
        return "eq"
    if c.is_below(a, b) or c.is_below(b, a):
        return "tree-comparable"
    return "lt" if c.hi(a) < c.lo(b) else "gt"


def is_subtree(t: Creature, s: Creature) -> bool:
    """t ≤ s: same root, and every node of t internal in s keeps a nonempty
    subset of its s-successors."""
    if t.root != s.root:
        return False
    tn = t.nodes
    if not tn <= s.nodes:
        return False
    sk, tk = s._kids, t._kids
    for v in tn:
        if v in sk:
            ch = tk.get(v)
            if not ch or not set(ch) <= set(sk[v]):
                return False
        elif v in tk:
            return False
    return True


def front_check(c: Creature, front: Iterable) -> bool:
    F = set(front)
    if not F <= c.nodes:
        return False
    for l in c.leaves:
        if sum(1 for v in c.path(l) if v in F) != 1:
            return False
    return True


def nor_node(c: Creature, v) -> int:
    """max{k : r^k(4) <= |succ(v)|} with r(n) = 4^n; 0 below the floor."""
    if c.is_leaf(v):
        raise CreatureError(f"{v!r} is a leaf")
    size = len(c.succ(v))
    k, x = 0, 4
    if size < 4:
        return 0
    while True:
        if x > size.bit_length() * 2:  # 4**x > size for sure
            return k
        nxt = 4 ** x
        if nxt > size:
            return k
        k, x = k + 1, nxt


_LAB = re.compile(r"^(.*?)(\d+)$")


class LabelSource:
    """Hands out fresh internal labels prefix0, prefix1, ... skipping any taken ones."""

    def __init__(self, prefix: str = "v", start: int = 0, taken: Iterable = ()):
        self.prefix = prefix
        self.counter = start
        self.taken = set(taken)

    def avoid(self, labels: Iterable):
        for lab in labels:
            self.taken.add(lab)
            if isinstance(lab, str):
                m = _LAB.match(lab)
                if m and m.group(1) == self.prefix:
                    self.counter = max(self.counter, int(m.group(2)) + 1)
        return self

    def fresh(self) -> str:
        while True:
            lab = f"{self.prefix}{self.counter}"
            self.counter += 1
            if lab not in self.taken:
                self.taken.add(lab)
                return lab

    def __call__(self):
        return self.fresh()

    def to_json(self):
        return {"prefix": self.prefix, "counter": self.counter}
