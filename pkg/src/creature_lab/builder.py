"""Finite generic sequences: a ≦-chain of prefixes meeting a list of demands.

Each stage applies one demand to the previous prefix (make-strong, root-shift
by gluing, homogenize, gauge). After every block of four demands a limit
stage diagonalises the block. Every stage keeps its recipe witness, and each
satisfied demand carries a cut from which it holds; cuts are pushed forward
through later witnesses.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import cycle

from .coloring import (Coloring, EmptyResultError, HomogenizationError, homogenize_zoo,
                       is_homogeneous_zoo, product_coloring)
from .creature import LabelSource
from .gauge import (ABOVE, BELOW, EQUAL, EmptyTailError, GaugeError, branch_distances,
                    check_gauges, dichotomy_colorings, front_compare, front_distance, gauge,
                    is_strong_zoo, make_strong)
from .generate import random_coloring
from .growth import GrowthFunction, from_json as fn_from_json
from .lab import NeverDefiniteError, chain_compare, restrict_front
from .zoo import (Front, FrontError, NormalizationError, SourceExhaustedError, Witness,
                  Zoo, ZooError, as_nodes, check_le, effective_cut, ext_front, glue, limit,
                  roots_front)

log = logging.getLogger(__name__)

KINDS = ("make-strong", "root-shift", "homogenize", "gauge")
LIMIT_EVERY = 4


class BuildError(RuntimeError):
    pass


@dataclass
class Demand:
    kind: str
    fn: GrowthFunction | None = None
    coloring: dict | None = None  # rule spec, see materialize()
    name: str | None = None
    status: str = "pending"  # pending, satisfied or failed
    stage: int | None = None
    cut: int | None = None
    note: str = ""
    state: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown demand kind {self.kind!r}")
        if self.kind in ("make-strong", "gauge") and self.fn is None:
            raise ValueError(f"{self.kind} needs a growth function")
        if self.kind == "homogenize" and self.coloring is None:
            raise ValueError("homogenize needs a coloring rule")

    @property
    def label(self):
        if self.name:
            return self.name
        if self.fn is not None:
            return f"{self.kind}({self.fn!r})"
        if self.coloring is not None:
            return f"{self.kind}({self.coloring.get('rule')})"
        return self.kind

    def to_json(self):
        out = {"kind": self.kind, "status": self.status}
        if self.name:
            out["name"] = self.name
        if self.fn is not None:
            out["fn"] = self.fn.to_json()
        if self.coloring is not None:
            out["coloring"] = _spec_json(self.coloring)
        for k in ("stage", "cut"):
            if getattr(self, k) is not None:
                out[k] = getattr(self, k)
        if self.note:
            out["note"] = self.note
        st = {}
        if "colorings" in self.state:
            st["colorings"] = [c.to_json() for c in self.state["colorings"]]
        for k in ("front", "F", "G"):
            if k in self.state:
                st[k] = self.state[k].to_json()
        if "N" in self.state:
            st["N"] = self.state["N"]
        if st:
            out["state"] = st
        return out

    @classmethod
    def from_json(cls, obj):
        fn = fn_from_json(obj["fn"]) if "fn" in obj else None
        d = cls(obj["kind"], fn, obj.get("coloring"), obj.get("name"),
                obj.get("status", "pending"), obj.get("stage"), obj.get("cut"), obj.get("note", ""))
        st = obj.get("state", {})
        if "colorings" in st:
            d.state["colorings"] = [Coloring.from_json(c) for c in st["colorings"]]
        for k in ("front", "F", "G"):
            if k in st:
                d.state[k] = Front.from_json(st[k])
        if "N" in st:
            d.state["N"] = st["N"]
        return d


def _spec_json(spec):
    out = dict(spec)
    for k in ("F", "G"):
        if isinstance(out.get(k), Front):
            out[k] = out[k].to_json()
    if isinstance(out.get("coloring"), Coloring):
        out["coloring"] = out["coloring"].to_json()
    return out


def demand(kind: str, fn=None, coloring=None, name=None) -> Demand:
    if isinstance(fn, dict):
        fn = fn_from_json(fn)
    return Demand(kind, fn, coloring, name)


@dataclass
class Stage:
    zoo: Zoo
    kind: str  # seed, demand or limit
    demand: int | None = None
    witness: Witness | None = None
    trim: int = 0  # zoo.tail(trim) ≦ previous stage
    note: str = ""
    exempt: int = 0  # leading creatures that are only ≦* earlier stages

    def to_json(self):
        out = {"kind": self.kind, "zoo": self.zoo.to_json(), "trim": self.trim}
        if self.exempt:
            out["exempt"] = self.exempt
        if self.demand is not None:
            out["demand"] = self.demand
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, obj):
        w = obj.get("witness")
        return cls(Zoo.from_json(obj["zoo"]), obj["kind"], obj.get("demand"),
                   Witness.from_json(w) if w else None, obj.get("trim", 0), obj.get("note", ""),
                   obj.get("exempt", 0))


@dataclass
class ChainLog:
    stages: list
    demands: list
    events: list = field(default_factory=list)

    def zoos(self):
        return [st.zoo for st in self.stages]

    @property
    def final(self) -> Zoo:
        return self.stages[-1].zoo

    def __len__(self):
        return len(self.stages)

    def stage_relations(self) -> list:
        """(i, ok) for every stage i >= 1: stage i (after its trim) is ≦ stage i-1"""
        out = []
        for i in range(1, len(self.stages)):
            st = self.stages[i]
            w = check_le(st.zoo.tail(st.trim), self.stages[i - 1].zoo, strict=True)
            out.append((i, w is not None))
        return out

    def reverify(self) -> dict:
        """label -> holds on the final prefix from its recorded cut"""
        return {i: demand_holds(d, self, self.final, d.cut)
                for i, d in enumerate(self.demands) if d.status == "satisfied"}

    def to_json(self):
        return {"stages": [st.to_json() for st in self.stages],
                "demands": [d.to_json() for d in self.demands],
                "events": list(self.events)}

    @classmethod
    def from_json(cls, obj):
        return cls([Stage.from_json(s) for s in obj["stages"]],
                   [Demand.from_json(d) for d in obj["demands"]], list(obj.get("events", [])))


# -- demands ---------------------------------------------------------------------

def _front_spec(spec, log_: ChainLog, cur: Zoo) -> Front:
    """'ext' / 'roots' of a stage ({"front": ..., "stage": i}), a literal Front
    or node list, or {"gauge": fn} on the current prefix."""
    if isinstance(spec, Front):
        return spec
    if isinstance(spec, str):
        spec = {"front": spec}
    if isinstance(spec, list):
        return Front(frozenset(spec))
    if "nodes" in spec:
        return Front.from_json(spec)
    if "gauge" in spec:
        f = spec["gauge"]
        f = fn_from_json(f) if isinstance(f, dict) else f
        return gauge(cur, f).front
    z = log_.stages[spec.get("stage", 0)].zoo
    which = spec["front"]
    if which == "ext":
        return ext_front(z)
    if which == "roots":
        return roots_front(z)
    raise ValueError(f"unknown front spec {spec!r}")


def materialize(d: Demand, log_: ChainLog, cur: Zoo):
    """The coloring(s) a homogenize demand stands for, on the current prefix.

    rules: {"rule": "random", "kind", "colors", "seed"},
           {"rule": "explicit", "coloring": Coloring or json},
           {"rule": "dichotomy", "F", "G", "N"} (joint dichotomy coloring).
    Returns (region cut, coloring).
    """
    spec = d.coloring
    rule = spec.get("rule", "random")
    if rule == "random":
        c = random_coloring(cur, spec.get("kind", "unary-node"), int(spec.get("colors", 2)),
                            spec.get("seed", 0))
        return 0, c
    if rule == "explicit":
        c = spec["coloring"]
        return 0, (c if isinstance(c, Coloring) else Coloring.from_json(c))
    if rule == "dichotomy":
        F = restrict_front(_front_spec(spec["F"], log_, cur), cur)
        G = restrict_front(_front_spec(spec["G"], log_, cur), cur)
        cf, cg = effective_cut(F, cur), effective_cut(G, cur)
        if cf is None or cg is None:
            raise FrontError("dichotomy fronts are not *fronts of the current prefix")
        N = int(spec.get("N", 5))
        cut = max(cf, cg)
        region = cur.tail(cut)
        d.state.update(F=F, G=G, N=N)
        return cut, product_coloring(dichotomy_colorings(F, G, region, N))
    raise ValueError(f"unknown coloring rule {rule!r}")


def apply_demand(d: Demand, log_: ChainLog, cur: Zoo, glue_block: int) -> Zoo:
    if d.kind == "make-strong":
        return make_strong(cur, d.fn)
    if d.kind == "root-shift":
        # creatures left over from a limit stay out of the blocks
        cur = cur.tail(log_.stages[-1].exempt)
        n = len(cur)
        if n < 5:
            raise ZooError(f"root-shift needs 5 creatures, prefix has {n}")
        nb = max(1, n // glue_block)
        cuts = [k * glue_block for k in range(nb)] + [n]
        if nb == 1:
            cuts = [0, n]
        labels = LabelSource("g")
        for st in log_.stages:
            labels.avoid(st.zoo.internal_nodes())
        return glue(cur, cuts, labels)
    if d.kind == "homogenize":
        cut, c = materialize(d, log_, cur)
        d.state["colorings"] = [c]
        return homogenize_zoo(cur.tail(cut), c)
    if d.kind == "gauge":
        base = cur
        if is_strong_zoo(cur, d.fn) is None:
            base = make_strong(cur, d.fn)
        r = gauge(base, d.fn)
        d.state["front"] = r.front
        return r.zoo
    raise ValueError(d.kind)


def demand_holds(d: Demand, log_: ChainLog, z: Zoo, cut: int | None) -> bool:
    """Does d hold on z from creature `cut` on?"""
    if cut is None:
        return False
    region = z.tail(cut)
    if len(region) == 0:
        return True
    if d.kind == "make-strong":
        return is_strong_zoo(region, d.fn) == 0
    if d.kind == "root-shift":
        # old roots sit strictly below the roots of every later prefix
        old = roots_front(log_.stages[d.stage - 1].zoo)
        F = restrict_front(old, region)
        dist = branch_distances(F, roots_front(region), region)
        return all(x is not None and x >= 1 for x in dist.values())
    if d.kind == "homogenize":
        home = log_.stages[d.stage - 1].zoo
        return all(is_homogeneous_zoo(region, home, c) for c in d.state.get("colorings", ()))
    if d.kind == "gauge":
        return check_gauges(restrict_front(d.state["front"], region), region, d.fn)
    return False


# -- cut bookkeeping ---------------------------------------------------------------

def remap_cut(w: Witness, c: int, n_new: int) -> int:
    """first creature of the refined prefix built only from creatures >= c"""
    for n, R in enumerate(w.recipe):
        if min(R.leaves) >= c:
            return n
    return n_new


def _limit_cut(res, c: int) -> int:
    k = len(res.trims) - 1
    return k + max(0, c - res.trims[-1])


# -- the builder -------------------------------------------------------------------

def _round_robin(demands):
    queues = {k: [i for i, d in enumerate(demands) if d.kind == k] for k in KINDS}
    order = []
    for k in cycle(KINDS):
        if not any(queues.values()):
            break
        if queues[k]:
            order.append(queues[k].pop(0))
    return order


def generic_builder(seed: Zoo, demands, max_stages: int = 12, seed_len: int | None = None,
                    glue_block: int = 8, limit_every: int = LIMIT_EVERY) -> ChainLog:
    """Apply the demands round-robin over the kinds, one stage each."""
    demands = [d if isinstance(d, Demand) else Demand.from_json(d) for d in demands]
    if seed_len is not None:
        seed = seed.extended(seed_len)
    log_ = ChainLog([Stage(seed, "seed")], demands)
    block_start = 0
    processed = 0

    def note(msg):
        log.info(msg)
        log_.events.append(msg)

    def push(t, kind, w, trim=0, di=None, remap=None, msg=""):
        ex = remap(log_.stages[-1].exempt) if log_.stages[-1].exempt else 0
        log_.stages.append(Stage(t, kind, di, w, max(trim, ex) if kind == "limit" else trim, msg,
                                 max(trim, ex)))
        for d in demands:
            if d.status == "satisfied" and d.cut is not None and d is not (demands[di] if di is not None else None):
                d.cut = remap(d.cut)

    for di in _round_robin(demands):
        # the budget counts demand stages; limit stages only consolidate
        if sum(st.kind == "demand" for st in log_.stages) >= max_stages:
            note(f"stage budget {max_stages} reached; {demands[di].label} left pending")
            break
        d = demands[di]
        cur = log_.final
        try:
            t = apply_demand(d, log_, cur, glue_block)
        except (EmptyTailError, EmptyResultError, HomogenizationError, GaugeError,
                FrontError, ZooError, SourceExhaustedError) as e:
            d.status, d.note = "failed", f"{type(e).__name__}: {e}"
            note(f"demand {d.label} unsatisfiable at this scale: {e}")
            processed += 1
        else:
            w = check_le(t, cur, strict=True)
            if w is None:
                raise BuildError(f"stage for {d.label} is not ≦ its predecessor")
            push(t, "demand", w, 0, di, lambda c, w=w, n=len(t): remap_cut(w, c, n))
            d.status, d.stage, d.cut = "satisfied", len(log_.stages) - 1, 0
            if not demand_holds(d, log_, t, 0):
                d.status, d.note = "failed", "does not hold on its own stage"
                note(f"demand {d.label} does not hold right after applying it")
            processed += 1
        if processed % limit_every == 0 and len(log_.stages) - 1 - block_start >= 1:
            _limit_stage(log_, block_start, note, push)
            block_start = len(log_.stages) - 1
    for d in demands:
        if d.status == "satisfied" and not demand_holds(d, log_, log_.final, d.cut):
            d.status, d.note = "failed", "does not re-verify on the final prefix"
            note(f"demand {d.label} fails on the final prefix from cut {d.cut}")
    return log_


def _limit_stage(log_: ChainLog, start: int, note, push):
    """Diagonal of the block stages[start:], shortening the block from the
    left until the heads can be normalised."""
    zs = log_.zoos()
    last = len(zs) - 1
    for b in range(start, last):
        try:
            res = limit(zs[b:], extend_tail=True)
        except NormalizationError:
            continue
        trim = len(res.trims) - 1
        push(res.zoo, "limit", res.witnesses[-1], trim, None,
             lambda c, res=res: _limit_cut(res, c), f"limit of stages {b}..{last}")
        return True
    note(f"limit over stages {start}..{last} skipped: no block normalises within the prefix")
    return False


# -- chain-level report ------------------------------------------------------------

def verify_chain_properties(log_: ChainLog, pairs=(), N: int = 5) -> dict:
    """Comparability and the +n / exceeds-N classification for every
    registered front pair, and the ext class across stages.

    Pairs come from the dichotomy demands of the chain (with their home
    stage) plus any extra (F, G, home) given.
    """
    zs = log_.zoos()
    todo = []
    for d in log_.demands:
        if d.kind == "homogenize" and d.status == "satisfied" and "F" in d.state:
            todo.append((d.state["F"], d.state["G"], d.stage - 1, d.label))
    for p in pairs:
        F, G = p[0], p[1]
        home = p[2] if len(p) > 2 else 0
        todo.append((F, G, home, "extra"))
    items = []
    for F, G, home, lab in todo:
        item = {"pair": lab, "home": home}
        try:
            cc = chain_compare(zs, F, G, home)
        except (NeverDefiniteError, AssertionError) as e:
            item.update(comparable=False, error=str(e))
            items.append(item)
            continue
        item.update(comparable=True, relation=cc.relation, stage=cc.stage)
        prof = None
        for i in range(cc.stage, len(zs)):
            z = zs[i]
            Fi, Gi = restrict_front(F, z), restrict_front(G, z)
            try:
                if cc.relation == ABOVE:
                    p = front_distance(Gi, Fi, z, N)
                else:
                    p = front_distance(Fi, Gi, z, N)
            except FrontError:
                continue
            if p.kind in ("plus", "exceeds"):
                prof = (i, p)
                break
        item["classified"] = prof is not None
        if prof is not None:
            item.update(kind=prof[1].kind, n=prof[1].n, class_stage=prof[0])
        items.append(item)
    ext_fail = []
    for j in range(len(zs)):
        for i in range(j):
            try:
                r = front_compare(restrict_front(ext_front(zs[i]), zs[j]), ext_front(zs[j]), zs[j])
                ok = r.relation == EQUAL
            except FrontError:
                ok = False
            if not ok:
                ext_fail.append([i, j])
    minimal = []
    for F, G, home, lab in todo:
        for X in (F, G):
            for j in range(home, len(zs)):
                z = zs[j]
                try:
                    r = front_compare(ext_front(z), restrict_front(X, z), z)
                    ok = r.relation in (EQUAL, BELOW)
                except FrontError:
                    ok = True  # X is no longer a *front there; nothing to compare
                if not ok:
                    minimal.append([lab, j])
    ok = all(it["comparable"] and it.get("classified") for it in items) and not ext_fail and not minimal
    return {"ok": ok, "pairs": items, "ext_class": {"ok": not ext_fail, "failures": ext_fail},
            "ext_minimal": {"ok": not minimal, "failures": minimal}}
