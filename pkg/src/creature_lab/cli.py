"""creature-lab command line.

Artifacts are JSON files. Wherever a command takes a zoo, front, function or
chain, the argument may be a file path, a name in the workspace registry
(directory from CREATURE_LAB_WORKSPACE), inline JSON, or for functions a
library name such as "succ" or "n+5".
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import faults
from .builder import ChainLog, Demand, generic_builder, verify_chain_properties
from .coloring import Coloring, homogenize_zoo
from .creature import Creature
from .gauge import compare_functions, dichotomy, front_compare, gauge
from .generate import gen_zoo, random_coloring, seed_zoo
from .growth import IndexSet, le_A, library
from .growth import from_json as fn_from_json
from .lab import verify_crucial, verify_leq, verify_not
from .zoo import Front, Zoo, check_le, drop, glue, limit, shrink, validate_prefix

log = logging.getLogger("creature_lab")


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


class CliError(Exception):
    pass


# -- workspace ---------------------------------------------------------------------

class Workspace:
    """A directory of named JSON artifacts: <root>/<name>.json"""

    def __init__(self, root=None):
        root = root or os.environ.get("CREATURE_LAB_WORKSPACE")
        self.root = Path(root) if root else None

    def path(self, name):
        return self.root / f"{name}.json" if self.root else None

    def has(self, name):
        p = self.path(name)
        return p is not None and p.is_file()

    def save(self, name, obj):
        if self.root is None:
            return None
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path(name)
        p.write_text(canonical(obj), encoding="utf-8")
        return str(p)

    def load(self, ref):
        """file path, registry name or inline JSON"""
        if isinstance(ref, (dict, list)):
            return ref
        ref = str(ref)
        if ref.lstrip().startswith(("{", "[")):
            return json.loads(ref)
        p = Path(ref)
        if p.is_file():
            return json.loads(p.read_text(encoding="utf-8"))
        if self.has(ref):
            return json.loads(self.path(ref).read_text(encoding="utf-8"))
        raise CliError(f"cannot find {ref!r} (not a file, registry name or JSON)")


def _zoo(ws, ref) -> Zoo:
    obj = ws.load(ref)
    # gauge / comparison reports carry their zoo inside
    if "creatures" not in obj and "zoo" in obj:
        obj = obj["zoo"]
    return Zoo.from_json(obj)


def _fn(ws, ref):
    lib = library()
    if isinstance(ref, str) and ref in lib:
        return lib[ref]
    obj = ws.load(ref)
    if "kind" not in obj and "fn" in obj:
        obj = obj["fn"]
    return fn_from_json(obj)


def _front(ws, ref, s: Zoo | None = None) -> Front:
    if s is not None and ref in ("ext", "roots"):
        from .zoo import ext_front, roots_front
        return ext_front(s) if ref == "ext" else roots_front(s)
    obj = ws.load(ref)
    if isinstance(obj, list):
        return Front(frozenset(obj))
    if "nodes" not in obj and "front" in obj:
        obj = obj["front"]
    return Front.from_json(obj)


def _ints(text):
    return [int(x) for x in str(text).split(",") if x.strip()]


def _emit(args, report, artifact=None):
    """write the artifact to --out (if any) and print the report"""
    if artifact is not None and getattr(args, "out", None):
        Path(args.out).write_text(canonical(artifact), encoding="utf-8")
        report = {**report, "written": args.out}
    if artifact is not None and getattr(args, "name", None):
        p = args.ws.save(args.name, artifact)
        if p:
            report = {**report, "registered": args.name}
    if args.json or "summary" not in report:
        sys.stdout.write(canonical(report))
    else:
        print(report["summary"])


# -- commands ----------------------------------------------------------------------

def cmd_gen(args):
    shape = args.ws.load(args.shape) if args.shape else {}
    for key in ("creatures", "depth", "gap"):
        v = getattr(args, key)
        if v is not None:
            shape[key] = v
    if args.arity is not None:
        a = _ints(args.arity)
        shape["arity"] = a[0] if len(a) == 1 else a
    s = gen_zoo(shape, args.seed)
    bad = validate_prefix(s)
    assert bad is None, bad
    rep = {"creatures": len(s), "leaves": [s.ext()[0], s.ext()[-1]], "seed": args.seed,
           "shape": shape, "summary": f"{len(s)} creatures, leaves {s.ext()[0]}..{s.ext()[-1]}"}
    if not args.out and not args.name:
        rep = {**rep, "zoo": s.to_json()}
        rep.pop("summary")
    _emit(args, rep, s.to_json())


def cmd_validate(args):
    s_obj = args.ws.load(args.input)
    try:
        s = Zoo.from_json(s_obj)
        v = validate_prefix(s)
    except (ValueError, KeyError, TypeError) as e:
        v = str(e)
    if v is None:
        _emit(args, {"ok": True, "creatures": len(s), "summary": "ok"})
        return 0
    detail = v.to_json() if hasattr(v, "to_json") else {"message": str(v)}
    _emit(args, {"ok": False, "violation": detail,
                 "summary": f"invalid: {detail.get('clause', '')} {detail.get('detail', detail.get('message', ''))}".strip()})
    return 1


def cmd_drop(args):
    s = _zoo(args.ws, args.input)
    t = drop(s, _ints(args.keep))
    _emit(args, {"creatures": len(t), "summary": f"kept {len(t)} of {len(s)}"}, t.to_json())


def cmd_shrink(args):
    s = _zoo(args.ws, args.input)
    ch = args.ws.load(args.choice)
    if isinstance(ch, dict):
        choice = {int(k): Creature.from_json(v) for k, v in ch.items()}
    else:
        choice = [Creature.from_json(c) for c in ch]
    t = shrink(s, choice)
    _emit(args, {"creatures": len(t), "norms": t.norms(), "summary": f"norms {t.norms()}"},
          t.to_json())


def cmd_glue(args):
    s = _zoo(args.ws, args.input)
    t = glue(s, _ints(args.cuts))
    _emit(args, {"creatures": len(t), "roots": [S.root for S in t.creatures],
                 "summary": f"{len(t)} glued creatures"}, t.to_json())


def cmd_check_le(args):
    t, s = _zoo(args.ws, args.input), _zoo(args.ws, args.of)
    w = check_le(t, s, strict=args.strict)
    rel = "≦" if args.strict else "≤"
    if w is None:
        _emit(args, {"ok": False, "summary": f"not t {rel} s"})
        return 1
    _emit(args, {"ok": True, "witness": w.to_json(), "summary": f"t {rel} s"})
    return 0


def cmd_limit(args):
    chain = [_zoo(args.ws, r) for r in args.chain]
    res = limit(chain, extend_tail=args.extend_tail)
    _emit(args, {"creatures": len(res.zoo), "trims": res.trims, "nesting_cuts": res.nesting_cuts,
                 "summary": f"diagonal of {len(chain)} members: {len(res.zoo)} creatures"},
          res.zoo.to_json())


def cmd_homogenize(args):
    s = _zoo(args.ws, args.input)
    if args.coloring:
        c = Coloring.from_json(args.ws.load(args.coloring))
    else:
        c = random_coloring(s, args.kind, args.colors, args.seed)
    rep = {}
    t = homogenize_zoo(s.tail(args.cut), c, report=rep)
    _emit(args, {"creatures": len(t), "dropped": rep.get("dropped", []), "seed": args.seed,
                 "summary": f"{len(t)} creatures homogeneous, dropped {rep.get('dropped', [])}"},
          t.to_json())


def cmd_gauge(args):
    s = _zoo(args.ws, args.zoo)
    r = gauge(s.tail(args.cut), _fn(args.ws, args.fn))
    out = r.to_json()
    _emit(args, {"front": out["front"], "cut": r.trimmed, "dropped": r.dropped,
                 "below_guarantee": r.below_guarantee,
                 "summary": f"front of {len(r.front.nodes)} nodes, trimmed {r.trimmed}"}, out)


def cmd_compare_fronts(args):
    s = _zoo(args.ws, args.zoo).tail(args.cut)
    F, G = _front(args.ws, args.F, s), _front(args.ws, args.G, s)
    if args.dichotomy:
        d = dichotomy(F, G, s, args.N)
        out = d.to_json()
        cmp = d.comparison
    else:
        cmp = front_compare(F, G, s)
        out = {"comparison": cmp.to_json()}
    rep = {"relation": cmp.relation, "symbol": cmp.symbol(), "cut": cmp.cut,
           "distance": cmp.distance, "witnesses": out,
           "summary": f"F {cmp.symbol()} G at cut {cmp.cut}"}
    _emit(args, rep)


def cmd_compare_functions(args):
    s = _zoo(args.ws, args.zoo).tail(args.cut)
    r = compare_functions(s, _fn(args.ws, args.f), _fn(args.ws, args.g))
    _emit(args, {"relation": r.relation, "cut": r.cut, "distance": r.comparison.distance,
                 "witnesses": r.to_json(), "summary": f"f {r.relation} g at cut {r.cut}"})


def cmd_le(args):
    A = IndexSet.from_json(args.ws.load(args.set)) if args.set else IndexSet([0], ("ap", 1))
    r = le_A(_fn(args.ws, args.f), _fn(args.ws, args.g), A, kmax=args.kmax, B=args.bound)
    msg = f"f ≤_A g with k={r.k}" if r else f"no k <= {args.kmax} ({r.binding} at n={r.at})"
    _emit(args, {**r.to_json(), "summary": msg})
    return 0 if r else 1


def cmd_verify(args):
    s = _zoo(args.ws, args.zoo)
    f = _fn(args.ws, args.f)
    if args.which == "crucial":
        m = verify_crucial(s, f, _front(args.ws, args.F1, s), _front(args.ws, args.F2, s))
        _emit(args, {"ok": True, "agree_from": m, "summary": f"fronts agree from creature {m}"})
        return 0
    g = _fn(args.ws, args.g)
    if args.which == "leq":
        r = verify_leq(s, f, g)
        j = r.to_json()
        msg = (f"ok on {j['checked']} points in {j['range']}" if r.ok
               else f"counterexample {r.counterexample}")
    else:
        r = verify_not(s, f, g, args.J)
        j = r.to_json()
        msg = (f"ok for j <= {args.J}" if r.ok else f"fails at j = {r.failed_j}")
    _emit(args, {**j, "summary": msg})
    return 0 if r.ok else 1


def cmd_build(args):
    demands = args.ws.load(args.demands)
    if isinstance(demands, dict):
        demands = demands["demands"]
    if args.input:
        seed = _zoo(args.ws, args.input)
    else:
        seed = seed_zoo(args.seed_len, args.arity)
    log_ = generic_builder(seed, [Demand.from_json(d) for d in demands],
                           max_stages=args.max_stages, glue_block=args.glue_block)
    ds = [{"demand": d.label, "status": d.status, "stage": d.stage, "cut": d.cut}
          for d in log_.demands]
    ok = all(d.status == "satisfied" for d in log_.demands)
    _emit(args, {"stages": len(log_.stages) - 1, "demands": ds, "events": log_.events,
                 "summary": f"{len(log_.stages) - 1} stages, "
                            f"{sum(d['status'] == 'satisfied' for d in ds)}/{len(ds)} demands satisfied"},
          log_.to_json())
    return 0 if ok else 1


def cmd_report(args):
    log_ = ChainLog.from_json(args.ws.load(args.chain))
    rel = log_.stage_relations()
    rev = log_.reverify()
    suf = verify_chain_properties(log_)
    ok = all(o for _, o in rel) and all(rev.values()) and suf["ok"]
    rep = {"ok": ok, "stages": [[st.kind, len(st.zoo)] for st in log_.stages],
           "relations": [[i, o] for i, o in rel],
           "demands": {str(k): v for k, v in rev.items()},
           "properties": suf, "events": log_.events,
           "summary": f"{len(log_.stages) - 1} stages, chain {'ok' if ok else 'BROKEN'}"}
    _emit(args, rep)
    return 0 if ok else 1


def cmd_selftest(args):
    from .acceptance import run_all
    if args.inject:
        faults.enable(*args.inject)
    only = set(_ints(args.only)) if args.only else None
    res = run_all(quick=args.quick, only=only, echo=None if args.json else print)
    bad = [r for r in res if not r.passed]
    if args.json:
        sys.stdout.write(canonical({"ok": not bad, "faults": faults.current(),
                                    "results": [r.to_json() for r in res]}))
    else:
        print(f"{len(res) - len(bad)}/{len(res)} criteria passed"
              + (f" (faults: {', '.join(faults.current())})" if faults.current() else ""))
    return 1 if bad else 0


# -- pipeline ----------------------------------------------------------------------

class StepError(CliError):
    pass


def run_pipeline(script, ws: Workspace | None = None) -> dict:
    """Run a list of named steps. Returns the report; report["ok"] is False
    when a step failed (the failure carries the step index)."""
    ws = ws or Workspace()
    if isinstance(script, dict):
        script = script.get("steps", [])
    env = {"zoo": {}, "fn": {}, "front": {}}
    report = {"ok": True, "steps": []}

    def get(kind, name, i, op):
        if isinstance(name, dict):
            return Zoo.from_json(name) if kind == "zoo" else fn_from_json(name) if kind == "fn" else Front.from_json(name)
        if name in env[kind]:
            return env[kind][name]
        if kind == "fn" and name in library():
            return library()[name]
        raise StepError(f"step {i} ({op}): unknown {kind} name {name!r}")

    for i, step in enumerate(script):
        op = step.get("op")
        name = step.get("name")
        try:
            if op == "gen":
                s = gen_zoo(step.get("shape", {}), step.get("seed", 0))
                env["zoo"][name] = s
                out = {"creatures": len(s)}
                ws.save(name, s.to_json())
            elif op == "load":
                env["zoo"][name] = _zoo(ws, step["path"])
                out = {"creatures": len(env["zoo"][name])}
            elif op == "fn":
                env["fn"][name] = fn_from_json(step["fn"])
                out = {"fn": step["fn"]}
            elif op == "glue":
                s = glue(get("zoo", step["zoo"], i, op), step["cuts"])
                env["zoo"][name] = s
                out = {"creatures": len(s)}
                ws.save(name, s.to_json())
            elif op == "homogenize":
                s = get("zoo", step["zoo"], i, op)
                c = (Coloring.from_json(step["coloring"]) if "coloring" in step else
                     random_coloring(s, step.get("kind", "unary-node"), step.get("colors", 2),
                                     step.get("seed", 0)))
                t = homogenize_zoo(s, c)
                env["zoo"][name] = t
                out = {"creatures": len(t)}
                ws.save(name, t.to_json())
            elif op == "gauge":
                f = get("fn", step["fn"], i, op) if isinstance(step["fn"], str) else fn_from_json(step["fn"])
                r = gauge(get("zoo", step["zoo"], i, op), f)
                env["fn"][name] = f
                env["front"][name] = r.front
                out = {"front": r.front.to_json(), "cut": r.trimmed}
                ws.save(name, r.to_json())
            elif op == "compare":
                s = get("zoo", step["zoo"], i, op)
                f, g = get("fn", step["f"], i, op), get("fn", step["g"], i, op)
                r = compare_functions(s, f, g)
                out = {"relation": r.relation, "cut": r.cut, "distance": r.comparison.distance,
                       "summary": f"{step['f']} {r.relation} {step['g']} at cut {r.cut}"}
            elif op == "compare-fronts":
                s = get("zoo", step["zoo"], i, op)
                cmp = front_compare(get("front", step["F"], i, op), get("front", step["G"], i, op), s)
                out = {"relation": cmp.relation, "symbol": cmp.symbol(), "cut": cmp.cut,
                       "distance": cmp.distance,
                       "summary": f"{step['F']} {cmp.symbol()} {step['G']} at cut {cmp.cut}"}
            elif op == "verify":
                s = get("zoo", step["zoo"], i, op)
                f = get("fn", step["f"], i, op)
                which = step.get("which", "leq")
                if which == "crucial":
                    m = verify_crucial(s, f, get("front", step["F1"], i, op), get("front", step["F2"], i, op))
                    out = {"ok": True, "agree_from": m}
                else:
                    g = get("fn", step["g"], i, op)
                    r = verify_leq(s, f, g) if which == "leq" else verify_not(s, f, g, step.get("J", 1))
                    out = r.to_json()
                    if not r.ok:
                        raise StepError(f"step {i} ({op}): verify {which} failed")
            else:
                raise StepError(f"step {i}: unknown op {op!r}")
        except StepError as e:
            report["ok"] = False
            report["error"] = {"step": i, "op": op, "message": str(e)}
            break
        except Exception as e:  # any library error aborts with context
            report["ok"] = False
            report["error"] = {"step": i, "op": op, "message": f"step {i} ({op}): {type(e).__name__}: {e}"}
            break
        report["steps"].append({"step": i, "op": op, "name": name, **out})
    return report


def cmd_pipeline(args):
    rep = run_pipeline(args.ws.load(args.script), args.ws)
    if not args.json:
        for st in rep["steps"]:
            print(f"[{st['step']}] {st['op']}" + (f": {st['summary']}" if "summary" in st else ""))
        if not rep["ok"]:
            print(f"error: {rep['error']['message']}", file=sys.stderr)
    else:
        sys.stdout.write(canonical(rep))
    if args.out:
        Path(args.out).write_text(canonical(rep), encoding="utf-8")
    return 0 if rep["ok"] else 1


# -- parser ------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="creature-lab", description=__doc__.split("\n")[0])
    p.add_argument("--json", action="store_true", help="print the full JSON report")
    p.add_argument("--workspace", help="registry directory (default $CREATURE_LAB_WORKSPACE)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, out=True):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(func=fn)
        q.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        if out:
            q.add_argument("--out", help="write the resulting artifact here")
            q.add_argument("--name", help="register the artifact in the workspace")
        return q

    q = add("gen", cmd_gen, "random valid prefix from a shape")
    q.add_argument("--shape", help="JSON shape {creatures, depth, arity, gap}")
    q.add_argument("--creatures", type=int)
    q.add_argument("--depth", type=int)
    q.add_argument("--arity", help="int, lo,hi or one value per creature")
    q.add_argument("--gap", type=int)
    q.add_argument("--seed", type=int, default=0)

    q = add("validate", cmd_validate, "check the prefix invariants", out=False)
    q.add_argument("--in", dest="input", required=True)

    q = add("drop", cmd_drop, "keep the listed creatures")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--keep", required=True, help="comma separated increasing indices")

    q = add("shrink", cmd_shrink, "replace creatures by subtrees")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--choice", required=True, help="list of creatures or {index: creature}")

    q = add("glue", cmd_glue, "fresh roots over consecutive blocks")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--cuts", required=True, help="cutpoints, e.g. 0,5,10")

    q = add("check-le", cmd_check_le, "is t ≤ s (≦ with --strict)", out=False)
    q.add_argument("--in", dest="input", required=True, help="t")
    q.add_argument("--of", required=True, help="s")
    q.add_argument("--strict", action="store_true")

    q = add("limit", cmd_limit, "diagonal of a ≦-chain")
    q.add_argument("chain", nargs="+")
    q.add_argument("--extend-tail", action="store_true")

    q = add("homogenize", cmd_homogenize, "shrink to a homogeneous prefix")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--coloring")
    q.add_argument("--kind", default="unary-node")
    q.add_argument("--colors", type=int, default=2)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--cut", type=int, default=0)

    q = add("gauge", cmd_gauge, "gauge a function, canonical front")
    q.add_argument("--zoo", "--in", dest="zoo", required=True)
    q.add_argument("--fn", required=True)
    q.add_argument("--cut", type=int, default=0)

    q = add("compare-fronts", cmd_compare_fronts, "relation of two fronts", out=False)
    q.add_argument("--zoo", "--in", dest="zoo", required=True)
    q.add_argument("--F", required=True, help="front, or ext / roots")
    q.add_argument("--G", required=True)
    q.add_argument("--cut", type=int, default=0)
    q.add_argument("--dichotomy", action="store_true", help="homogenize first")
    q.add_argument("--N", type=int, default=5)

    q = add("compare-functions", cmd_compare_functions, "gauge both and compare", out=False)
    q.add_argument("--zoo", "--in", dest="zoo", required=True)
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--cut", type=int, default=0)

    q = add("le", cmd_le, "bounded f ≤_A g search", out=False)
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--set", help="IndexSet JSON (default: all naturals)")
    q.add_argument("--kmax", type=int, default=16)
    q.add_argument("--bound", type=int, default=10 ** 6)

    q = add("verify", cmd_verify, "brute-force checks of leq, not and crucial", out=False)
    q.add_argument("which", choices=["leq", "not", "crucial"])
    q.add_argument("--zoo", "--in", dest="zoo", required=True)
    q.add_argument("--f", required=True)
    q.add_argument("--g")
    q.add_argument("--J", type=int, default=1)
    q.add_argument("--F1")
    q.add_argument("--F2")

    q = add("build", cmd_build, "finite generic chain from demands")
    q.add_argument("--demands", required=True)
    q.add_argument("--in", dest="input", help="seed zoo (default: uniform depth-1 seed)")
    q.add_argument("--seed-len", type=int, default=128)
    q.add_argument("--arity", type=int, default=16)
    q.add_argument("--seed", type=int, default=0, help="unused by the builder itself; logged")
    q.add_argument("--max-stages", type=int, default=12)
    q.add_argument("--glue-block", type=int, default=8)

    q = add("report", cmd_report, "re-verify a stored chain", out=False)
    q.add_argument("--chain", "--in", dest="chain", required=True)

    q = add("selftest", cmd_selftest, "run the acceptance suite", out=False)
    q.add_argument("--quick", action="store_true")
    q.add_argument("--inject", action="append", choices=sorted(faults.KNOWN))
    q.add_argument("--only", help="comma separated criterion numbers")

    q = add("pipeline", cmd_pipeline, "run a script of named steps", out=False)
    q.add_argument("script")
    q.add_argument("--out")
    return p


def main(argv=None) -> int:
    p = build_parser()
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    args.ws = Workspace(args.workspace)
    if getattr(args, "seed", None) is not None:
        log.info("seed %s", args.seed)
    try:
        rc = args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, AssertionError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
