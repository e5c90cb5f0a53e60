"""Randomized exact checking of the diagram registry.

Every check compares two composites of the same diagram degreewise as
matrices over F_p -- exact equality is the only comparison, there are no
tolerances anywhere.  A trial is fully determined by (diagram id, seed,
trial index, params): generators draw from a Random seeded with that
triple, so failures replay bit-identically from the serialized report.

Instance sizes: the global flags (--p, --max-dim, --max-len, --trials)
bound the generators, but diagrams whose composites nest hom inside
tensor inside pushforward clamp their draws harder (the intermediate
objects grow like |A|^3 |K|^4), so that a full run stays fast.  The clamp
factors live with each diagram spec, not in user configuration.
"""

from __future__ import annotations

import json
import os
import time
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

from .complexes import ChainMap, ChainMapError, Complex
from .flinalg import Matrix
from .monoidal import StructuralContext
from .signs import default_assignment, flipped
from .sites import AssumptionError, CommSquare, FiniteMap, SheafComplex, SheafMap

SCHEMA = "monodual-report/1"


@dataclass(frozen=True)
class Params:
    p: int = 3
    max_dim: int = 3
    max_len: int = 3
    trials: int = 25
    a: int = 1
    b: int = 1
    flips: tuple = ()

    def context(self) -> StructuralContext:
        signs = default_assignment(self.a, self.b)
        if self.flips:
            signs = flipped(signs, *self.flips)
        return StructuralContext(p=self.p, signs=signs)

    def to_json(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_json(obj) -> "Params":
        obj = dict(obj)
        obj["flips"] = tuple(obj.get("flips", ()))
        return Params(**obj)


@dataclass(frozen=True)
class Sizes:
    """Per-diagram draw budgets derived from the global params."""

    params: Params

    @property
    def p(self):
        return self.params.p

    def plain(self, rng):
        from .complexes import random_complex

        return random_complex(rng.randrange(10**9), self.params.max_len,
                              self.params.max_dim, self.p)

    def mid(self, rng):
        from .complexes import random_complex

        return random_complex(rng.randrange(10**9), min(self.params.max_len, 2),
                              min(self.params.max_dim, 2), self.p)

    def tiny(self, rng):
        from .complexes import random_complex

        return random_complex(rng.randrange(10**9), min(self.params.max_len, 2),
                              min(self.params.max_dim, 1), self.p)

    def stalk_sheaf(self, rng, base):
        from .complexes import random_complex

        return SheafComplex.make(
            base, [random_complex(rng.randrange(10**9), 2, 1, self.p) for _ in base]
        )

    def small_map(self, rng, max_size=None, tag=""):
        from .sites import random_finite_map

        return random_finite_map(rng, max_size or min(3, self.params.max_dim), tag)


@dataclass(frozen=True)
class DiagramSpec:
    """One registry row: a stable id, an instance generator, and an
    evaluator returning either a (lhs, rhs) pair or a boolean verdict."""

    id: str
    note: str
    generate: object         # (rng, Sizes) -> instance dict
    evaluate: object         # (ctx, instance) -> (lhs, rhs) | bool
    trials_cap: int = 0      # 0: use params.trials


@dataclass
class TrialResult:
    trial: int
    ok: bool
    detail: str = ""
    instance_json: dict | None = None


@dataclass
class CheckReport:
    id: str
    seed: int
    params: Params
    verdict: str = "PASS"
    trials_run: int = 0
    time_ms: float = 0.0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "check",
            "id": self.id,
            "seed": self.seed,
            "params": self.params.to_json(),
            "verdict": self.verdict,
            "trials": self.trials_run,
            "time_ms": round(self.time_ms, 3),
            "failures": [
                {"trial": f.trial, "detail": f.detail, "instance": f.instance_json}
                for f in self.failures
            ],
        }


# ---------------------------------------------------------------------------
# instance (de)serialization, for replayable counterexamples

def serialize_obj(x):
    if isinstance(x, Complex):
        return {"__complex__": x.to_json()}
    if isinstance(x, ChainMap):
        return {"__chainmap__": x.to_json()}
    if isinstance(x, SheafComplex):
        return {"__sheaf__": x.to_json()}
    if isinstance(x, SheafMap):
        return {"__sheafmap__": x.to_json()}
    if isinstance(x, FiniteMap):
        return {"__finitemap__": x.to_json()}
    if isinstance(x, CommSquare):
        return {"__square__": {k: getattr(x, k).to_json() for k in ("f", "g", "fbar", "gbar")}}
    if isinstance(x, Matrix):
        return {"__matrix__": {**x.to_json(), "p": x.p}}
    if isinstance(x, dict):
        return {"__dict__": {k: serialize_obj(v) for k, v in x.items()}}
    if isinstance(x, (list, tuple)):
        return {"__list__": [serialize_obj(v) for v in x]}
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    raise TypeError(f"cannot serialize {type(x).__name__}")


def deserialize_obj(x):
    if isinstance(x, dict):
        if "__complex__" in x:
            return Complex.from_json(x["__complex__"])
        if "__chainmap__" in x:
            return ChainMap.from_json(x["__chainmap__"])
        if "__sheaf__" in x:
            return SheafComplex.from_json(x["__sheaf__"])
        if "__finitemap__" in x:
            return FiniteMap.from_json(x["__finitemap__"])
        if "__square__" in x:
            d = x["__square__"]
            return CommSquare(**{k: FiniteMap.from_json(d[k]) for k in ("f", "g", "fbar", "gbar")})
        if "__matrix__" in x:
            d = x["__matrix__"]
            return Matrix.from_json(d, d["p"])
        if "__dict__" in x:
            return {k: deserialize_obj(v) for k, v in x["__dict__"].items()}
        if "__list__" in x:
            return [deserialize_obj(v) for v in x["__list__"]]
    return x


def serialize_instance(inst: dict) -> dict:
    return {k: serialize_obj(v) for k, v in inst.items()}


def deserialize_instance(obj: dict) -> dict:
    return {k: deserialize_obj(v) for k, v in obj.items()}


# ---------------------------------------------------------------------------
# runner

_CATCH = (ChainMapError, AssumptionError, ValueError, KeyError)


def _trial_rng(diagram_id: str, seed: int, trial: int) -> random.Random:
    return random.Random(f"{diagram_id}/{seed}/{trial}")


def run_trial(spec: DiagramSpec, ctx, rng, record_instance=True) -> TrialResult:
    inst = None
    try:
        inst = spec.generate(rng, Sizes(_params_of(ctx)))
        out = spec.evaluate(ctx, inst)
        ok = out if isinstance(out, bool) else (out[0] == out[1])
        detail = "" if ok else "composites differ"
    except _CATCH as e:
        ok = False
        detail = f"{type(e).__name__}: {e}"
    res = TrialResult(0, ok, detail)
    if not ok and record_instance and inst is not None:
        try:
            res.instance_json = serialize_instance(inst)
        except TypeError:
            res.instance_json = None
    return res


_CTX_PARAMS: dict = {}


def _params_of(ctx) -> Params:
    return _CTX_PARAMS.get(id(ctx), Params(p=ctx.p))


def run_diagram(spec: DiagramSpec, seed: int, params: Params) -> CheckReport:
    ctx = params.context()
    _CTX_PARAMS[id(ctx)] = params
    t0 = time.perf_counter()
    trials = params.trials if spec.trials_cap == 0 else min(params.trials, spec.trials_cap)
    rep = CheckReport(spec.id, seed, params)
    if trials == 0:
        rep.verdict = "PASS (no trials)"
    for t in range(trials):
        rng = _trial_rng(spec.id, seed, t)
        res = run_trial(spec, ctx, rng)
        res.trial = t
        rep.trials_run += 1
        if not res.ok:
            rep.failures.append(res)
            rep.verdict = "FAIL"
            break
    rep.time_ms = (time.perf_counter() - t0) * 1000
    _CTX_PARAMS.pop(id(ctx), None)
    return rep


def run_all(registry: dict, seed: int, params: Params, ids=None, workers=None) -> dict:
    chosen = sorted(ids if ids is not None else registry.keys())
    missing = [i for i in chosen if i not in registry]
    if missing:
        raise KeyError(f"unknown diagram ids: {missing}")
    if workers is None:
        workers = int(os.environ.get("MONODUAL_WORKERS", "1"))
    t0 = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda i: run_diagram(registry[i], seed, params), chosen))
    else:
        reports = [run_diagram(registry[i], seed, params) for i in chosen]
    reports = {r.id: r for r in reports}
    summary = {
        "schema": SCHEMA,
        "kind": "check-all",
        "seed": seed,
        "params": params.to_json(),
        "total": len(chosen),
        "failed": sorted(i for i in chosen if reports[i].verdict == "FAIL"),
        "time_ms": round((time.perf_counter() - t0) * 1000, 3),
        "reports": [reports[i].to_json() for i in chosen],
    }
    return summary


def replay(report_json: dict, registry: dict) -> dict:
    """Re-run the failing trials of a serialized check report; the rebuilt
    instances must reproduce the recorded verdicts."""
    if report_json.get("kind") == "check-all":
        inner = [r for r in report_json["reports"] if r["verdict"] == "FAIL"]
        return {
            "schema": SCHEMA,
            "kind": "replay",
            "results": [replay(r, registry) for r in inner],
        }
    spec = registry[report_json["id"]]
    params = Params.from_json(report_json["params"])
    ctx = params.context()
    _CTX_PARAMS[id(ctx)] = params
    outcomes = []
    for f in report_json.get("failures", []):
        if f.get("instance") is None:
            # regenerate from the recorded (id, seed, trial) triple
            rng = _trial_rng(report_json["id"], report_json["seed"], f["trial"])
            res = run_trial(spec, ctx, rng, record_instance=False)
        else:
            inst = deserialize_instance(f["instance"])
            try:
                out = spec.evaluate(ctx, inst)
                ok = out if isinstance(out, bool) else (out[0] == out[1])
                res = TrialResult(f["trial"], ok)
            except _CATCH as e:
                res = TrialResult(f["trial"], False, f"{type(e).__name__}: {e}")
        outcomes.append({"trial": f["trial"], "reproduced_failure": not res.ok})
    _CTX_PARAMS.pop(id(ctx), None)
    return {
        "schema": SCHEMA,
        "kind": "replay",
        "id": report_json["id"],
        "outcomes": outcomes,
        "all_reproduced": all(o["reproduced_failure"] for o in outcomes),
    }


# ---------------------------------------------------------------------------
# mutation sensitivity

MUTATION_TARGETS = [
    "Table2.row{}".format(k) for k in range(1, 23)
] + [
    "D4", "D5", "D6", "D7", "D8", "D9", "D10", "D11",
    "EQ1", "ADJ.tensorhom", "coh.pentagon", "coh.hexagon", "coh.sym2",
    "coh.tp_anticomm", "coh.th_anticomm", "W.dd_kron",
]


def mutation_study(registry: dict, seed: int, params: Params, symbols=None) -> dict:
    """Flip each sign symbol's global sign in turn; record which checks
    catch the corruption.  Each corruption must be caught by at least one
    sign-table row or registry diagram."""
    from .signs import SYMBOLS

    symbols = list(symbols or SYMBOLS)
    rows = []
    for sym in symbols:
        mutated = Params(**{**params.to_json(), "flips": (sym,), "trials": min(params.trials, 8)})
        caught_by = None
        failing_report = None
        for target in MUTATION_TARGETS:
            rep = run_diagram(registry[target], seed, mutated)
            if rep.verdict == "FAIL":
                caught_by = target
                failing_report = rep.to_json()
                break
        rows.append({
            "symbol": sym,
            "caught": caught_by is not None,
            "caught_by": caught_by,
            "report": failing_report,
        })
    return {
        "schema": SCHEMA,
        "kind": "mutation",
        "seed": seed,
        "params": params.to_json(),
        "rows": rows,
        "all_caught": all(r["caught"] for r in rows),
    }


def write_json(path: str, obj: dict):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
