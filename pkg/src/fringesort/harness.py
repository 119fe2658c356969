"""Seeded Monte-Carlo and exhaustive experiments producing JSON/CSV reports.

Trial ``i`` draws its input from the stream ``trial_seed(seed, i)``, so results
do not depend on execution order or on the number of worker processes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import analysis, kernels
from .core import (
    BudgetError,
    InputSequence,
    Profile,
    SampleParams,
    UniverseDistribution,
    ValidationError,
    normalize_distribution,
    uniform,
)
from .fringe_tree import FringeTree, build_until_saturated, shape_digest
from .inputgen import (
    DegeneracyParams,
    SplitMix64,
    cumulative,
    is_profile_degenerate,
    load_weights,
    sample_iid_array,
    shuffle_multiset,
    trial_seed,
)
from .quicksort import quicksort_k

SCHEMA_VERSION = "fringesort-report/1"
EXPERIMENTS = ("equiv", "cost", "height", "degeneracy", "exact", "bounds")
CSV_COLUMNS = (
    "trial", "n", "k", "u", "partition_cmps", "median_cmps",
    "insertionsort_cmps", "steps", "tree_height", "seed",
)
DEFAULT_EPS_GRID = (0.01, 0.02, 0.05, 0.1)


def parse_distribution(spec: str) -> UniverseDistribution:
    """``uniform:u``, ``two:p`` (= (p, 1-p)) or ``weights:path``."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "uniform":
            return uniform(int(arg))
        if kind == "two":
            p = float(arg)
            if not 0.0 < p < 1.0:
                raise ValidationError("two:p needs p in (0, 1)")
            return normalize_distribution([p, 1.0 - p])
        if kind == "weights":
            return load_weights(arg)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad distribution spec {spec!r}: {exc}") from exc
    raise ValidationError(f"unknown distribution spec {spec!r}")


@dataclass
class ExperimentConfig:
    experiment: str
    dist: Optional[str] = None
    u: Optional[int] = None
    n: int = 1000
    k: int = 1
    trials: int = 100
    seed: int = 0
    nu: float = 0.8
    workers: int = 1
    cost_rel_tol: float = 0.02
    identity_tol: float = 1e-10
    dp_closed_form_tol: float = 1e-9
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID
    height_factor: float = 13.0
    output_format: str = "json"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"experiment must be one of {EXPERIMENTS}")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        if self.output_format not in ("json", "csv"):
            raise ValidationError("output format must be json or csv")
        SampleParams(self.k)
        self.eps_grid = tuple(float(e) for e in self.eps_grid)

    def distribution(self) -> UniverseDistribution:
        if self.dist:
            return parse_distribution(self.dist)
        if self.u:
            return uniform(self.u)
        if self.experiment == "height":
            return uniform(self.n)
        raise ValidationError("either dist or u is required")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("workers")  # execution detail; reports must not depend on it
        d["eps_grid"] = list(self.eps_grid)
        return d


@dataclass
class ExperimentReport:
    config: dict
    statistics: dict = field(default_factory=dict)
    analytic: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    trials: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def add_verdict(self, name, passed, observed=None, expected=None, tolerance=None, detail=None):
        v = {"name": name, "passed": bool(passed), "observed": observed,
             "expected": expected, "tolerance": tolerance}
        if detail is not None:
            v["detail"] = detail
        self.verdicts.append(v)

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "statistics": self.statistics,
            "analytic": self.analytic,
            "verdicts": self.verdicts,
            "passed": self.passed,
            "trials": self.trials,
        }

    def to_json(self) -> str:
        return json.dumps(_clean(self.as_dict()), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in self.trials:
            w.writerow({c: row.get(c, "") for c in CSV_COLUMNS})
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        d = json.loads(text)
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValidationError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(d["config"], d["statistics"], d["analytic"], d["verdicts"], d.get("trials", []))


def _clean(obj):
    """Fixed-precision floats and JSON-safe scalars, recursively."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.12g}")
    return obj


def summarize(values: Sequence[float]) -> dict:
    """Mean, standard error (sample sd / sqrt(m)), min and max."""
    xs = [float(v) for v in values]
    m = len(xs)
    mean = math.fsum(xs) / m
    if m > 1:
        var = math.fsum((x - mean) ** 2 for x in xs) / (m - 1)
        se = math.sqrt(var / m)
    else:
        se = 0.0
    return {"mean": mean, "stderr": se, "min": min(xs), "max": max(xs)}


def _run_trials(fn: Callable, ctx: tuple, trials: int, workers: int) -> list:
    """``fn(ctx, i)`` for every trial index, results in index order."""
    job = partial(fn, ctx)
    if workers > 1 and trials > 1:
        chunk = max(1, trials // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, range(trials), chunksize=chunk))
    return [job(i) for i in range(trials)]


# --- per-trial workers (module level so they pickle) --------------------------


def _cost_trial(ctx, i):
    seed, cdf, n, k = ctx
    s = trial_seed(seed, i)
    vals = sample_iid_array(None, n, SplitMix64(s), cdf=cdf)
    part, med, isort, steps, h = kernels.quicksort_counts(vals, k)
    return {"trial": i, "n": n, "k": k, "u": len(cdf), "partition_cmps": part, "median_cmps": med,
            "insertionsort_cmps": isort, "steps": steps, "tree_height": h, "seed": s}


def _height_trial(ctx, i):
    seed, cdf, n, k = ctx
    s = trial_seed(seed, i)
    vals = sample_iid_array(None, n, SplitMix64(s), cdf=cdf)
    part, med, inner, h = kernels.fringe_counts(vals, k)
    return {"trial": i, "n": n, "k": k, "u": len(cdf), "partition_cmps": part, "median_cmps": med,
            "insertionsort_cmps": 0, "steps": inner, "tree_height": h, "seed": s}


def equivalence_check(seq, params: SampleParams) -> dict:
    """Sort and fringe-insert the same input; compare shapes and event multisets."""
    out = quicksort_k(seq, params)
    tree = FringeTree.build(seq, params)
    qs_digest = shape_digest(out.tree)
    fb_digest = tree.digest()
    return {
        "shape_match": qs_digest == fb_digest,
        "events_match": out.ledger.event_multiset() == tree.ledger.event_multiset(),
        "ledger": out.ledger,
        "tree_height": tree.height(),
        "digest": qs_digest,
    }


def _equiv_trial(ctx, i):
    seed, cdf, n, k = ctx
    s = trial_seed(seed, i)
    vals = sample_iid_array(None, n, SplitMix64(s), cdf=cdf).tolist()
    res = equivalence_check(InputSequence(tuple(vals)), SampleParams(k))
    led = res["ledger"]
    row = {"trial": i, "n": n, "k": k, "u": len(cdf), "tree_height": res["tree_height"], "seed": s,
           "shape_match": res["shape_match"], "events_match": res["events_match"]}
    row.update(led.as_dict())
    if not (res["shape_match"] and res["events_match"]):
        row["input"] = vals
    return row


def _degeneracy_trial(ctx, i):
    seed, cdf, n, k, nu = ctx
    s = trial_seed(seed, i)
    params = DegeneracyParams(nu, k, n)
    vals = sample_iid_array(None, params.n_T, SplitMix64(s), cdf=cdf)
    return {"trial": i, "n": n, "k": k, "u": len(cdf), "seed": s,
            "degenerate": is_profile_degenerate(vals, params, len(cdf))}


def _context(config: ExperimentConfig, q: UniverseDistribution, *extra) -> tuple:
    return (config.seed, cumulative(q), config.n, config.k, *extra)


def saturated_search_costs(q: UniverseDistribution, params: SampleParams, trials: int, seed: int) -> list:
    """``Gamma . q`` for ``trials`` independently grown saturated trees."""
    w = q.weights
    out = []
    for i in range(trials):
        tree, _ = build_until_saturated(q, params, SplitMix64(trial_seed(seed, i)))
        out.append(math.fsum(g * x for g, x in zip(tree.node_depths(q.u), w)))
    return out


# --- experiments -------------------------------------------------------------


def run_equivalence(config: ExperimentConfig) -> ExperimentReport:
    q = config.distribution()
    rows = _run_trials(_equiv_trial, _context(config, q), config.trials, config.workers)
    rep = ExperimentReport(config.echo(), trials=rows)
    matches = sum(1 for r in rows if r["shape_match"] and r["events_match"])
    rep.statistics = {"trials": len(rows), "matches": matches, "match_rate": matches / len(rows)}
    bad = [r for r in rows if not (r["shape_match"] and r["events_match"])]
    detail = None
    if bad:
        detail = {"trial": bad[0]["trial"], "seed": bad[0]["seed"], "input": bad[0].get("input")}
    rep.add_verdict("equivalence", not bad, observed=matches, expected=len(rows), tolerance=0, detail=detail)
    return rep


def _ledger_stats(rows) -> dict:
    stats = {}
    for key in ("partition_cmps", "median_cmps", "insertionsort_cmps", "steps", "tree_height"):
        stats[key] = summarize([r[key] for r in rows])
    stats["total_cmps"] = summarize(
        [r["partition_cmps"] + r["median_cmps"] + r["insertionsort_cmps"] for r in rows])
    return stats


def run_cost(config: ExperimentConfig) -> ExperimentReport:
    q = config.distribution()
    params = SampleParams(config.k)
    n = config.n
    rows = _run_trials(_cost_trial, _context(config, q), config.trials, config.workers)
    rep = ExperimentReport(config.echo(), trials=rows)
    stats = _ledger_stats(rows)
    per_n = summarize([r["partition_cmps"] / n for r in rows])
    stats["partition_cmps_per_n"] = per_n
    rep.statistics = stats
    dp = analysis.expected_search_cost_dp(q, params)
    h_ld = analysis.entropy(q, 2)
    lb = analysis.sorting_lower_bound(q, n)
    a_k = analysis.alpha_k(config.k)
    rep.analytic = {
        "expected_search_cost_dp": dp,
        "entropy_ld": h_ld,
        "entropy_ln": analysis.entropy_ln(q),
        "alpha_k": a_k,
        "alpha_k_times_entropy_ld": a_k * h_ld,
        "lower_bound": lb,
        "lower_bound_per_n": lb / n,
        "median_cost_bound_per_step": params.k * (params.k - 1) // 2,
    }
    if config.k == 1:
        rep.analytic["allen_munro_cost"] = analysis.allen_munro_cost(q)
    dev = abs(per_n["mean"] - dp)
    rep.add_verdict("dp_closeness", dev <= config.cost_rel_tol * dp,
                    observed=per_n["mean"], expected=dp, tolerance=config.cost_rel_tol * dp)
    total_mean = stats["total_cmps"]["mean"]
    rep.add_verdict("lower_bound", total_mean >= lb, observed=total_mean, expected=lb, tolerance=0)
    return rep


def run_height(config: ExperimentConfig) -> ExperimentReport:
    q = config.distribution()
    n = config.n
    rows = _run_trials(_height_trial, _context(config, q), config.trials, config.workers)
    rep = ExperimentReport(config.echo(), trials=rows)
    limit = config.height_factor * math.log(n)
    heights = [r["tree_height"] for r in rows]
    exceed = sum(1 for h in heights if h > limit)
    rep.statistics = {"tree_height": summarize(heights), "max_height": max(heights),
                      "exceeding": exceed}
    rep.analytic = {"height_limit": limit}
    rep.add_verdict("height", exceed == 0, observed=exceed, expected=0, tolerance=0)
    return rep


def run_degeneracy(config: ExperimentConfig) -> ExperimentReport:
    q = config.distribution()
    params = DegeneracyParams(config.nu, config.k, config.n)
    rows = _run_trials(_degeneracy_trial, _context(config, q, config.nu), config.trials, config.workers)
    rep = ExperimentReport(config.echo(), trials=rows)
    hits = sum(1 for r in rows if r["degenerate"])
    freq = hits / len(rows)
    tails = [analysis.binomial_lower_tail(params.n_T, qv, config.k) for qv in q.weights]
    union = min(1.0, math.fsum(tails))
    rep.statistics = {"trials": len(rows), "degenerate": hits, "frequency": freq}
    rep.analytic = {"n_T": params.n_T, "per_value_tail": tails, "union_bound": union,
                    "pigeonhole": params.n_T < config.k * q.u}
    slack = 5.0 * math.sqrt(union * (1.0 - union) / len(rows)) + 1.0 / len(rows)
    rep.add_verdict("union_bound", freq <= union + slack, observed=freq, expected=union, tolerance=slack)
    return rep


def profiles_up_to(n_max: int, u_max: int):
    """Profiles with all counts >= 1, u <= u_max, total <= n_max."""
    for u in range(1, u_max + 1):
        for n in range(u, n_max + 1):
            for cuts in _compositions(n, u):
                yield Profile(cuts)


def _compositions(n, parts):
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def run_exact(config: ExperimentConfig) -> ExperimentReport:
    u_max = config.u or 4
    n_max = config.n
    if n_max > analysis.BRUTE_FORCE_MAX_N or u_max > analysis.BRUTE_FORCE_MAX_U:
        raise BudgetError("exact experiment limited to n <= 9, u <= 4")
    rep = ExperimentReport(config.echo())
    params = SampleParams(1)
    mismatches, mc_fail, rows = [], [], []
    for idx, x in enumerate(profiles_up_to(n_max, u_max)):
        brute = analysis.brute_force_expected_cost(x, params, "sedgewick")
        closed = analysis.sedgewick_exact_multiset(x, exact=True)
        samples = []
        for j in range(config.trials):
            seq = shuffle_multiset(x, SplitMix64(trial_seed(trial_seed(config.seed, idx), j)))
            part, _, _, steps, _ = kernels.quicksort_counts(seq.values, 1)
            samples.append(part - steps)
        mc = summarize(samples)
        ok_mc = abs(mc["mean"] - float(brute)) <= 5.0 * mc["stderr"] + 1e-12
        row = {"profile": list(x.counts), "brute_force": brute, "closed_form": closed,
               "monte_carlo_mean": mc["mean"], "monte_carlo_stderr": mc["stderr"]}
        rows.append(row)
        if brute != closed:
            mismatches.append(row)
        if not ok_mc:
            mc_fail.append(row)
    rep.trials = rows
    rep.statistics = {"profiles": len(rows), "exact_mismatches": len(mismatches),
                      "monte_carlo_outliers": len(mc_fail)}
    rep.add_verdict("exact_equality", not mismatches, observed=len(mismatches), expected=0, tolerance=0)
    rep.add_verdict("monte_carlo", not mc_fail, observed=len(mc_fail), expected=0, tolerance="5 stderr")
    return rep


def run_bounds(config: ExperimentConfig) -> ExperimentReport:
    q = config.distribution()
    params = SampleParams(config.k)
    dp = analysis.expected_search_cost_dp(q, params)
    h_ln = analysis.entropy_ln(q)
    rep = ExperimentReport(config.echo())
    checks, violations = [], 0
    for eps in config.eps_grid:
        for kind in ("upper", "lower"):
            try:
                bc = analysis.bound_constants(kind, params, eps)
            except ValidationError:
                continue
            entry = {"kind": kind, "eps": eps, "c": bc.c, "d": bc.d, "valid": bc.valid}
            if bc.valid:
                bound = bc.evaluate(h_ln)
                ok = dp <= bound if kind == "upper" else dp >= bound
                entry.update(bound=bound, holds=ok)
                violations += not ok
            checks.append(entry)
    rep.analytic = {"expected_search_cost_dp": dp, "entropy_ln": h_ln, "constants": checks}
    rep.statistics = {"checked": sum(1 for c in checks if c["valid"]), "violations": violations}
    rep.add_verdict("bound_sandwich", violations == 0, observed=violations, expected=0, tolerance=0)
    return rep


RUNNERS = {
    "equiv": run_equivalence,
    "cost": run_cost,
    "height": run_height,
    "degeneracy": run_degeneracy,
    "exact": run_exact,
    "bounds": run_bounds,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[config.experiment](config)


def render_report(report: ExperimentReport) -> str:
    """Human-readable summary of a stored report."""
    cfg = report.config
    lines = [f"experiment: {cfg.get('experiment')}  k={cfg.get('k')}  n={cfg.get('n')}  "
             f"trials={cfg.get('trials')}  seed={cfg.get('seed')}"]
    for key, val in report.statistics.items():
        if isinstance(val, dict):
            inner = "  ".join(f"{k}={_fmt(v)}" for k, v in val.items())
            lines.append(f"  {key}: {inner}")
        else:
            lines.append(f"  {key}: {_fmt(val)}")
    for key, val in report.analytic.items():
        if not isinstance(val, (list, dict)):
            lines.append(f"  {key}: {_fmt(val)}")
    for v in report.verdicts:
        mark = "PASS" if v["passed"] else "FAIL"
        lines.append(f"[{mark}] {v['name']}: observed={_fmt(v['observed'])} "
                     f"expected={_fmt(v['expected'])} tol={_fmt(v['tolerance'])}")
    return "\n".join(lines) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)
