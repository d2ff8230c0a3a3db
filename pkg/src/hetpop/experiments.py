"""Seeded Monte Carlo batches and the named experiments behind ``hetpop run``.

Every replica draws from its own ``RngStream(seed, stream_id)``; batches that
must be independent of each other use disjoint stream-id ranges. Experiment
runners return ``{filename: csv_text}`` plus summary rows and never touch the
filesystem themselves.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import moments
from .baselines import ConstantDeath, FmsConfig, RandomEnv, fms_expected_size, recurrence_stats, simulate_fms
from .distributions import CModel, RngStream, Uniform
from .point_process import (
    PowerLawBox,
    UniformBox,
    count_in_uniform_boxes,
    independence_counts,
    intensity_powerlaw_box,
    intensity_uniform_box,
    prelimit_mean_powerlaw_box,
    prelimit_mean_uniform_box,
    sample_point_set,
    truncation_tail,
)
from .population import SimConfig, simulate_forward, simulate_tilde, trajectory_csv
from .replicas import run_replicas
from .stats import GofReport, mc_mean_ci, poisson_gof, two_sample_ks_discrete

# ---------------------------------------------------------------------------
# batch helpers


def _tilde_at(model, n, checkpoints, seed, sid):
    sizes = simulate_tilde(SimConfig(n, seed=seed, stream_id=sid), model).sizes
    return sizes[checkpoints]


def _forward_final(model, n, m, seed, sid):
    return simulate_forward(SimConfig(n, m, seed=seed, stream_id=sid), model).final_size


def tilde_sizes(model: CModel, n: int, replicas: int, seed: int, *,
                checkpoints=None, workers: int = 1, first: int = 0) -> np.ndarray:
    """Sizes of the lifetime construction at ``checkpoints`` (default: ``n``), one row per replica."""
    cps = np.asarray([n] if checkpoints is None else checkpoints, dtype=np.int64)
    rows = run_replicas(partial(_tilde_at, model, n, cps, seed), replicas, workers=workers, first=first)
    out = np.vstack(rows)
    return out[:, 0] if checkpoints is None else out


def forward_final_sizes(model: CModel, n: int, replicas: int, seed: int, *,
                        initial_size: int = 1, workers: int = 1, first: int = 0) -> np.ndarray:
    f = partial(_forward_final, model, n, initial_size, seed)
    return np.asarray(run_replicas(f, replicas, workers=workers, first=first), dtype=np.int64)


def _uniform_counts(boxes, seed, sid):
    return count_in_uniform_boxes(Uniform(1.0), boxes, RngStream(seed, sid))


def uniform_box_counts(boxes, replicas: int, seed: int, *, workers: int = 1, first: int = 0) -> np.ndarray:
    """Replica-by-box array of joint counts in uniform boxes."""
    rows = run_replicas(partial(_uniform_counts, list(boxes), seed), replicas, workers=workers, first=first)
    return np.asarray(rows, dtype=np.int64)


def _powerlaw_counts(alpha, boxes, seed, sid):
    return independence_counts(alpha, boxes, RngStream(seed, sid))


def powerlaw_box_counts(alpha: float, boxes, replicas: int, seed: int, *,
                        workers: int = 1, first: int = 0) -> np.ndarray:
    rows = run_replicas(partial(_powerlaw_counts, alpha, list(boxes), seed), replicas,
                        workers=workers, first=first)
    return np.asarray(rows, dtype=np.int64)


def _accumulation_row(model, K, b, seed, sid):
    ps = sample_point_set(model, K, RngStream(seed, sid))
    above = ps.count_above(b, min_index=1)
    return above, len(ps) - 1 - above


def accumulation_counts(model: CModel, K: int, b: float, replicas: int, seed: int, *,
                        workers: int = 1, first: int = 0) -> np.ndarray:
    """Per replica: points with index >= 1 above ``b`` and at or below ``b``."""
    rows = run_replicas(partial(_accumulation_row, model, K, b, seed), replicas,
                        workers=workers, first=first)
    return np.asarray(rows, dtype=np.int64)


def _fms_row(mode, n, level, seed, sid):
    traj = simulate_fms(FmsConfig(mode, n, seed=seed, stream_id=sid))
    st = recurrence_stats(traj, level)
    return traj.final_size, st.visits, st.max_size, st.time_avg


def fms_batch(mode, n: int, level: int, replicas: int, seed: int, *,
              workers: int = 1, first: int = 0) -> np.ndarray:
    """Per replica: final size, visits to level, max size, time average."""
    rows = run_replicas(partial(_fms_row, mode, n, level, seed), replicas, workers=workers, first=first)
    return np.asarray(rows, dtype=float)


# ---------------------------------------------------------------------------
# summary


@dataclass(frozen=True)
class SummaryRow:
    metric: str
    value: float
    expected: float
    tolerance: float
    passed: bool


SUMMARY_HEADER = "metric,value,expected,tolerance,pass"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def emit_summary(results) -> str:
    """One CSV row per metric; header only for an empty result set."""
    buf = io.StringIO()
    buf.write(SUMMARY_HEADER + "\n")
    for r in results:
        buf.write(",".join([r.metric, _fmt(r.value), _fmt(r.expected), _fmt(r.tolerance), _fmt(r.passed)]) + "\n")
    return buf.getvalue()


def _within(metric, value, expected, tol):
    return SummaryRow(metric, value, expected, tol, bool(abs(value - expected) <= tol))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# named experiments; each takes a validated config dict and a worker count


def run_growth(cfg, workers=1):
    a, n, seed = cfg["a"], cfg["horizon"], cfg["seed"]
    model = Uniform(a)
    files, summary = {}, []
    for i, m in enumerate(cfg["initial_sizes"]):
        traj = simulate_forward(SimConfig(n, m, seed=seed, stream_id=i), model)
        files[f"trajectory_m{m}.csv"] = trajectory_csv(traj.sizes)
    checkpoints = cfg.get("checkpoints") or [n]
    checkpoints = [int(c) for c in checkpoints]
    reps = cfg["replicas"]
    table = tilde_sizes(model, max(checkpoints), reps, seed, checkpoints=checkpoints,
                        workers=workers, first=len(cfg["initial_sizes"]))
    rows = []
    for j, t in enumerate(checkpoints):
        ci = mc_mean_ci(table[:, j])
        exact = moments.expected_size(t, model)
        rows.append((t, ci.mean, ci.stderr, exact))
        summary.append(_within(f"mean_size_n{t}", ci.mean, exact, 3 * ci.stderr))
    files["growth_means.csv"] = _csv("n,mc_mean,stderr,expected", rows)
    return files, summary


def run_compare(cfg, workers=1):
    n, seed = cfg["horizon"], cfg["seed"]
    c, a = cfg["c"], cfg["a"]
    const = simulate_fms(FmsConfig(ConstantDeath(c), n, seed=seed, stream_id=0))
    renv = simulate_fms(FmsConfig(RandomEnv(Uniform(a)), n, seed=seed, stream_id=1))
    het = simulate_forward(SimConfig(n, seed=seed, stream_id=2), Uniform(a))
    files = {
        "trajectory_constant.csv": const.to_csv(),
        "trajectory_random_env.csv": renv.to_csv(),
        "trajectory_heterogeneous.csv": het.to_csv(),
    }
    avg_c = float(np.mean(const.sizes))
    avg_r = float(np.mean(renv.sizes))
    summary = [
        _within("constant_time_avg", avg_c, 1.0 / c, 0.25 / c),
        SummaryRow("random_env_time_avg", avg_r, 10 * avg_c, 10 * avg_c, avg_r < 10 * avg_c),
        _within("heterogeneous_final_size", het.final_size, moments.expected_size(n, Uniform(a)),
                4 * math.sqrt(moments.variance_size(n, Uniform(a)))),
    ]
    return files, summary


def run_dist_eq(cfg, workers=1):
    a, n, seed, reps = cfg["a"], cfg["horizon"], cfg["seed"], cfg["replicas"]
    model = Uniform(a)
    fwd = forward_final_sizes(model, n, reps, seed, workers=workers, first=0)
    tld = tilde_sizes(model, n, reps, seed, workers=workers, first=reps)
    d, p = two_sample_ks_discrete(fwd, tld, rng=RngStream(seed, 2 * reps),
                                  n_permutations=cfg.get("permutations", 1000))
    files = {"dist_eq.csv": _csv("replica,forward,tilde", zip(range(reps), fwd, tld))}
    exact = moments.expected_size(n, model)
    cf, ct = mc_mean_ci(fwd), mc_mean_ci(tld)
    summary = [
        SummaryRow("ks_distance", d, 0.0, 1.0, True),
        SummaryRow("ks_p_value", p, 1.0, 0.99, p > 0.01),
        _within("forward_mean", cf.mean, exact, 3 * cf.stderr),
        _within("tilde_mean", ct.mean, exact, 3 * ct.stderr),
    ]
    return files, summary


def run_poisson_gof(cfg, workers=1):
    seed, reps = cfg["seed"], cfg["replicas"]
    law = cfg.get("law", "uniform")
    files, summary = {}, []
    for i, L in enumerate(cfg["scales"]):
        if law == "uniform":
            box = UniformBox(cfg["w"], cfg["z"], cfg["lo"], cfg["hi"], L)
            counts = uniform_box_counts([box], reps, seed, workers=workers, first=i * reps)[:, 0]
            pre, lim = prelimit_mean_uniform_box(box), intensity_uniform_box(box)
        else:
            alpha = cfg["alpha"]
            box = PowerLawBox(cfg["location"], cfg["w"], cfg["z"], cfg["lo"], cfg["hi"], L,
                              cfg.get("beta"))
            counts = powerlaw_box_counts(alpha, [box], reps, seed, workers=workers, first=i * reps)[:, 0]
            pre, lim = prelimit_mean_powerlaw_box(alpha, box), intensity_powerlaw_box(alpha, box)
        ci = mc_mean_ci(counts)
        try:
            rep = poisson_gof(counts, ci.mean if ci.mean > 0 else lim)
        except ValueError:
            rep = GofReport(math.nan, 1, math.nan, float(np.var(counts, ddof=1) / ci.mean) if ci.mean else math.nan)
        files[f"gof_L{L}.csv"] = rep.to_csv()
        summary += [
            _within(f"mean_vs_prelimit_L{L}", ci.mean, pre, 3 * ci.stderr),
            _within(f"mean_vs_intensity_L{L}", ci.mean, lim, 0.05 * lim),
            _within(f"dispersion_L{L}", rep.dispersion_index, 1.0, 0.1),
            SummaryRow(f"gof_p_value_L{L}", rep.p_value, 1.0, 0.99, bool(rep.p_value > 0.01)),
        ]
    return files, summary


def run_accumulation(cfg, workers=1):
    seed, reps, K, b = cfg["seed"], cfg["replicas"], cfg["K"], cfg["b"]
    model = Uniform(cfg.get("a", 1.0))
    example = sample_point_set(model, K, RngStream(seed, reps))
    counts = accumulation_counts(model, K, b, reps, seed, workers=workers)
    bound = moments.tail_count_bound(model, b)
    ci = mc_mean_ci(counts[:, 0])
    files = {
        "points_example.csv": example.to_csv(),
        "accumulation.csv": _csv("replica,above_b,below_b",
                                 ((i, int(x), int(y)) for i, (x, y) in enumerate(counts))),
    }
    summary = [
        _within("mean_count_above_b", ci.mean, bound, 3 * ci.stderr),
        SummaryRow("mean_count_le_inverse_b", ci.mean, 1.0 / b, 0.0, bool(ci.mean <= 1.0 / b)),
        SummaryRow("max_count_above_b", int(counts[:, 0].max()), 1.0 / b, 0.0,
                   bool(counts[:, 0].max() <= 1.0 / b)),
        SummaryRow("truncation_tail", truncation_tail(b, K), 0.0, 1e-4, truncation_tail(b, K) < 1e-4),
    ]
    return files, summary


def run_fms(cfg, workers=1):
    seed, reps, n, level = cfg["seed"], cfg["replicas"], cfg["horizon"], cfg.get("level", 1)
    if cfg["mode"] == "constant":
        mode = ConstantDeath(cfg["c"])
    else:
        mode = RandomEnv(Uniform(cfg["a"]))
    example = simulate_fms(FmsConfig(mode, n, seed=seed, stream_id=reps))
    stats = fms_batch(mode, n, level, reps, seed, workers=workers)
    files = {
        "trajectory_fms.csv": example.to_csv(),
        "fms_stats.csv": _csv("replica,final_size,visits,max_size,time_avg",
                              ((i, int(r[0]), int(r[1]), int(r[2]), float(r[3])) for i, r in enumerate(stats))),
    }
    ci = mc_mean_ci(stats[:, 0])
    mean_c = cfg["c"] if cfg["mode"] == "constant" else cfg["a"] / 2.0
    expected = fms_expected_size(mean_c, n)
    summary = [
        _within("mean_final_size", ci.mean, expected, 3 * ci.stderr),
        _within("mean_time_avg", float(stats[:, 3].mean()), 1.0 / mean_c, 0.25 / mean_c),
    ]
    return files, summary


EXPERIMENTS = {
    "growth": run_growth,
    "compare": run_compare,
    "dist-eq": run_dist_eq,
    "poisson-gof": run_poisson_gof,
    "accumulation": run_accumulation,
    "fms": run_fms,
}


def run_experiment(cfg: dict, workers: int = 1) -> dict:
    """Run a validated config; returns ``{filename: text}`` including ``summary.csv``."""
    files, summary = EXPERIMENTS[cfg["experiment"]](cfg, workers)
    files["summary.csv"] = emit_summary(summary)
    return files
