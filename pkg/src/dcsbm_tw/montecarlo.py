"""Monte Carlo experiments: null calibration, edge fluctuations, bulk
spectrum, ROC curves and plug-in concentration.

Every trial draws its randomness from seeds derived from
``(master seed, stream, n, trial index)``, and results are reduced in
trial order, so outputs do not depend on the number of worker processes.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .hypothesis import statistic, threshold
from .model import (
    edge_probabilities,
    generate_alternative_experiment,
    generate_null_experiment,
    sample_adjacency,
)
from .rng import derive_seed
from .spectra import (
    EsdHistogram,
    esd,
    extreme_eigenvalues,
    ks_distance_to_semicircle,
    semicircle_pdf,
    symmetric_eigenvalues,
)
from .tracy_widom import default_table
from .transform import estimated_transform, oracle_transform, scale

KINDS = ("null_calibration", "tw_histogram", "semicircle", "roc", "concentration")

NULL_STREAM = 0
ALT_STREAM = 1
CONCENTRATION_PARAMS_STREAM = 2
CONCENTRATION_PAIRS_STREAM = 3
CONCENTRATION_SAMPLE_STREAM = 4

DEFAULT_TRIALS = {
    "null_calibration": 500,
    "tw_histogram": 2000,
    "semicircle": 1,
    "roc": 200,
    "concentration": 40,
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: tuple
    trials: int
    seed: int = 0
    alphas: tuple = (0.01, 0.05, 0.1)
    clamp_floor: Optional[float] = None
    bins: int = 60
    t_grid: tuple = (0.5, 1.0, 2.0)
    pairs: int = 100
    variant: str = "estimated"
    threads: int = 1

    def __post_init__(self):
        n = (self.n,) if isinstance(self.n, int) else tuple(int(v) for v in self.n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not n or min(n) < 6:
            raise ValueError("every n must be at least 6")
        if self.kind == "roc" and any(v % 3 for v in n):
            raise ValueError("roc experiments need n divisible by 3")
        if any(not 0 < a < 1 for a in self.alphas):
            raise ValueError("alphas must lie in (0, 1)")
        if self.variant not in ("estimated", "oracle"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def echo(self) -> dict:
        """Config fields that determine the results (``threads`` excluded)."""
        return {
            "kind": self.kind, "n": list(self.n), "trials": self.trials,
            "seed": self.seed, "alphas": list(self.alphas),
            "clamp_floor": self.clamp_floor, "bins": self.bins,
            "t_grid": list(self.t_grid), "pairs": self.pairs, "variant": self.variant,
        }


def trial_seed(master: int, stream: int, n: int, trial: int) -> int:
    return derive_seed(master, stream, n, trial)


def _sample_seed(seed: int) -> int:
    return derive_seed(seed, 0xA5)


def _map_trials(fn, args: Sequence, threads: int) -> list:
    if threads <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * threads))))


def _edge_trial(args):
    """``(lambda1, lambdan)`` of the scaled transform of one sampled graph."""
    n, seed, alternative, clamp_floor, variant = args
    gen = generate_alternative_experiment if alternative else generate_null_experiment
    params = gen(n, seed)
    A = sample_adjacency(params, _sample_seed(seed))
    if variant == "oracle":
        B = oracle_transform(A, params)
    else:
        B = estimated_transform(A, clamp_floor)
    return extreme_eigenvalues(scale(B).entries)


def edge_samples(config: ExperimentConfig, n: int, alternative: bool = False) -> np.ndarray:
    """``trials x 2`` array of extreme eigenvalues for one ``n``."""
    stream = ALT_STREAM if alternative else NULL_STREAM
    args = [
        (n, trial_seed(config.seed, stream, n, t), alternative, config.clamp_floor, config.variant)
        for t in range(config.trials)
    ]
    return np.array(_map_trials(_edge_trial, args, config.threads))


def _statistics(edges: np.ndarray, n: int) -> np.ndarray:
    return np.array([statistic(l1, ln, n) for l1, ln in edges])


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, EsdHistogram):
        return {"edges": _clean(obj.edges), "counts": _clean(obj.counts), "n": obj.n}
    if isinstance(obj, RocCurve):
        return {"n": obj.n, "trials": obj.trials, "auc": obj.auc}
    return obj


@dataclass
class ExperimentResult:
    """Aggregate metrics plus CSV tables, ready to be written to disk."""

    config: ExperimentConfig
    metrics: dict
    tables: dict = field(default_factory=dict)

    def summary_json(self) -> str:
        doc = {"config": self.config.echo(), "metrics": _clean(self.metrics)}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, out_dir) -> list:
        """Write the JSON summary and every CSV table; returns the paths."""
        os.makedirs(out_dir, exist_ok=True)
        stem = f"{self.config.kind}_n{'-'.join(map(str, self.config.n))}_seed{self.config.seed}"
        paths = [os.path.join(out_dir, f"{stem}.json")]
        with open(paths[0], "w") as f:
            f.write(self.summary_json())
        for name, text in self.tables.items():
            path = os.path.join(out_dir, f"{stem}_{name}.csv")
            with open(path, "w") as f:
                f.write(text)
            paths.append(path)
        return paths


def null_calibration(config: ExperimentConfig) -> ExperimentResult:
    """Empirical type-I error of the Bonferroni rule at each alpha."""
    tw = default_table()
    rows, metrics = [], {"statistics": {}, "rates": {}}
    for n in config.n:
        T = _statistics(edge_samples(config, n), n)
        metrics["statistics"][str(n)] = T
        for alpha in config.alphas:
            thr = threshold(alpha, tw)
            rate = float(np.mean(T >= thr))
            se = math.sqrt(rate * (1 - rate) / len(T))
            rows.append((n, alpha, thr, rate, se))
            metrics["rates"][f"{n}:{alpha}"] = rate
    table = _csv(("n", "alpha", "threshold", "empirical_type_I", "binomial_stderr"), rows)
    return ExperimentResult(config, metrics, {"calibration": table})


def calibration_rates(result: ExperimentResult, n: int) -> dict:
    return {a: result.metrics["rates"][f"{n}:{a}"] for a in result.config.alphas}


def tw_histogram_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Edge statistics ``n^(2/3)(lambda1 - 2)`` and ``n^(2/3)(-lambdan - 2)``
    under the null, compared with TW1."""
    tw = default_table()
    metrics, tables = {}, {}
    for n in config.n:
        edges = edge_samples(config, n)
        c = n ** (2.0 / 3.0)
        upper = c * (edges[:, 0] - 2.0)
        lower = c * (-edges[:, 1] - 2.0)
        ks_upper = stats.kstest(tw.cdf(upper), "uniform").statistic
        ks_lower = stats.kstest(tw.cdf(lower), "uniform").statistic
        metrics[str(n)] = {
            "upper": upper, "lower": lower,
            "mean_upper": float(upper.mean()), "mean_lower": float(lower.mean()),
            "ks_tw_upper": float(ks_upper), "ks_tw_lower": float(ks_lower),
            "two_sample_ks_pvalue": float(stats.ks_2samp(upper, lower).pvalue),
        }
        pooled = np.concatenate([upper, lower])
        edges_ = np.linspace(pooled.min(), pooled.max(), config.bins + 1)
        width = np.diff(edges_)
        hu, _ = np.histogram(upper, bins=edges_)
        hl, _ = np.histogram(lower, bins=edges_)
        centers = 0.5 * (edges_[1:] + edges_[:-1])
        rows = zip(centers, hu / (len(upper) * width), hl / (len(lower) * width), tw.pdf(centers))
        tables[f"hist_n{n}"] = _csv(("bin_center", "density_upper", "density_lower", "tw1_pdf"), rows)
        tables[f"samples_n{n}"] = _csv(("trial", "upper", "lower"), zip(range(len(upper)), upper, lower))
    return ExperimentResult(config, metrics, tables)


def _bulk_trial(args):
    n, seed, clamp_floor, variant = args
    params = generate_null_experiment(n, seed)
    A = sample_adjacency(params, _sample_seed(seed))
    B = oracle_transform(A, params) if variant == "oracle" else estimated_transform(A, clamp_floor)
    return symmetric_eigenvalues(scale(B).entries)


def semicircle_experiment(config: ExperimentConfig) -> ExperimentResult:
    """ESD of the scaled null transform against the semicircle law.

    The histogram comes from the first realization; ``ks`` lists the
    distance for every realization.
    """
    metrics, tables = {}, {}
    for n in config.n:
        args = [
            (n, trial_seed(config.seed, NULL_STREAM, n, t), config.clamp_floor, config.variant)
            for t in range(config.trials)
        ]
        spectra = _map_trials(_bulk_trial, args, config.threads)
        ks = [ks_distance_to_semicircle(s) for s in spectra]
        hist = esd(spectra[0], config.bins)
        metrics[str(n)] = {"ks": ks, "histogram": hist}
        rows = zip(hist.centers, hist.density, semicircle_pdf(hist.centers))
        tables[f"esd_n{n}"] = _csv(("bin_center", "density", "rho_sc"), rows)
    return ExperimentResult(config, metrics, tables)


def semicircle_histogram(result: ExperimentResult, n: int) -> EsdHistogram:
    return result.metrics[str(n)]["histogram"]


@dataclass(frozen=True)
class RocCurve:
    n: int
    fpr: np.ndarray
    tpr: np.ndarray
    trials: int

    @property
    def auc(self) -> float:
        return float(np.trapezoid(self.tpr, self.fpr))

    def tpr_at(self, fpr_level: float) -> float:
        """Largest true-positive rate among thresholds with FPR <= level."""
        return float(self.tpr[self.fpr <= fpr_level + 1e-12].max())


def roc_curve(null_stats, alt_stats, n: int = 0) -> RocCurve:
    """Sweep the threshold down through the pooled statistics."""
    null_stats = np.asarray(null_stats, dtype=np.float64)
    alt_stats = np.asarray(alt_stats, dtype=np.float64)
    cuts = np.unique(np.concatenate([null_stats, alt_stats]))[::-1]
    fpr = [0.0] + [float(np.mean(null_stats >= c)) for c in cuts]
    tpr = [0.0] + [float(np.mean(alt_stats >= c)) for c in cuts]
    return RocCurve(n, np.array(fpr), np.array(tpr), len(null_stats))


def roc_experiment(config: ExperimentConfig) -> ExperimentResult:
    curves, tables = [], {}
    for n in config.n:
        T0 = _statistics(edge_samples(config, n), n)
        T1 = _statistics(edge_samples(config, n, alternative=True), n)
        curve = roc_curve(T0, T1, n)
        curves.append(curve)
        tables[f"roc_n{n}"] = _csv(("false_positive_rate", "true_positive_rate"),
                                   zip(curve.fpr, curve.tpr))
    metrics = {
        "curves": curves,
        "auc": {str(c.n): c.auc for c in curves},
        "tpr_at_fpr_0.05": {str(c.n): c.tpr_at(0.05) for c in curves},
    }
    return ExperimentResult(config, metrics, tables)


def concentration_bound(t: float, n: int, epsilon: float) -> float:
    return (8.0 / epsilon) * (math.sqrt(t) / math.sqrt(n) + t / n)


def concentration_floor(t: float, n: int, epsilon: float) -> float:
    return 1.0 - 2.0 * (2.0 * math.exp(-2.0 * t * t) + math.exp(-(n * epsilon) ** 2 / 18.0))


def probe_pairs(theta: np.ndarray, count: int, seed: int) -> np.ndarray:
    """``count`` node pairs ``i <= j``, always including the max- and
    min-affinity diagonal pairs."""
    n = len(theta)
    hi, lo = int(np.argmax(theta)), int(np.argmin(theta))
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=count - 2)
    j = rng.integers(0, n, size=count - 2)
    pairs = np.column_stack([np.minimum(i, j), np.maximum(i, j)])
    return np.vstack([[hi, hi], [lo, lo], pairs])


def _concentration_trial(args):
    n, params_seed, sample_seed, pairs = args
    params = generate_null_experiment(n, params_seed)
    A = sample_adjacency(params, sample_seed)
    deg = A.entries.sum(axis=1, dtype=np.int64).astype(np.float64)
    i, j = pairs[:, 0], pairs[:, 1]
    plug_in = deg[i] * deg[j] / deg.sum()
    p = params.theta[i] * params.theta[j] * params.W[params.phi[i], params.phi[j]]
    return float(np.abs(plug_in - p).max())


def concentration_experiment(config: ExperimentConfig, t_grid=None) -> ExperimentResult:
    """Coverage of the entrywise plug-in bound over ``trials`` graphs drawn
    from one fixed null model per ``n``."""
    t_grid = tuple(config.t_grid if t_grid is None else t_grid)
    if any(t < 0 for t in t_grid):
        raise ValueError("t values must be non-negative")
    rows, metrics = [], {"max_error": {}, "median_scaled_error": {}, "coverage": {}}
    for n in config.n:
        params_seed = derive_seed(config.seed, CONCENTRATION_PARAMS_STREAM, n)
        params = generate_null_experiment(n, params_seed)
        pairs = probe_pairs(params.theta, config.pairs,
                            derive_seed(config.seed, CONCENTRATION_PAIRS_STREAM, n))
        args = [
            (n, params_seed, trial_seed(config.seed, CONCENTRATION_SAMPLE_STREAM, n, t), pairs)
            for t in range(config.trials)
        ]
        err = np.array(_map_trials(_concentration_trial, args, config.threads))
        metrics["max_error"][str(n)] = err
        metrics["median_scaled_error"][str(n)] = float(np.median(np.sqrt(n) * err))
        for t in t_grid:
            bound = concentration_bound(t, n, params.epsilon)
            coverage = float(np.mean(err <= bound))
            floor = concentration_floor(t, n, params.epsilon)
            metrics["coverage"][f"{n}:{t}"] = (coverage, floor)
            rows.append((n, t, bound, coverage, floor))
    table = _csv(("n", "t", "bound", "coverage", "theoretical_floor"), rows)
    return ExperimentResult(config, metrics, {"coverage": table})


def ratio_bound_gap(a, b, c, d):
    """``(|(a + c)/(b + d) - a/b|, (|c| + |d|) / |b + d|)``; the first never
    exceeds the second when ``b != 0``, ``b + d != 0`` and ``|a/b| <= 1``.

    Works elementwise on arrays.
    """
    a, b, c, d = (np.asarray(v, dtype=np.float64) for v in (a, b, c, d))
    if np.any(b == 0) or np.any(b + d == 0):
        raise ValueError("need b != 0 and b + d != 0")
    if np.any(np.abs(a) > np.abs(b)):
        raise ValueError("need |a / b| <= 1")
    lhs = np.abs((a + c) / (b + d) - a / b)
    rhs = (np.abs(c) + np.abs(d)) / np.abs(b + d)
    if lhs.ndim == 0:
        return float(lhs), float(rhs)
    return lhs, rhs


RUNNERS = {
    "null_calibration": null_calibration,
    "tw_histogram": tw_histogram_experiment,
    "semicircle": semicircle_experiment,
    "roc": roc_experiment,
    "concentration": concentration_experiment,
}


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[config.kind](config)
