"""End-to-end response prediction and the Monte Carlo experiment harness.

The prediction pipeline chains the stages: score-matrix estimation over all
N graphs, scaled-score vectorization, 1-D isomap over the first N* points,
simple linear regression of the s labeled responses on their embeddings,
and evaluation of the fitted line at the target index r (counted from 1).

Experiment runners reproduce the two convergence studies: the squared gap
between pipeline and oracle predictions across a growing schedule, and the
power agreement of the slope F-test run on embeddings versus on the true
regressors. Replicates are independent, seeded tasks; records are immutable
and aggregation is deterministic regardless of thread count.

Seeding: replicate (K, j) derives its streams from
SeedSequence(base_seed, spawn_key=(K, j)), spawned into a draw stream (t and
epsilon) and a graph seed (reduced to uint64, recorded in the CSV seed
column). Changing the replicate count or the K grid never alters other
replicates' records.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import io
from .errors import DegenerateDesignError, NumericalError, ValidationError
from .graphs import VARIANTS, GraphCollection, sample_collection
from .manifold import StressTrace, isomap_1d
from .mase import coords_matrix, scaled_score_points, sparse_mase
from .regression import (
    RegressionFit,
    TestReport,
    f_test,
    fit_local_linear,
    fit_slr,
    predict_slr,
)

logger = logging.getLogger(__name__)

DEFAULT_BASE_SEED = 20240817

EXPERIMENT_FORMAT_VERSION = 1

SUMMARY_COLUMNS = (
    "K",
    "n",
    "N",
    "n_star",
    "lambda",
    "n_valid",
    "n_failed",
    "mean_sq_gap",
    "median_sq_gap",
)
POWER_SUMMARY_COLUMNS = SUMMARY_COLUMNS + (
    "pi_true",
    "pi_hat",
    "abs_power_gap",
    "se_true",
    "se_hat",
)


@dataclass(frozen=True)
class PredictConfig:
    """Knobs of one pipeline run.

    radius is the localization-graph neighborhood parameter; r is the
    1-based target index among the l embedded graphs. The sparsity override
    exists for noiseless mode (see sparse_mase).
    """

    d: int
    radius: float
    l: int
    n_star: int
    r: int
    per_graph_basis: bool = False
    sparsity: float = None
    smacof_tol: float = 1e-8
    smacof_max_iter: int = 1000

    def __post_init__(self):
        if self.d < 1:
            raise ValidationError("d must be >= 1")
        if self.radius <= 0.0:
            raise ValidationError("the neighborhood radius must be positive")
        if self.l < 1:
            raise ValidationError("l must be >= 1")
        if self.n_star < self.l:
            raise ValidationError(f"n_star={self.n_star} must be >= l={self.l}")
        if not 1 <= self.r <= self.l:
            raise ValidationError(f"target index r={self.r} must lie in [1, l={self.l}]")


@dataclass(frozen=True)
class PredictDiagnostics:
    """Side products of a pipeline run, for inspection and logging."""

    sparsity: float
    stress: StressTrace
    embedding: np.ndarray
    dissimilarity_max: float
    dissimilarity_min: float  # smallest off-diagonal entry


def _embed_collection(
    collection,
    d,
    radius,
    l,
    n_star,
    per_graph_basis=False,
    sparsity=None,
    upper_triangle=False,
    tol=1e-8,
    max_iter=1000,
):
    if n_star > collection.n_graphs:
        raise ValidationError(
            f"n_star={n_star} exceeds the number of graphs {collection.n_graphs}"
        )
    scores, rho = sparse_mase(
        collection, d, per_graph_basis=per_graph_basis, sparsity=sparsity
    )
    points = scaled_score_points(scores, collection.node_count)
    x = coords_matrix(points, upper_triangle=upper_triangle)
    z, trace, delta = isomap_1d(
        x[:n_star], radius, l, tol=tol, max_iter=max_iter, full_output=True
    )
    if l > 1:
        off = delta[~np.eye(l, dtype=bool)]
        delta_max, delta_min = float(off.max()), float(off.min())
    else:
        delta_max = delta_min = 0.0
    diagnostics = PredictDiagnostics(
        sparsity=rho,
        stress=trace,
        embedding=z,
        dissimilarity_max=delta_max,
        dissimilarity_min=delta_min,
    )
    return z, diagnostics


def predict_from_embeddings(embedding, responses, r):
    """Fit the labeled prefix and evaluate the line at index r (1-based).

    The returned prediction is invariant to affine maps of the embedding:
    replacing z by c*z + m (c != 0) gives the identical value.
    """
    z = np.asarray(embedding, dtype=float)
    s = len(responses)
    if s > z.size:
        raise ValidationError("more responses than embedded points")
    if not 1 <= r <= z.size:
        raise ValidationError(f"target index r={r} outside [1, {z.size}]")
    fit = fit_slr(z[:s], responses)
    return predict_slr(fit, float(z[r - 1]))


def pred_graph_resp(collection, config):
    """Predict the response of the r-th graph from the whole collection.

    Returns (prediction, PredictDiagnostics). The collection must carry at
    least two responses on its leading graphs and s <= l must hold.
    """
    s = collection.n_labeled
    if s < 2:
        raise ValidationError("the collection must carry at least two responses")
    if s > config.l:
        raise ValidationError(f"s={s} labeled graphs exceed l={config.l}")
    z, diagnostics = _embed_collection(
        collection,
        config.d,
        config.radius,
        config.l,
        config.n_star,
        per_graph_basis=config.per_graph_basis,
        sparsity=config.sparsity,
        tol=config.smacof_tol,
        max_iter=config.smacof_max_iter,
    )
    prediction = predict_from_embeddings(z, collection.responses, config.r)
    return prediction, diagnostics


def oracle_prediction(ts, ys, r):
    """Prediction from the true regressors: fit on (t_k, y_k), evaluate t_r."""
    t = np.asarray(ts, dtype=float)
    if not 1 <= r <= t.size:
        raise ValidationError(f"target index r={r} outside [1, {t.size}]")
    fit = fit_slr(t[: len(ys)], ys)
    return predict_slr(fit, float(t[r - 1]))


@dataclass(frozen=True)
class ScheduleEntry:
    n: int
    n_graphs: int
    n_star: int
    radius: float


@dataclass(frozen=True)
class ExperimentConfig:
    """Parametric schedule shared by both Monte Carlo experiments.

    At step K: n = nodes_base + nodes_step*(K-1) nodes,
    N = graphs_base + graphs_step*(K-1) graphs,
    N* = floor(N ** isomap_exponent), radius = lambda_base * lambda_decay**(K-1).
    """

    kind: str
    k_values: tuple
    nodes_base: int
    nodes_step: int
    graphs_base: int
    graphs_step: int
    isomap_exponent: float
    lambda_base: float
    lambda_decay: float
    s: int
    l: int
    alpha: float
    beta: float
    sigma_eps: float
    variant: str
    r: int = None
    d: int = 2
    level: float = 0.05
    mc_replicates: int = 100
    base_seed: int = DEFAULT_BASE_SEED

    def __post_init__(self):
        if self.kind not in ("consistency", "power"):
            raise ValidationError(f"unknown experiment kind {self.kind!r}")
        if not self.k_values:
            raise ValidationError("k_values must be non-empty")
        if any(int(k) != k or k < 1 for k in self.k_values):
            raise ValidationError("k_values must be integers >= 1")
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown variant {self.variant!r}")
        if self.s < 2:
            raise ValidationError("s must be >= 2")
        if self.s > self.l:
            raise ValidationError(f"s={self.s} must not exceed l={self.l}")
        if self.kind == "consistency":
            if self.r is None or not 1 <= self.r <= self.l:
                raise ValidationError("consistency runs need 1 <= r <= l")
        if not 0.0 < self.level < 1.0:
            raise ValidationError("level must lie in (0, 1)")
        if self.mc_replicates < 1:
            raise ValidationError("mc_replicates must be >= 1")
        if self.lambda_base <= 0.0 or not 0.0 < self.lambda_decay <= 1.0:
            raise ValidationError("need lambda_base > 0 and lambda_decay in (0, 1]")
        if not 0.0 < self.isomap_exponent <= 1.0:
            raise ValidationError("isomap_exponent must lie in (0, 1]")
        if self.sigma_eps < 0.0:
            raise ValidationError("sigma_eps must be non-negative")
        for k in self.k_values:
            entry = self.schedule(k)
            if entry.n < 2 or entry.n % 2 != 0:
                raise ValidationError(
                    f"K={k}: node count {entry.n} must be even and >= 2"
                )
            if entry.n < self.d:
                raise ValidationError(f"K={k}: node count below d={self.d}")
            if entry.n_star < self.l:
                raise ValidationError(
                    f"K={k}: n_star={entry.n_star} is below l={self.l}"
                )

    def schedule(self, k):
        n_graphs = self.graphs_base + self.graphs_step * (k - 1)
        return ScheduleEntry(
            n=self.nodes_base + self.nodes_step * (k - 1),
            n_graphs=n_graphs,
            n_star=int(math.floor(n_graphs**self.isomap_exponent)),
            radius=self.lambda_base * self.lambda_decay ** (k - 1),
        )


def consistency_full_config(**overrides):
    """Full-scale squared-gap experiment schedule (K = 1..12)."""
    base = dict(
        kind="consistency",
        k_values=tuple(range(1, 13)),
        nodes_base=500,
        nodes_step=150,
        graphs_base=15,
        graphs_step=1,
        isomap_exponent=0.75,
        lambda_base=2.0,
        lambda_decay=0.99,
        s=5,
        l=6,
        r=6,
        alpha=2.0,
        beta=5.0,
        sigma_eps=0.01,
        variant="curve-A",
        d=2,
        mc_replicates=100,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def consistency_reduced_config(**overrides):
    """Desk-scale squared-gap schedule (K = 1..6, smaller graphs)."""
    base = dict(k_values=tuple(range(1, 7)), nodes_base=200, nodes_step=100,
                mc_replicates=30)
    base.update(overrides)
    return consistency_full_config(**base)


def power_full_config(**overrides):
    """Full-scale power-agreement schedule (K = 1..20, curve-B)."""
    base = dict(
        kind="power",
        k_values=tuple(range(1, 21)),
        nodes_base=16,
        nodes_step=4,
        graphs_base=12,
        graphs_step=1,
        isomap_exponent=0.85,
        lambda_base=0.95,
        lambda_decay=0.99,
        s=5,
        l=5,
        alpha=2.0,
        beta=5.0,
        sigma_eps=0.1,
        variant="curve-B",
        d=2,
        level=0.05,
        mc_replicates=100,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


_CONFIG_KEYS = {
    "format_version",
    "experiment",
    "k_values",
    "nodes_base",
    "nodes_step",
    "graphs_base",
    "graphs_step",
    "isomap_exponent",
    "lambda_base",
    "lambda_decay",
    "s",
    "l",
    "r",
    "alpha",
    "beta",
    "sigma_eps",
    "variant",
    "d",
    "level",
    "mc_replicates",
    "base_seed",
}


def experiment_config_from_json(path):
    """Load an ExperimentConfig from its JSON form (strict keys)."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be an object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ValidationError(f"{path}: unknown config keys {sorted(unknown)}")
    if doc.get("format_version") != EXPERIMENT_FORMAT_VERSION:
        raise ValidationError(
            f"{path}: format_version must be {EXPERIMENT_FORMAT_VERSION}"
        )
    kind = doc.get("experiment")
    required = {
        "k_values",
        "nodes_base",
        "nodes_step",
        "graphs_base",
        "graphs_step",
        "isomap_exponent",
        "lambda_base",
        "lambda_decay",
        "s",
        "l",
        "alpha",
        "beta",
        "sigma_eps",
        "variant",
    }
    missing = required - set(doc)
    if missing:
        raise ValidationError(f"{path}: missing config keys {sorted(missing)}")
    kwargs = dict(
        kind=kind,
        k_values=tuple(doc["k_values"]),
        nodes_base=doc["nodes_base"],
        nodes_step=doc["nodes_step"],
        graphs_base=doc["graphs_base"],
        graphs_step=doc["graphs_step"],
        isomap_exponent=doc["isomap_exponent"],
        lambda_base=doc["lambda_base"],
        lambda_decay=doc["lambda_decay"],
        s=doc["s"],
        l=doc["l"],
        alpha=doc["alpha"],
        beta=doc["beta"],
        sigma_eps=doc["sigma_eps"],
        variant=doc["variant"],
    )
    for key in ("r", "d", "level", "mc_replicates", "base_seed"):
        if key in doc:
            kwargs[key] = doc[key]
    return ExperimentConfig(**kwargs)


def experiment_config_to_json(config, path):
    """Write the JSON form accepted by experiment_config_from_json."""
    doc = {
        "format_version": EXPERIMENT_FORMAT_VERSION,
        "experiment": config.kind,
        "k_values": list(config.k_values),
        "nodes_base": config.nodes_base,
        "nodes_step": config.nodes_step,
        "graphs_base": config.graphs_base,
        "graphs_step": config.graphs_step,
        "isomap_exponent": config.isomap_exponent,
        "lambda_base": config.lambda_base,
        "lambda_decay": config.lambda_decay,
        "s": config.s,
        "l": config.l,
        "alpha": config.alpha,
        "beta": config.beta,
        "sigma_eps": config.sigma_eps,
        "variant": config.variant,
        "d": config.d,
        "level": config.level,
        "mc_replicates": config.mc_replicates,
        "base_seed": config.base_seed,
    }
    if config.r is not None:
        doc["r"] = config.r
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class ReplicateRecord:
    """One immutable Monte Carlo replicate outcome."""

    k_index: int
    replicate: int
    seed: int
    n: int
    n_graphs: int
    n_star: int
    radius: float
    sq_gap: float
    valid: bool
    f_true: float = None
    f_hat: float = None
    reject_true: bool = None
    reject_hat: bool = None


@dataclass(frozen=True)
class KSummary:
    """Per-K aggregate over the valid replicates."""

    k_index: int
    n: int
    n_graphs: int
    n_star: int
    radius: float
    n_valid: int
    n_failed: int
    mean_sq_gap: float
    median_sq_gap: float
    pi_true: float = None
    pi_hat: float = None
    abs_power_gap: float = None
    se_true: float = None
    se_hat: float = None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple
    summaries: tuple
    runtime_seconds: float = field(compare=False, default=0.0)
    csv_paths: dict = field(compare=False, default_factory=dict)


def _replicate_streams(base_seed, k_index, replicate):
    seq = np.random.SeedSequence(base_seed, spawn_key=(k_index, replicate))
    draw_child, graph_child = seq.spawn(2)
    graph_seed = int(graph_child.generate_state(1, dtype=np.uint64)[0])
    rng = np.random.Generator(np.random.Philox(draw_child))
    return rng, graph_seed


def _consistency_replicate(config, k_index, replicate):
    entry = config.schedule(k_index)
    rng, graph_seed = _replicate_streams(config.base_seed, k_index, replicate)
    ts = rng.uniform(0.25, 1.0, entry.n_graphs)
    eps = rng.normal(0.0, config.sigma_eps, config.s)
    ys = config.alpha + config.beta * ts[: config.s] + eps
    common = dict(
        k_index=k_index,
        replicate=replicate,
        seed=graph_seed,
        n=entry.n,
        n_graphs=entry.n_graphs,
        n_star=entry.n_star,
        radius=entry.radius,
    )
    try:
        collection = sample_collection(
            ts, entry.n, config.variant, graph_seed, responses=ys
        )
        prediction, _ = pred_graph_resp(
            collection,
            PredictConfig(
                d=config.d,
                radius=entry.radius,
                l=config.l,
                n_star=entry.n_star,
                r=config.r,
            ),
        )
        oracle = oracle_prediction(ts, ys, config.r)
        return ReplicateRecord(
            sq_gap=(prediction - oracle) ** 2, valid=True, **common
        )
    except NumericalError as exc:
        logger.debug("K=%d replicate %d failed: %s", k_index, replicate, exc)
        return ReplicateRecord(sq_gap=float("nan"), valid=False, **common)


def _power_replicate(config, k_index, replicate):
    entry = config.schedule(k_index)
    rng, graph_seed = _replicate_streams(config.base_seed, k_index, replicate)
    ts = rng.uniform(0.25, 1.0, entry.n_graphs)
    eps = rng.normal(0.0, config.sigma_eps, config.s)
    ys = config.alpha + config.beta * ts[: config.s] + eps
    common = dict(
        k_index=k_index,
        replicate=replicate,
        seed=graph_seed,
        n=entry.n,
        n_graphs=entry.n_graphs,
        n_star=entry.n_star,
        radius=entry.radius,
    )
    try:
        report_true = f_test(ts[: config.s], ys, config.level)
        fit_true = fit_slr(ts[: config.s], ys)
        fitted_true = fit_true.intercept + fit_true.slope * ts[: config.s]
        collection = sample_collection(
            ts, entry.n, config.variant, graph_seed, responses=ys
        )
        z, _ = _embed_collection(
            collection, config.d, entry.radius, config.l, entry.n_star
        )
        report_hat = f_test(z[: config.s], ys, config.level)
        fit_hat = fit_slr(z[: config.s], ys)
        fitted_hat = fit_hat.intercept + fit_hat.slope * z[: config.s]
        sq_gap = float(((fitted_hat - fitted_true) ** 2).mean())
        return ReplicateRecord(
            sq_gap=sq_gap,
            valid=True,
            f_true=report_true.f_value,
            f_hat=report_hat.f_value,
            reject_true=report_true.reject,
            reject_hat=report_hat.reject,
            **common,
        )
    except NumericalError as exc:
        logger.debug("K=%d replicate %d failed: %s", k_index, replicate, exc)
        return ReplicateRecord(sq_gap=float("nan"), valid=False, **common)


def _summarize(config, records):
    summaries = []
    for k in config.k_values:
        entry = config.schedule(k)
        mine = [r for r in records if r.k_index == k]
        valid = [r for r in mine if r.valid]
        gaps = np.array([r.sq_gap for r in valid])
        extras = {}
        if config.kind == "power":
            if valid:
                m = len(valid)
                pi_true = sum(r.reject_true for r in valid) / m
                pi_hat = sum(r.reject_hat for r in valid) / m
                extras = dict(
                    pi_true=pi_true,
                    pi_hat=pi_hat,
                    abs_power_gap=abs(pi_hat - pi_true),
                    se_true=math.sqrt(pi_true * (1.0 - pi_true) / m),
                    se_hat=math.sqrt(pi_hat * (1.0 - pi_hat) / m),
                )
            else:
                extras = dict(
                    pi_true=float("nan"),
                    pi_hat=float("nan"),
                    abs_power_gap=float("nan"),
                    se_true=float("nan"),
                    se_hat=float("nan"),
                )
        summaries.append(
            KSummary(
                k_index=k,
                n=entry.n,
                n_graphs=entry.n_graphs,
                n_star=entry.n_star,
                radius=entry.radius,
                n_valid=len(valid),
                n_failed=len(mine) - len(valid),
                mean_sq_gap=float(gaps.mean()) if valid else float("nan"),
                median_sq_gap=float(np.median(gaps)) if valid else float("nan"),
                **extras,
            )
        )
    return summaries


def _summary_rows(config, summaries):
    rows = []
    for s in summaries:
        row = {
            "K": s.k_index,
            "n": s.n,
            "N": s.n_graphs,
            "n_star": s.n_star,
            "lambda": s.radius,
            "n_valid": s.n_valid,
            "n_failed": s.n_failed,
            "mean_sq_gap": s.mean_sq_gap,
            "median_sq_gap": s.median_sq_gap,
        }
        if config.kind == "power":
            row.update(
                pi_true=s.pi_true,
                pi_hat=s.pi_hat,
                abs_power_gap=s.abs_power_gap,
                se_true=s.se_true,
                se_hat=s.se_hat,
            )
        rows.append(row)
    return rows


def _run_experiment(config, replicate_fn, threads, out_dir):
    start = time.perf_counter()
    tasks = [(k, j) for k in config.k_values for j in range(config.mc_replicates)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda t: replicate_fn(config, *t), tasks))
    else:
        records = [replicate_fn(config, k, j) for k, j in tasks]
    records.sort(key=lambda r: (r.k_index, r.replicate))
    summaries = _summarize(config, records)
    csv_paths = {}
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        replicate_path = os.path.join(out_dir, "replicates.csv")
        summary_path = os.path.join(out_dir, "summary.csv")
        io.write_replicate_records(
            records, replicate_path, power=(config.kind == "power")
        )
        columns = POWER_SUMMARY_COLUMNS if config.kind == "power" else SUMMARY_COLUMNS
        io.emit_csv(_summary_rows(config, summaries), summary_path, columns)
        csv_paths = {"replicates": replicate_path, "summary": summary_path}
    elapsed = time.perf_counter() - start
    failed = sum(1 for r in records if not r.valid)
    logger.info(
        "%s experiment: %d replicates over %d K values, %d failed, %.1fs",
        config.kind,
        len(records),
        len(config.k_values),
        failed,
        elapsed,
    )
    return ExperimentResult(
        config=config,
        records=tuple(records),
        summaries=tuple(summaries),
        runtime_seconds=elapsed,
        csv_paths=csv_paths,
    )


def run_consistency_experiment(config, threads=1, out_dir=None):
    """Monte Carlo squared-gap experiment; emits CSVs when out_dir is set."""
    if config.kind != "consistency":
        raise ValidationError("config.kind must be 'consistency'")
    return _run_experiment(config, _consistency_replicate, threads, out_dir)


def run_power_experiment(config, threads=1, out_dir=None):
    """Monte Carlo power-agreement experiment; emits CSVs when out_dir is set."""
    if config.kind != "power":
        raise ValidationError("config.kind must be 'power'")
    return _run_experiment(config, _power_replicate, threads, out_dir)


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the real-data workflow produces."""

    n_series: int
    node_count: int
    labeled_count: int
    position: int
    sparsity: float
    correlations: np.ndarray
    embedding: np.ndarray
    responses: tuple
    fit: RegressionFit
    test: TestReport
    stress: StressTrace
    local_fit: np.ndarray = None
    local_pseudo_r2: float = None
    csv_paths: dict = field(default_factory=dict)


def _upper_triangle_labels(d):
    rows, cols = np.triu_indices(d)
    return [f"q_{i}{j}" for i, j in zip(rows, cols)]


def analyze_real_dataset(
    manifest_path,
    position,
    d=3,
    radius=1.0,
    level=0.05,
    l=None,
    n_star=None,
    percentile=25.0,
    symmetrize="max",
    pooled_threshold=False,
    local_linear=False,
    bandwidth=0.03,
    out_dir=None,
):
    """Run the ingestion-to-test workflow on a manifest of weighted digraphs.

    Selects the position-th graph (1-based) of every series, censors and
    binarizes it, estimates score matrices with the given d, embeds the
    upper-triangle scaled-score vectors with 1-D isomap, regresses the
    labeled responses on the embeddings, and runs the slope F-test. The
    optional local-linear pass evaluates a Gaussian-kernel local fit at
    every embedding and reports a pseudo-R² computed from global residuals
    at the labeled points (a convention; no standard local-fit R² exists).

    Thresholds are per-graph percentiles of the absolute nonzero directed
    weights unless pooled_threshold pools them across the collection.
    """
    manifest = io.load_manifest(manifest_path)
    graphs = [
        io.load_weighted_edge_list(
            manifest.graph_path(i, position), manifest.node_count
        )
        for i in range(manifest.n_series)
    ]
    threshold = None
    if pooled_threshold:
        pooled = [m for g in graphs for m in io.nonzero_weight_magnitudes(g)]
        if not pooled:
            raise ValidationError("no nonzero weights anywhere in the collection")
        threshold = float(np.percentile(pooled, percentile))
    adjacency = tuple(
        io.censor_binarize(g, percentile, rule=symmetrize, threshold=threshold)
        for g in graphs
    )
    labeled = manifest.labeled_count
    if labeled < 3:
        raise DegenerateDesignError(
            "the F-test needs at least three labeled series"
        )
    collection = GraphCollection(
        graphs=adjacency, responses=manifest.responses[:labeled]
    )
    n_graphs = collection.n_graphs
    l = n_graphs if l is None else l
    n_star = n_graphs if n_star is None else n_star
    if labeled > l:
        raise ValidationError(f"labeled count {labeled} exceeds l={l}")
    scores, rho = sparse_mase(collection, d)
    points = scaled_score_points(scores, collection.node_count)
    upper = coords_matrix(points, upper_triangle=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        correlations = np.corrcoef(upper, rowvar=False)
    z, trace, _ = isomap_1d(upper[:n_star], radius, l, full_output=True)
    ys = np.asarray(collection.responses, dtype=float)
    fit = fit_slr(z[:labeled], ys)
    test = f_test(z[:labeled], ys, level)
    local_fit = None
    pseudo_r2 = None
    if local_linear:
        local_fit = np.array(
            [fit_local_linear(z[:labeled], ys, bandwidth, q) for q in z]
        )
        sse = float(((ys - local_fit[:labeled]) ** 2).sum())
        sst = float(((ys - ys.mean()) ** 2).sum())
        pseudo_r2 = 1.0 - sse / sst if sst > 0.0 else float("nan")
    csv_paths = {}
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        embeddings_path = os.path.join(out_dir, "embeddings.csv")
        io.write_embeddings_csv(embeddings_path, z, list(collection.responses))
        labels = _upper_triangle_labels(d)
        corr_path = os.path.join(out_dir, "correlations.csv")
        io.emit_csv(
            [dict(zip(labels, row)) for row in correlations],
            corr_path,
            labels,
        )
        report_path = os.path.join(out_dir, "test_report.csv")
        io.emit_csv(
            [
                {
                    "f_value": test.f_value,
                    "df1": test.df[0],
                    "df2": test.df[1],
                    "critical_value": test.critical_value,
                    "p_value": test.p_value,
                    "reject": test.reject,
                    "level": test.level,
                    "intercept": fit.intercept,
                    "slope": fit.slope,
                    "sample_size": fit.sample_size,
                    "sparsity": rho,
                }
            ],
            report_path,
            (
                "f_value",
                "df1",
                "df2",
                "critical_value",
                "p_value",
                "reject",
                "level",
                "intercept",
                "slope",
                "sample_size",
                "sparsity",
            ),
        )
        csv_paths = {
            "embeddings": embeddings_path,
            "correlations": corr_path,
            "test_report": report_path,
        }
        if local_linear:
            local_path = os.path.join(out_dir, "local_fit.csv")
            io.emit_csv(
                [
                    {"index": i, "z_hat": float(z[i]), "local_fit": float(local_fit[i])}
                    for i in range(len(z))
                ],
                local_path,
                ("index", "z_hat", "local_fit"),
            )
            csv_paths["local_fit"] = local_path
    return AnalysisReport(
        n_series=manifest.n_series,
        node_count=manifest.node_count,
        labeled_count=labeled,
        position=position,
        sparsity=rho,
        correlations=correlations,
        embedding=z,
        responses=collection.responses,
        fit=fit,
        test=test,
        stress=trace,
        local_fit=local_fit,
        local_pseudo_r2=pseudo_r2,
        csv_paths=csv_paths,
    )


def collection_from_manifest(manifest, position, percentile=25.0, symmetrize="max",
                             s=None):
    """Ingest the position-th graph of every series into a GraphCollection.

    s caps the labeled prefix (defaults to every labeled series); use it to
    leave later series unlabeled for prediction targets.
    """
    graphs = tuple(
        io.censor_binarize(
            io.load_weighted_edge_list(
                manifest.graph_path(i, position), manifest.node_count
            ),
            percentile,
            rule=symmetrize,
        )
        for i in range(manifest.n_series)
    )
    labeled = manifest.labeled_count if s is None else s
    if labeled > manifest.labeled_count:
        raise ValidationError(
            f"requested s={labeled} exceeds the {manifest.labeled_count} "
            "labeled series"
        )
    responses = manifest.responses[:labeled]
    return GraphCollection(graphs=graphs, responses=responses)


__all__ = [
    "AnalysisReport",
    "DEFAULT_BASE_SEED",
    "ExperimentConfig",
    "ExperimentResult",
    "KSummary",
    "PredictConfig",
    "PredictDiagnostics",
    "ReplicateRecord",
    "ScheduleEntry",
    "analyze_real_dataset",
    "collection_from_manifest",
    "consistency_full_config",
    "consistency_reduced_config",
    "experiment_config_from_json",
    "experiment_config_to_json",
    "oracle_prediction",
    "power_full_config",
    "pred_graph_resp",
    "predict_from_embeddings",
    "run_consistency_experiment",
    "run_power_experiment",
]
