"""
lapbound - Random Experiment Service

Samples G(n, p) with a counter-based generator keyed per trial, builds the
neighborhood complex up to the dimension a mode needs, and records
missing-face counts, real Betti numbers, Delta(k) and the per-sample
counting inequality. Trials are independent; the report is a pure function
of the configuration.
"""

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from math import comb, log, sqrt
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from lapbound.core.config import get_settings, worker_count
from lapbound.core.exceptions import CapacityExceededError, ValidationError
from lapbound.core.logging import get_logger
from lapbound.models.complex import Graph, SimplicialComplex
from lapbound.schemas.experiment import (
    ExperimentMode,
    ExperimentReport,
    ExperimentSummary,
    GnpConfig,
    TrialResult,
)
from lapbound.services.complex_service import missing_face_count, neighborhood_complex, sigma_partition
from lapbound.services.io_service import PathLike, atomic_write_text, write_json
from lapbound.services.laplacian_service import betti_numbers

logger = get_logger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

VANISHING_THRESHOLD = 0.9
COMPLETE_THRESHOLD = 0.9
Z_THRESHOLD = 3.0

SCOPE_NOTE = (
    "Fixed-n desk-scale run: fractions and z-scores stand in for asymptotic "
    "statements. Betti numbers are over the reals; torsion in integer "
    "cohomology and homotopy connectivity are not checked."
)

BETTI_MODES = (
    ExperimentMode.MAIN3,
    ExperimentMode.CONJECTURE1_EVIDENCE,
    ExperimentMode.CONJECTURE2_EVIDENCE,
)


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 generator: add the golden gamma, then finalize."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, trial_index: int) -> int:
    """seed_i = splitmix64(master + i * gamma): the i-th value of the SplitMix64 stream."""
    if trial_index < 0:
        raise ValidationError("trial index must be >= 0", field="trial_index")
    return splitmix64((master_seed + trial_index * GOLDEN_GAMMA) & MASK64)


def sample_gnp(n: int, p: float, trial_seed: int) -> Graph:
    """
    G(n, p) on vertices 0..n-1.

    One uniform draw per pair, pairs in lexicographic order, from a Philox
    stream keyed by ``trial_seed``; the pair is an edge when its draw is
    below p.
    """
    if n < 0:
        raise ValidationError("vertex count must be >= 0", field="n")
    if not 0.0 <= p <= 1.0:
        raise ValidationError("edge probability must lie in [0, 1]", field="p")
    rng = np.random.Generator(np.random.Philox(key=trial_seed & MASK64))
    rows, cols = np.triu_indices(n, k=1)
    chosen = rng.random(rows.size) < p
    edges = frozenset(zip(rows[chosen].tolist(), cols[chosen].tolist()))
    return Graph(vertices=tuple(range(n)), edges=edges)


def expectation_eq7(n: int, p: float, k: int) -> float:
    """E|missing k-faces of N[G(n, p)]| = C(n, k+1) (1 - p^{k+1})^{n-k-1}."""
    if not 0 <= k <= n - 1:
        raise ValidationError(f"need 0 <= k <= n - 1, got n={n}, k={k}", field="k")
    return comb(n, k + 1) * (1.0 - p ** (k + 1)) ** (n - k - 1)


def threshold_probability(n: int, k: int, c: float = 0.0, shift: int = 1) -> float:
    """
    p = (((k + shift) ln n + c) / n)^{1/(k+2)}.

    ``shift=1`` is the refined vanishing regime and ``shift=2`` the classical
    connectivity regime; ``c`` is the lower-order term, 0 at fixed n.
    """
    if n < 2 or k < 0:
        raise ValidationError(f"need n >= 2 and k >= 0, got n={n}, k={k}")
    base = ((k + shift) * log(n) + c) / n
    if not 0.0 < base < 1.0:
        raise ValidationError(
            f"threshold probability undefined for n={n}, k={k}, c={c}", field="p"
        )
    return base ** (1.0 / (k + 2))


class OrderCheck(NamedTuple):
    ok: bool
    missing_k: int
    missing_k1: int
    lhs: int
    rhs: int


def order_inequality_check(X: SimplicialComplex, n: int, k: int) -> OrderCheck:
    """
    (n - k - 1) |missing k-faces| <= (k + 2) |missing (k+1)-faces| over the universe 0..n-1.

    Every missing k-set extends by each outside vertex to a missing
    (k+1)-set, and each missing (k+1)-set arises at most k + 2 times. X must
    be materialized through dimension k + 1.
    """
    if k < 0 or k + 2 > n:
        raise ValidationError(f"need k >= 0 and k + 2 <= n, got n={n}, k={k}", field="k")
    universe = range(n)
    missing_k = missing_face_count(X, universe, k)
    missing_k1 = missing_face_count(X, universe, k + 1)
    lhs = (n - k - 1) * missing_k
    rhs = (k + 2) * missing_k1
    return OrderCheck(ok=lhs <= rhs, missing_k=missing_k, missing_k1=missing_k1, lhs=lhs, rhs=rhs)


def _materialized_dim(config: GnpConfig) -> int:
    top = config.betti_top
    return config.k + 1 if top is None else max(top + 1, config.k + 1)


def run_trial(config: GnpConfig, trial_index: int) -> TrialResult:
    """One independent trial of any mode."""
    seed = mix_seed(config.seed, trial_index)
    n, k = config.n, config.k
    G = sample_gnp(n, config.p, seed)
    base = dict(trial=trial_index, seed=seed, n=n, p=config.p, k=k, s=config.s, edges=len(G.edges))
    budget = config.face_budget or get_settings().FACE_BUDGET

    try:
        X = neighborhood_complex(G, max_dim=_materialized_dim(config), face_budget=budget)
    except CapacityExceededError as e:
        logger.info("trial skipped", trial=trial_index, reason=e.message)
        return TrialResult(**base, skipped=True, skip_reason=e.message)

    universe = range(n)
    missing = [missing_face_count(X, universe, j) for j in range(k + 2)]
    result: Dict[str, Any] = dict(
        base,
        missing_counts=missing,
        graph_complete=missing[0] == 0 and missing[1] == 0,
    )
    if k + 2 <= n:
        result["order_ok"] = order_inequality_check(X, n, k).ok

    if config.mode in BETTI_MODES:
        result["betti"] = betti_numbers(X, config.betti_top, cross_check=False)
        result.update(_delta_fields(X, n, k, missing[k + 1]))
    return TrialResult(**result)


def _delta_fields(X: SimplicialComplex, n: int, k: int, missing_k1: int) -> Dict[str, Any]:
    """Delta(k) and the chain Delta(k) <= (k+2) max sum|sigma[j]| <= (k+2) |missing (k+1)-faces|."""
    faces = X.faces(k)
    if not faces or len(faces) * n * (k + 1) > get_settings().DELTA_BUDGET:
        return {}
    partitions = [sigma_partition(X, sigma) for sigma in faces]
    delta = max(part.weighted for part in partitions)
    total = max(part.total for part in partitions)
    return {
        "delta_k": delta,
        "delta_chain_ok": delta <= (k + 2) * total <= (k + 2) * missing_k1,
    }


def main3_trial(config: GnpConfig, trial_index: int) -> TrialResult:
    """Vanishing trial: Betti numbers b_0..b_{k-s+1} of N[G(n, p)] plus Delta(k)."""
    if config.mode not in BETTI_MODES:
        raise ValidationError(
            f"mode {config.mode.value} records no Betti numbers", field="mode"
        )
    return run_trial(config, trial_index)


def _mean_and_se(values: Sequence[float]) -> Dict[str, Optional[float]]:
    if not values:
        return {"mean": None, "se": None}
    data = np.asarray(values, dtype=np.float64)
    se = float(data.std(ddof=1) / sqrt(data.size)) if data.size > 1 else 0.0
    return {"mean": float(data.mean()), "se": se}


def _fraction(flags: Sequence[bool]) -> Optional[float]:
    return sum(flags) / len(flags) if flags else None


def summarize(config: GnpConfig, trials: Sequence[TrialResult]) -> ExperimentSummary:
    """Aggregate per-trial rows; depends only on the rows, never on their order."""
    rows = sorted((t for t in trials if not t.skipped), key=lambda t: t.trial)
    aggregates: Dict[str, Any] = {
        "edges": _mean_and_se([t.edges for t in rows]),
        "complete_fraction": _fraction([bool(t.graph_complete) for t in rows]),
    }
    checked = [t for t in rows if t.order_ok is not None]
    aggregates["order_checked"] = len(checked)
    aggregates["order_failures"] = sum(1 for t in checked if not t.order_ok)

    if config.mode is ExperimentMode.EXPECTATION_CHECK:
        aggregates.update(_expectation_aggregates(config, rows))
    elif config.mode is ExperimentMode.ORDER_CHECK:
        aggregates["order_passes"] = len(checked) - aggregates["order_failures"]
        aggregates["pass_fraction"] = _fraction([bool(t.order_ok) for t in checked])
    else:
        aggregates.update(_betti_aggregates(config, rows))

    conventions: Dict[str, Any] = {"z_threshold": Z_THRESHOLD, "c_n": 0}
    if config.mode is ExperimentMode.MAIN3:
        conventions.update(
            vanishing_fraction_threshold=VANISHING_THRESHOLD,
            complete_fraction_threshold=COMPLETE_THRESHOLD,
        )
        vanishing = aggregates.get("joint_vanishing_fraction")
        complete = aggregates["complete_fraction"]
        aggregates["meets_vanishing_threshold"] = vanishing is not None and vanishing >= VANISHING_THRESHOLD
        aggregates["meets_complete_threshold"] = complete is not None and complete >= COMPLETE_THRESHOLD
    elif config.mode in (ExperimentMode.CONJECTURE1_EVIDENCE, ExperimentMode.CONJECTURE2_EVIDENCE):
        conventions["evidence_only"] = True

    return ExperimentSummary(
        config=config,
        trials_run=len(rows),
        trials_skipped=len(trials) - len(rows),
        aggregates=aggregates,
        conventions=conventions,
        scope_note=SCOPE_NOTE,
    )


def _expectation_aggregates(config: GnpConfig, rows: Sequence[TrialResult]) -> Dict[str, Any]:
    n, k, p = config.n, config.k, config.p
    expected = expectation_eq7(n, p, k)
    stats = _mean_and_se([t.missing_k for t in rows])
    z = None
    if stats["se"]:
        z = (stats["mean"] - expected) / stats["se"]
    elif stats["mean"] is not None and stats["mean"] == expected:
        z = 0.0
    out: Dict[str, Any] = {
        "expected_missing_k": expected,
        "missing_k": stats,
        "z": z,
        "z_within_threshold": z is not None and abs(z) <= Z_THRESHOLD,
    }
    if k + 1 <= n - 1:
        expected_next = expectation_eq7(n, p, k + 1)
        out["expected_missing_k1"] = expected_next
        out["missing_k1"] = _mean_and_se([t.missing_k1 for t in rows])
        if k + 2 <= n:
            bound = (k + 2) / (n - k - 1)
            ratio = expected / expected_next if expected_next > 0 else None
            out["expected_ratio"] = ratio
            out["ratio_bound"] = bound
            out["ratio_ok"] = ratio is None or ratio <= bound * (1 + 1e-12)
    return out


def _betti_aggregates(config: GnpConfig, rows: Sequence[TrialResult]) -> Dict[str, Any]:
    n, k, p = config.n, config.k, config.p
    top = config.betti_top
    out: Dict[str, Any] = {
        "vanishing_fraction": {
            f"betti_{j}": _fraction([t.betti[j] == 0 for t in rows]) for j in range(top + 1)
        },
        "joint_vanishing_fraction": _fraction([all(b == 0 for b in t.betti) for t in rows]),
        "target_vanishing_fraction": _fraction([t.betti[top] == 0 for t in rows]),
    }
    if k + 2 <= n:
        hypothesis = expectation_eq7(n, p, k + 1)
        deltas = [t.delta_k for t in rows if t.delta_k is not None]
        stats = _mean_and_se(deltas)
        markov_bound = (k + 2) * hypothesis
        out.update(
            expected_missing_k1=hypothesis,
            delta=stats,
            delta_markov_bound=markov_bound,
            delta_markov_ok=(
                None if stats["mean"] is None else stats["mean"] <= markov_bound + Z_THRESHOLD * stats["se"]
            ),
            delta_chain_failures=sum(1 for t in rows if t.delta_chain_ok is False),
        )
    return out


def run_experiment(config: GnpConfig, workers: Optional[int] = None) -> ExperimentReport:
    """
    Run ``config.trials`` independent trials and aggregate them.

    Trial i always uses mix_seed(config.seed, i), so rows do not depend on
    the worker count or on completion order.

    Args:
        config: Validated experiment configuration
        workers: Process count (default from LAPBOUND_THREADS; 1 runs inline)

    Returns:
        ExperimentReport with rows sorted by trial index
    """
    started = time.perf_counter()
    workers = worker_count() if workers is None else workers
    if workers < 1:
        raise ValidationError("worker count must be >= 1", field="workers")
    indices = range(config.trials)
    logger.info(
        "experiment started",
        mode=config.mode.value,
        n=config.n,
        p=config.p,
        k=config.k,
        s=config.s,
        trials=config.trials,
        workers=workers,
    )
    if workers == 1 or config.trials == 1:
        trials: List[TrialResult] = [run_trial(config, i) for i in indices]
    else:
        chunksize = max(1, config.trials // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            trials = list(executor.map(run_trial, repeat(config), indices, chunksize=chunksize))
    trials.sort(key=lambda t: t.trial)

    summary = summarize(config, trials)
    summary.wall_clock_seconds = time.perf_counter() - started
    logger.info(
        "experiment finished",
        mode=config.mode.value,
        trials_run=summary.trials_run,
        skipped=summary.trials_skipped,
        seconds=round(summary.wall_clock_seconds, 3),
    )
    return ExperimentReport(config=config, trials=trials, summary=summary)


def csv_columns(config: GnpConfig) -> List[str]:
    top = config.betti_top
    betti = [f"betti_{j}" for j in range(top + 1)] if top is not None else []
    return (
        ["trial", "seed", "n", "p", "k", "s", "missing_k", "missing_k1"]
        + betti
        + ["delta_k", "graph_complete", "order_ok", "skipped"]
    )


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def render_trials_csv(report: ExperimentReport) -> str:
    """One row per trial; cells a mode does not compute are left blank."""
    columns = csv_columns(report.config)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for t in report.trials:
        row = {
            "trial": t.trial,
            "seed": t.seed,
            "n": t.n,
            "p": t.p,
            "k": t.k,
            "s": t.s,
            "missing_k": t.missing_k,
            "missing_k1": t.missing_k1,
            "delta_k": t.delta_k,
            "graph_complete": t.graph_complete,
            "order_ok": t.order_ok,
            "skipped": t.skipped,
        }
        for j, b in enumerate(t.betti):
            row[f"betti_{j}"] = b
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def write_report(
    report: ExperimentReport,
    csv_path: Optional[PathLike] = None,
    summary_path: Optional[PathLike] = None,
) -> None:
    """Write the per-trial CSV and the JSON summary, each atomically."""
    if csv_path is not None:
        atomic_write_text(csv_path, render_trials_csv(report))
    if summary_path is not None:
        write_json(summary_path, report.summary)
