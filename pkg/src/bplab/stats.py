"""Derivative sampling, summary statistics, decay-slope fits, and the
three-way plateau classifier.

Sampling is deterministic for a given master seed. VQE samples use one
derived RNG stream per sample index, so results are identical no matter how
the samples are chunked across worker processes. Toy-landscape sampling is a
single vectorized draw (no per-sample workers), which is trivially
chunking-independent.
"""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .ansatz import FAMILY_HEA, FAMILY_RPA, build_hea, build_rpa, cost_batch
from .landscapes import GaussianModel, derivative
from .sim import PauliObservable

SHIFT = np.pi / 2

TOY_DELTA_DEFAULT = 0.01
VQE_DELTA_DEFAULT = 0.1

VERDICT_DIP = "LOCALIZED_DIP"
VERDICT_GORGE = "LOCALIZED_GORGE"
VERDICT_FLAT = "EVERYWHERE_FLAT"
VERDICT_NONE = "NO_PLATEAU"

SCAN_CSV_HEADER = [
    "config_label",
    "n_or_sigma",
    "mean",
    "variance",
    "threshold_prob",
    "chebyshev_bound",
    "max_abs",
    "median_abs",
    "n_samples",
    "seed",
]
SCAN_CSV_SCHEMA = "scan-v1"


class SecondDirectionRequired(ValueError):
    """Raised when a dip/gorge call needs the transverse-direction scan."""


def derive_seed(*parts) -> int:
    """Collapse a tuple of integers into one reproducible master seed."""
    return int(np.random.SeedSequence(tuple(int(p) for p in parts)).generate_state(1)[0])


@dataclass
class DerivativeSampleSet:
    """Signed derivative samples for one landscape or circuit configuration."""

    samples: np.ndarray
    config_label: str
    master_seed: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.size == 0:
            raise ValueError("sample set must be non-empty")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("sample set contains non-finite values")


@dataclass
class StatsSummary:
    """Moments and threshold statistics of one derivative sample set."""

    mean: float
    variance: float
    threshold_prob: float
    chebyshev_bound: float
    delta: float
    n_samples: int
    max_abs: float
    median_abs: float


@dataclass
class SlopeFit:
    """Least-squares fit of ln(value) against system size N."""

    slope: float
    intercept: float
    r_squared: float
    points: tuple


@dataclass(frozen=True)
class ClassifierThresholds:
    """Decision constants for the plateau classifier; all adjustable.

    no_plateau_min_prob: exceedance rate at the working delta above which the
        landscape is declared trainable.
    tail_ratio_min: max|sample| / median|sample| above which the collapse is
        tail-dominated (rare large derivatives survive a flat bulk).
    gorge_axis_ratio_max: a tail-dominated scan is a gorge when the transverse
        direction's largest derivative is this much smaller than the scan
        direction's (contraction along one axis only); otherwise it is a dip.
    """

    no_plateau_min_prob: float = 0.01
    tail_ratio_min: float = 1e3
    gorge_axis_ratio_max: float = 0.02


@dataclass
class BpClassification:
    verdict: str
    evidence: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_toy_derivatives(
    model: GaussianModel,
    direction: str,
    n_samples: int,
    domain_halfwidth: float,
    master_seed: int,
) -> DerivativeSampleSet:
    """Analytic derivatives at (x, y) drawn uniformly from the square."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if domain_halfwidth <= 0:
        raise ValueError("domain_halfwidth must be positive")
    rng = np.random.default_rng((master_seed, 0))
    xy = rng.uniform(-domain_halfwidth, domain_halfwidth, size=(n_samples, 2))
    samples = derivative(model, xy[:, 0], xy[:, 1], direction=direction)
    label = (
        f"gauss-sx{model.sigma_x:g}-sy{model.sigma_y:g}-d{direction}"
        f"-hw{domain_halfwidth:g}"
    )
    return DerivativeSampleSet(samples, label, master_seed)


def _vqe_chunk(family, n_qubits, layers, obs, slot, master_seed, start, stop):
    """Derivatives for sample indices [start, stop); one RNG stream per index."""
    if family == FAMILY_HEA:
        circuit = build_hea(n_qubits, layers)
        d = circuit.param_count
        thetas = np.empty((stop - start, d))
        for i, k in enumerate(range(start, stop)):
            rng = np.random.default_rng((master_seed, k))
            thetas[i] = rng.uniform(0.0, 2.0 * np.pi, d)
        shifted = np.concatenate([thetas, thetas])
        shifted[: stop - start, slot] += SHIFT
        shifted[stop - start :, slot] -= SHIFT
        costs = cost_batch(circuit, shifted, obs)
        return (costs[: stop - start] - costs[stop - start :]) / 2.0
    out = np.empty(stop - start)
    for i, k in enumerate(range(start, stop)):
        rng = np.random.default_rng((master_seed, k))
        structure_seed = int(rng.integers(0, 2**63))
        circuit = build_rpa(n_qubits, layers, structure_seed)
        theta = rng.uniform(0.0, 2.0 * np.pi, circuit.param_count)
        pair = np.stack([theta, theta])
        pair[0, slot] += SHIFT
        pair[1, slot] -= SHIFT
        costs = cost_batch(circuit, pair, obs)
        out[i] = (costs[0] - costs[1]) / 2.0
    return out


def sample_vqe_derivatives(
    family: str,
    n_qubits: int,
    layers: int,
    obs: PauliObservable,
    direction_slot: int,
    n_samples: int,
    master_seed: int,
    workers: int = 1,
) -> DerivativeSampleSet:
    """Parameter-shift derivatives at uniformly random angles in [0, 2pi)^d.

    HEA keeps one fixed circuit; the RPA redraws its axis structure for every
    sample. Results do not depend on `workers`.
    """
    if family not in (FAMILY_HEA, FAMILY_RPA):
        raise ValueError(f"unknown family {family!r}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    d = 3 * n_qubits * layers if family == FAMILY_HEA else n_qubits * layers
    if not 0 <= direction_slot < d:
        raise ValueError(f"direction_slot {direction_slot} out of range for d={d}")
    args = (family, n_qubits, layers, obs, direction_slot, master_seed)
    if workers <= 1 or n_samples < 2 * workers:
        samples = _vqe_chunk(*args, 0, n_samples)
    else:
        bounds = np.linspace(0, n_samples, workers + 1, dtype=int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_vqe_chunk, *args, int(a), int(b))
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            samples = np.concatenate([f.result() for f in futures])
    label = f"{family}-N{n_qubits}-L{layers}-slot{direction_slot}"
    return DerivativeSampleSet(samples, label, master_seed)


# ---------------------------------------------------------------------------
# Summaries and fits
# ---------------------------------------------------------------------------

def summarize(sample_set: DerivativeSampleSet, delta: float) -> StatsSummary:
    """Mean, population variance, exceedance rate and Chebyshev bound."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    s = sample_set.samples
    abs_s = np.abs(s)
    variance = float(np.var(s))
    return StatsSummary(
        mean=float(np.mean(s)),
        variance=variance,
        threshold_prob=float(np.mean(abs_s >= delta)),
        chebyshev_bound=variance / delta**2,
        delta=delta,
        n_samples=int(s.size),
        max_abs=float(abs_s.max()),
        median_abs=float(np.median(abs_s)),
    )


def fit_log_slope(points) -> SlopeFit:
    """Ordinary least squares of ln(value) against N for (N, value) pairs."""
    pts = [(int(n), float(v)) for n, v in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    values = np.array([v for _, v in pts])
    if np.any(values <= 0):
        raise ValueError("all values must be strictly positive for a log fit")
    ns = np.array([n for n, _ in pts], dtype=float)
    logs = np.log(values)
    slope, intercept = np.polyfit(ns, logs, 1)
    residuals = logs - (slope * ns + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    if ss_tot < 1e-30:
        r_squared = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r_squared = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        points=tuple(pts),
    )


def slope_fit_to_json(fit: SlopeFit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "points": [[n, v] for n, v in fit.points],
    }


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def _tail_ratio(summary: StatsSummary) -> float:
    if summary.median_abs > 0:
        with np.errstate(over="ignore"):
            return float(summary.max_abs / summary.median_abs)
    return float("inf") if summary.max_abs > 0 else 0.0


def classify_landscape(
    summary: StatsSummary,
    second_direction: StatsSummary | None = None,
    thresholds: ClassifierThresholds = ClassifierThresholds(),
) -> BpClassification:
    """Classify one landscape configuration from its derivative statistics.

    Rule: a healthy exceedance rate means no plateau; a collapsed bulk with
    surviving large outliers is a dip or gorge, told apart by whether the
    transverse direction's strongest derivative lives on the same scale
    (dip) or is orders of magnitude weaker (gorge); anything else is
    everywhere-flat.

    For the dip/gorge comparison the second-direction scan must be paired
    with the first: same sample locations, i.e. the same master seed. The
    extreme derivatives of a near-collapsed landscape are dominated by the
    few samples closest to the feature, so unpaired maxima are incomparable.
    """
    ratio = _tail_ratio(summary)
    evidence = {
        "threshold_prob": summary.threshold_prob,
        "max_abs": summary.max_abs,
        "median_abs": summary.median_abs,
        "tail_ratio": ratio,
        "delta": summary.delta,
        "thresholds": asdict(thresholds),
    }
    if summary.threshold_prob >= thresholds.no_plateau_min_prob:
        return BpClassification(VERDICT_NONE, evidence)
    if summary.max_abs > 0 and ratio >= thresholds.tail_ratio_min:
        if second_direction is None:
            raise SecondDirectionRequired(
                "dip and gorge are indistinguishable without a second-direction scan"
            )
        axis_ratio = second_direction.max_abs / max(
            summary.max_abs, np.finfo(float).tiny
        )
        evidence["second_max_abs"] = second_direction.max_abs
        evidence["axis_ratio"] = axis_ratio
        if axis_ratio <= thresholds.gorge_axis_ratio_max:
            return BpClassification(VERDICT_GORGE, evidence)
        return BpClassification(VERDICT_DIP, evidence)
    return BpClassification(VERDICT_FLAT, evidence)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_scan_csv(path, rows) -> None:
    """Write (config_label, n_or_sigma, StatsSummary, seed) rows as CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCAN_CSV_HEADER)
        for label, key, summary, seed in rows:
            writer.writerow(
                [
                    label,
                    format_float(key) if isinstance(key, float) else key,
                    format_float(summary.mean),
                    format_float(summary.variance),
                    format_float(summary.threshold_prob),
                    format_float(summary.chebyshev_bound),
                    format_float(summary.max_abs),
                    format_float(summary.median_abs),
                    summary.n_samples,
                    seed,
                ]
            )
