"""Command-line experiment runner.

Each subcommand runs one seeded experiment end to end and writes plot-ready
CSV plus JSON results and a manifest echoing every resolved setting.
Identical configurations reproduce byte-identical numeric output.

Exit codes: 0 success, 2 configuration error, 3 runtime numerical error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .ansatz import FAMILY_HEA, FAMILY_RPA, build_family, cost_batch
from .ga import GaConfig, average_abs_gradient, evolve, ga_result_to_json
from .landscapes import GaussianModel, derivative_variance, exceedance_probability
from .sim import PauliObservable, zz_observable
from .stats import (
    SCAN_CSV_SCHEMA,
    classify_landscape,
    derive_seed,
    fit_log_slope,
    format_float,
    sample_toy_derivatives,
    sample_vqe_derivatives,
    slope_fit_to_json,
    summarize,
    write_scan_csv,
)

MANIFEST_SCHEMA = 1
RESULT_SCHEMA = 1

LANDSCAPE_CSV_HEADER = ["family", "n_qubits", "layers", "slot", "theta", "cost", "seed"]
LANDSCAPE_CSV_SCHEMA = "landscape-v1"
DEPTH_CSV_HEADER = [
    "family",
    "n_qubits",
    "layers",
    "mean",
    "variance",
    "threshold_prob",
    "chebyshev_bound",
    "max_abs",
    "median_abs",
    "n_samples",
    "seed",
]
DEPTH_CSV_SCHEMA = "depth-v1"
DIRECTION_CSV_HEADER = [
    "family",
    "slot",
    "n_qubits",
    "mean",
    "variance",
    "threshold_prob",
    "chebyshev_bound",
    "max_abs",
    "median_abs",
    "n_samples",
    "seed",
]
DIRECTION_CSV_SCHEMA = "direction-v1"
GA_CSV_HEADER = ["generation", "best_fitness", "constraint_ok"]
GA_CSV_SCHEMA = "ga-history-v1"

# The benchmark pairs one Z-pair observable with the slot-0 derivative
# direction. "zz-last" pins the pair to each system's last two qubits, the
# far end of the CZ chain from qubit 0; "zz-first" pins it to qubits 0 and 1.
# An explicit term list (same JSON shape as PauliObservable.to_json) fixes
# one observable for every system size.
DEFAULT_OBSERVABLE = "zz-last"
OBSERVABLE_PRESETS = ("zz-last", "zz-first")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    output_dir: str


# ---------------------------------------------------------------------------
# Experiment defaults; every key is overridable from a config file or
# --key=value and the resolved values all land in the manifest.
# ---------------------------------------------------------------------------

DEFAULTS = {
    "gaussian-scan": {
        "sigma_min": 0.01,
        "sigma_max": 100.0,
        "n_sigma": 41,
        "sigma_y": None,
        "delta": 0.01,
        "n_samples": 100000,
        "domain_halfwidth": 20.0,
        "seed": 0,
        "workers": 1,
    },
    "vqe-landscape": {
        "family": "HEA",
        "n_list": [2, 4, 6, 8, 10],
        "layers": 20,
        "slot": 0,
        "n_points": 256,
        "observable": DEFAULT_OBSERVABLE,
        "seed": 0,
        "workers": 1,
    },
    "gradient-stats": {
        "families": ["HEA", "RPA"],
        "n_min": 2,
        "n_max": 10,
        "layers": 20,
        "slot": 0,
        "n_samples": 100,
        "delta": 0.1,
        "observable": DEFAULT_OBSERVABLE,
        "seed": 0,
        "workers": None,
    },
    "direction-scan": {
        "families": ["HEA", "RPA"],
        "slots": [0, 1, 2, 3, 4, 5],
        "n_min": 2,
        "n_max": 8,
        "layers": 20,
        "n_samples": 100,
        "delta": 0.1,
        "observable": DEFAULT_OBSERVABLE,
        "seed": 0,
        "workers": None,
    },
    "depth-scan": {
        "families": ["HEA", "RPA"],
        "n_list": [2, 10],
        "l_min": 2,
        "l_max": 50,
        "l_step": 2,
        "slot": 0,
        "n_samples": 100,
        "delta": 0.1,
        "observable": DEFAULT_OBSERVABLE,
        "seed": 0,
        "workers": None,
    },
    "ga-optimize": {
        "n_qubits": 4,
        "layers": 20,
        "population_size": 20,
        "generations": 200,
        "mutation_rate": 0.05,
        "p": 1.0,
        "epsilon": 0.05,
        "theta_samples_per_eval": 20,
        "comparison_samples": 100,
        "observable": DEFAULT_OBSERVABLE,
        "seed": 0,
        "workers": 1,
    },
    "classify": {
        "sigma_x": 1.0,
        "sigma_y": None,
        "delta": 0.01,
        "n_samples": 100000,
        "domain_halfwidth": 20.0,
        "seed": 0,
        "workers": 1,
    },
}

EXPERIMENTS = tuple(DEFAULTS)


def _require(cond, message):
    if not cond:
        raise ConfigError(message)


def _as_int(params, key, minimum=None):
    v = params[key]
    _require(isinstance(v, int) and not isinstance(v, bool), f"{key} must be an integer")
    if minimum is not None:
        _require(v >= minimum, f"{key} must be >= {minimum}")
    return v


def _as_number(params, key, positive=False):
    v = params[key]
    _require(
        isinstance(v, (int, float)) and not isinstance(v, bool),
        f"{key} must be a number",
    )
    if positive:
        _require(v > 0, f"{key} must be positive")
    return float(v)


def _check_observable(params, min_qubits):
    spec = params["observable"]
    if isinstance(spec, str):
        _require(
            spec in OBSERVABLE_PRESETS,
            f"observable preset must be one of {OBSERVABLE_PRESETS}, got {spec!r}",
        )
        _require(min_qubits >= 2, "Z-pair observables need at least two qubits")
        return
    try:
        obs = PauliObservable.from_json(spec)
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        raise ConfigError(f"invalid observable: {exc}") from exc
    _require(
        obs.max_qubit < min_qubits,
        f"observable touches qubit {obs.max_qubit} but the smallest system has "
        f"{min_qubits} qubits",
    )


def resolve_observable(spec, n_qubits) -> PauliObservable:
    """Materialize an observable setting for one system size."""
    if isinstance(spec, str):
        if spec == "zz-last":
            return zz_observable(n_qubits - 2, n_qubits - 1)
        if spec == "zz-first":
            return zz_observable(0, 1)
        raise ValueError(f"unknown observable preset {spec!r}")
    return PauliObservable.from_json(spec)


def _check_families(params):
    fams = params["families"]
    _require(
        isinstance(fams, list) and fams and all(f in (FAMILY_HEA, FAMILY_RPA) for f in fams),
        "families must be a non-empty list drawn from ['HEA', 'RPA']",
    )
    return fams


def _sigma_grid(params):
    lo = _as_number(params, "sigma_min", positive=True)
    hi = _as_number(params, "sigma_max", positive=True)
    n = _as_int(params, "n_sigma")
    _require(n >= 1, "n_sigma must be >= 1 (empty sigma grid)")
    _require(lo <= hi, "sigma_min must not exceed sigma_max")
    return np.geomspace(lo, hi, n)


def validate(config: ExperimentConfig):
    """Raise ConfigError unless the resolved parameters are usable."""
    exp, params = config.experiment, config.params
    _require(exp in DEFAULTS, f"unknown experiment {exp!r}")
    unknown = set(params) - set(DEFAULTS[exp])
    _require(not unknown, f"unknown parameter(s) for {exp}: {sorted(unknown)}")
    _require(isinstance(params["seed"], int), "seed must be an integer")
    if params.get("workers") is not None:
        _as_int(params, "workers", minimum=1)
    if exp in ("gaussian-scan", "classify"):
        if exp == "gaussian-scan":
            _sigma_grid(params)
        else:
            _as_number(params, "sigma_x", positive=True)
        if params["sigma_y"] is not None:
            _as_number(params, "sigma_y", positive=True)
        _as_number(params, "delta", positive=True)
        _as_number(params, "domain_halfwidth", positive=True)
        _as_int(params, "n_samples", minimum=1)
    elif exp == "vqe-landscape":
        _require(params["family"] in (FAMILY_HEA, FAMILY_RPA), "family must be HEA or RPA")
        n_list = params["n_list"]
        _require(
            isinstance(n_list, list) and n_list and all(isinstance(n, int) and n >= 1 for n in n_list),
            "n_list must be a non-empty list of positive integers",
        )
        _as_int(params, "layers", minimum=1)
        _as_int(params, "n_points", minimum=2)
        slot = _as_int(params, "slot", minimum=0)
        d_min = min(n_list) * params["layers"] * (3 if params["family"] == FAMILY_HEA else 1)
        _require(slot < d_min, f"slot {slot} out of range for the smallest system (d={d_min})")
        _check_observable(params, min(n_list))
    elif exp in ("gradient-stats", "direction-scan"):
        _check_families(params)
        n_min = _as_int(params, "n_min", minimum=1)
        n_max = _as_int(params, "n_max", minimum=1)
        _require(n_min <= n_max, "n_min must not exceed n_max")
        layers = _as_int(params, "layers", minimum=1)
        _as_int(params, "n_samples", minimum=1)
        _as_number(params, "delta", positive=True)
        slots = params["slots"] if exp == "direction-scan" else [params["slot"]]
        _require(
            isinstance(slots, list) and slots and all(isinstance(s, int) and s >= 0 for s in slots),
            "slots must be nonnegative integers",
        )
        d_min = n_min * layers  # RPA has the fewer parameters
        for s in slots:
            _require(s < d_min, f"slot {s} out of range for the smallest system (d={d_min})")
        _check_observable(params, n_min)
    elif exp == "depth-scan":
        _check_families(params)
        n_list = params["n_list"]
        _require(
            isinstance(n_list, list) and n_list and all(isinstance(n, int) and n >= 1 for n in n_list),
            "n_list must be a non-empty list of positive integers",
        )
        l_min = _as_int(params, "l_min", minimum=1)
        l_max = _as_int(params, "l_max", minimum=1)
        _as_int(params, "l_step", minimum=1)
        _require(l_min <= l_max, "l_min must not exceed l_max")
        _as_int(params, "n_samples", minimum=1)
        _as_number(params, "delta", positive=True)
        slot = _as_int(params, "slot", minimum=0)
        _require(slot < min(n_list) * l_min, "slot out of range for the smallest system")
        _check_observable(params, min(n_list))
    elif exp == "ga-optimize":
        try:
            GaConfig(
                n_qubits=_as_int(params, "n_qubits", minimum=1),
                layers=_as_int(params, "layers", minimum=1),
                population_size=_as_int(params, "population_size", minimum=2),
                generations=_as_int(params, "generations", minimum=1),
                mutation_rate=_as_number(params, "mutation_rate"),
                p=_as_number(params, "p"),
                epsilon=_as_number(params, "epsilon"),
                theta_samples_per_eval=_as_int(params, "theta_samples_per_eval", minimum=1),
                master_seed=params["seed"],
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        _as_int(params, "comparison_samples", minimum=1)
        _check_observable(params, params["n_qubits"])


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------

def _effective_workers(params):
    w = params.get("workers")
    return os.cpu_count() or 1 if w is None else w


def _toy_scan(model, delta, n_samples, halfwidth, seed, tag):
    # both directions share one seed: the x and y derivatives are evaluated
    # at the same sampled points, which the dip/gorge comparison requires
    row_seed = derive_seed(seed, tag)
    per_direction = {}
    for direction in ("x", "y"):
        sample_set = sample_toy_derivatives(model, direction, n_samples, halfwidth, row_seed)
        per_direction[direction] = (sample_set, summarize(sample_set, delta), row_seed)
    return per_direction


def run_gaussian_scan(params, out_base):
    sigmas = _sigma_grid(params)
    sigma_y = params["sigma_y"]
    delta = params["delta"]
    halfwidth = params["domain_halfwidth"]
    rows = []
    report = []
    for i, sigma in enumerate(sigmas):
        model = (
            GaussianModel.isotropic(sigma)
            if sigma_y is None
            else GaussianModel(sigma, float(sigma_y))
        )
        scans = _toy_scan(model, delta, params["n_samples"], halfwidth, params["seed"], i)
        x_set, x_summary, x_seed = scans["x"]
        _, y_summary, y_seed = scans["y"]
        rows.append((x_set.config_label, float(sigma), x_summary, x_seed))
        rows.append((scans["y"][0].config_label, float(sigma), y_summary, y_seed))
        verdict = classify_landscape(x_summary, second_direction=y_summary)
        prob_quad = exceedance_probability(model, delta, halfwidth)
        var_quad = derivative_variance(model, halfwidth)
        bound_quad = var_quad / delta**2
        report.append(
            {
                "sigma": float(sigma),
                "sigma_y": float(model.sigma_y),
                "verdict": verdict.verdict,
                "empirical_prob": x_summary.threshold_prob,
                "empirical_bound": x_summary.chebyshev_bound,
                "quadrature_prob": prob_quad,
                "quadrature_variance": var_quad,
                "quadrature_bound": bound_quad,
                "prob_exceeds_bound": x_summary.threshold_prob > bound_quad,
            }
        )
    write_scan_csv(out_base + ".csv", rows)
    result = {
        "schema_version": RESULT_SCHEMA,
        "csv_schema": SCAN_CSV_SCHEMA,
        "per_sigma": report,
    }
    return result, [out_base + ".csv"]


def run_classify(params, out_base):
    sigma_x = params["sigma_x"]
    sigma_y = params["sigma_y"]
    model = (
        GaussianModel.isotropic(sigma_x)
        if sigma_y is None
        else GaussianModel(float(sigma_x), float(sigma_y))
    )
    scans = _toy_scan(
        model, params["delta"], params["n_samples"], params["domain_halfwidth"], params["seed"], 0
    )
    _, x_summary, _ = scans["x"]
    _, y_summary, _ = scans["y"]
    verdict = classify_landscape(x_summary, second_direction=y_summary)
    result = {
        "schema_version": RESULT_SCHEMA,
        "verdict": verdict.verdict,
        "evidence": verdict.evidence,
        "x_summary": asdict(x_summary),
        "y_summary": asdict(y_summary),
    }
    return result, []


def run_vqe_landscape(params, out_base):
    family = params["family"]
    layers = params["layers"]
    slot = params["slot"]
    thetas = np.linspace(0.0, 2.0 * np.pi, params["n_points"], endpoint=False)
    with open(out_base + ".csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LANDSCAPE_CSV_HEADER)
        for n in params["n_list"]:
            row_seed = derive_seed(params["seed"], n)
            rng = np.random.default_rng((row_seed, 0))
            structure_seed = int(rng.integers(0, 2**63))
            circuit = build_family(family, n, layers, structure_seed)
            base = rng.uniform(0.0, 2.0 * np.pi, circuit.param_count)
            batch = np.broadcast_to(base, (thetas.size, base.size)).copy()
            batch[:, slot] = thetas
            costs = cost_batch(circuit, batch, resolve_observable(params["observable"], n))
            for theta, c in zip(thetas, costs):
                writer.writerow(
                    [family, n, layers, slot, format_float(theta), format_float(c), row_seed]
                )
    result = {"schema_version": RESULT_SCHEMA, "csv_schema": LANDSCAPE_CSV_SCHEMA}
    return result, [out_base + ".csv"]


def _vqe_scan_rows(families, n_values, layers, slot, params):
    workers = _effective_workers(params)
    for family in families:
        for n in n_values:
            obs = resolve_observable(params["observable"], n)
            row_seed = derive_seed(params["seed"], family == FAMILY_RPA, slot, n)
            sample_set = sample_vqe_derivatives(
                family, n, layers, obs, slot, params["n_samples"], row_seed, workers=workers
            )
            yield family, n, summarize(sample_set, params["delta"]), row_seed


def run_gradient_stats(params, out_base):
    families = params["families"]
    n_values = list(range(params["n_min"], params["n_max"] + 1))
    rows = []
    per_family = {f: [] for f in families}
    for family, n, summary, row_seed in _vqe_scan_rows(
        families, n_values, params["layers"], params["slot"], params
    ):
        rows.append((f"{family}-N{n}-L{params['layers']}-slot{params['slot']}", n, summary, row_seed))
        per_family[family].append((n, summary))
    write_scan_csv(out_base + ".csv", rows)
    fits = {}
    first_zero = {}
    for family, entries in per_family.items():
        fits[family] = slope_fit_to_json(
            fit_log_slope([(n, s.variance) for n, s in entries])
        )
        zeros = [n for n, s in entries if s.threshold_prob == 0.0]
        first_zero[family] = min(zeros) if zeros else None
    result = {
        "schema_version": RESULT_SCHEMA,
        "csv_schema": SCAN_CSV_SCHEMA,
        "variance_slope_fits": fits,
        "first_zero_threshold_n": first_zero,
    }
    return result, [out_base + ".csv"]


def run_direction_scan(params, out_base):
    families = params["families"]
    n_values = list(range(params["n_min"], params["n_max"] + 1))
    fits = {f: {} for f in families}
    with open(out_base + ".csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DIRECTION_CSV_HEADER)
        for slot in params["slots"]:
            for family, n, summary, row_seed in _vqe_scan_rows(
                families, n_values, params["layers"], slot, params
            ):
                writer.writerow(
                    [
                        family,
                        slot,
                        n,
                        format_float(summary.mean),
                        format_float(summary.variance),
                        format_float(summary.threshold_prob),
                        format_float(summary.chebyshev_bound),
                        format_float(summary.max_abs),
                        format_float(summary.median_abs),
                        summary.n_samples,
                        row_seed,
                    ]
                )
                fits[family].setdefault(slot, []).append((n, summary.variance))
    slope_fits = {
        family: {str(slot): slope_fit_to_json(fit_log_slope(pts)) for slot, pts in by_slot.items()}
        for family, by_slot in fits.items()
    }
    result = {
        "schema_version": RESULT_SCHEMA,
        "csv_schema": DIRECTION_CSV_SCHEMA,
        "variance_slope_fits": slope_fits,
    }
    return result, [out_base + ".csv"]


def run_depth_scan(params, out_base):
    families = params["families"]
    depths = list(range(params["l_min"], params["l_max"] + 1, params["l_step"]))
    workers = _effective_workers(params)
    with open(out_base + ".csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DEPTH_CSV_HEADER)
        for family in families:
            for n in params["n_list"]:
                obs = resolve_observable(params["observable"], n)
                for layers in depths:
                    row_seed = derive_seed(params["seed"], family == FAMILY_RPA, n, layers)
                    sample_set = sample_vqe_derivatives(
                        family,
                        n,
                        layers,
                        obs,
                        params["slot"],
                        params["n_samples"],
                        row_seed,
                        workers=workers,
                    )
                    summary = summarize(sample_set, params["delta"])
                    writer.writerow(
                        [
                            family,
                            n,
                            layers,
                            format_float(summary.mean),
                            format_float(summary.variance),
                            format_float(summary.threshold_prob),
                            format_float(summary.chebyshev_bound),
                            format_float(summary.max_abs),
                            format_float(summary.median_abs),
                            summary.n_samples,
                            row_seed,
                        ]
                    )
    result = {"schema_version": RESULT_SCHEMA, "csv_schema": DEPTH_CSV_SCHEMA}
    return result, [out_base + ".csv"]


def run_ga_optimize(params, out_base):
    obs = resolve_observable(params["observable"], params["n_qubits"])
    config = GaConfig(
        n_qubits=params["n_qubits"],
        layers=params["layers"],
        population_size=params["population_size"],
        generations=params["generations"],
        mutation_rate=params["mutation_rate"],
        p=params["p"],
        epsilon=params["epsilon"],
        theta_samples_per_eval=params["theta_samples_per_eval"],
        master_seed=params["seed"],
    )
    ga_result = evolve(config, obs, workers=_effective_workers(params))
    compare_seed = derive_seed(params["seed"], 1)
    baseline_seed = derive_seed(params["seed"], 2)
    baseline = build_family(FAMILY_RPA, config.n_qubits, config.layers, baseline_seed)
    evolved_mean = average_abs_gradient(
        ga_result.final_circuit, obs, params["comparison_samples"], compare_seed
    )
    baseline_mean = average_abs_gradient(
        baseline, obs, params["comparison_samples"], compare_seed
    )
    with open(out_base + ".csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GA_CSV_HEADER)
        for gen, (fit, ind) in enumerate(
            zip(ga_result.fitness_history, ga_result.best_per_generation)
        ):
            writer.writerow([gen, format_float(fit), int(ind.constraint_ok)])
    result = ga_result_to_json(ga_result)
    result["csv_schema"] = GA_CSV_SCHEMA
    result["comparison"] = {
        "n_theta_samples": params["comparison_samples"],
        "evolved_mean_abs_gradient": evolved_mean,
        "random_baseline_mean_abs_gradient": baseline_mean,
        "baseline_structure_seed": baseline_seed,
    }
    return result, [out_base + ".csv"]


RUNNERS = {
    "gaussian-scan": run_gaussian_scan,
    "vqe-landscape": run_vqe_landscape,
    "gradient-stats": run_gradient_stats,
    "direction-scan": run_direction_scan,
    "depth-scan": run_depth_scan,
    "ga-optimize": run_ga_optimize,
    "classify": run_classify,
}


# ---------------------------------------------------------------------------
# Config assembly and entry point
# ---------------------------------------------------------------------------

def config_hash(config: ExperimentConfig) -> str:
    blob = json.dumps(
        {"experiment": config.experiment, "params": config.params}, sort_keys=True
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def run(config: ExperimentConfig) -> dict:
    """Validate, execute, and persist one experiment; returns the manifest."""
    validate(config)
    os.makedirs(config.output_dir, exist_ok=True)
    digest = config_hash(config)
    out_base = os.path.join(config.output_dir, f"{config.experiment}-{digest}")
    result, artifacts = RUNNERS[config.experiment](config.params, out_base)
    result_path = out_base + ".json"
    with open(result_path, "w") as fh:
        json.dump(result, fh, indent=2)
    artifacts = artifacts + [result_path]
    manifest = {
        "schema_version": MANIFEST_SCHEMA,
        "package_version": __version__,
        "experiment": config.experiment,
        "config_hash": digest,
        "params": config.params,
        "output_dir": config.output_dir,
        "artifacts": [os.path.basename(p) for p in artifacts],
    }
    manifest_path = out_base + "-manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    manifest["manifest_path"] = manifest_path
    return manifest


def _parse_override(token):
    if not token.startswith("--") or "=" not in token:
        raise ConfigError(
            f"unrecognized argument {token!r}; overrides take the form --key=value"
        )
    key, raw = token[2:].split("=", 1)
    key = key.replace("-", "_")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def build_config(argv) -> ExperimentConfig:
    parser = argparse.ArgumentParser(
        prog="bplab",
        description="Seeded barren-plateau statistics experiments",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--output-dir", default="results")
    args, extra = parser.parse_known_args(argv)
    params = dict(DEFAULTS[args.experiment])
    if args.config is not None:
        try:
            with open(args.config) as fh:
                file_params = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(file_params, dict):
            raise ConfigError("config file must hold a JSON object")
        params.update(file_params)
    for token in extra:
        key, value = _parse_override(token)
        params[key] = value
    if args.seed is not None:
        params["seed"] = args.seed
    if args.workers is not None:
        params["workers"] = args.workers
    return ExperimentConfig(args.experiment, params, args.output_dir)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = build_config(argv)
        validate(config)
    except ConfigError as exc:
        json.dump({"error": {"type": "config", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    try:
        manifest = run(config)
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        json.dump({"error": {"type": "runtime", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    json.dump(manifest, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
