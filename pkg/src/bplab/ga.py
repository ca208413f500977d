"""Genetic search over the RPA's axis-choice structure.

The fitness of a structure is the Lp norm of the parameter-shift gradient
vector averaged over freshly drawn random angles, subject to every sampled
|dC/dtheta_i| clearing a trainability floor epsilon. Only the structure
evolves; angles are always resampled. The best individual is carried into
the next generation unchanged, so the best-fitness history is monotone.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import Circuit, RpaStructure, build_rpa_from_structure, circuit_to_json
from .gradients import gradient_batch
from .sim import PauliObservable

# sub-stream tags under the master seed
_STREAM_INIT = 1
_STREAM_FITNESS = 2
_STREAM_EVOLVE = 3
_STREAM_COMPARE = 4

_PLATEAU_WINDOW = 10
_PLATEAU_RELTOL = 1e-3

_GA_SCHEMA = 1


@dataclass(frozen=True)
class GaConfig:
    n_qubits: int
    layers: int
    population_size: int = 20
    generations: int = 200
    mutation_rate: float = 0.05
    p: float = 1.0
    epsilon: float = 0.05
    theta_samples_per_eval: int = 20
    master_seed: int = 0

    def __post_init__(self):
        if self.n_qubits < 1 or self.layers < 1:
            raise ValueError("n_qubits and layers must be >= 1")
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.p < 1:
            raise ValueError("norm order p must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.theta_samples_per_eval < 1:
            raise ValueError("theta_samples_per_eval must be >= 1")


@dataclass
class Individual:
    structure: RpaStructure
    fitness: float
    constraint_ok: bool
    eval_seed: int


@dataclass
class GaResult:
    config: GaConfig
    best_per_generation: list[Individual] = field(default_factory=list)
    fitness_history: list[float] = field(default_factory=list)
    final_circuit: Circuit | None = None


def lp_norm(values, p: float) -> float:
    """(sum |v_i|^p)^(1/p)."""
    v = np.abs(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0.0
    if p == 1:
        return float(v.sum())
    return float((v**p).sum() ** (1.0 / p))


def fitness(
    structure: RpaStructure,
    config: GaConfig,
    obs: PauliObservable,
    eval_seed: int = 0,
) -> tuple[float, bool]:
    """Mean gradient Lp norm over sampled angles, plus the trainability flag.

    constraint_ok is the finite-sample surrogate of "every direction's
    derivative magnitude is at least epsilon with probability one": every
    sampled |dC/dtheta_i| must clear epsilon.
    """
    if structure.n_qubits != config.n_qubits or structure.layers != config.layers:
        raise ValueError("structure dimensions do not match the configuration")
    circuit = build_rpa_from_structure(structure)
    rng = np.random.default_rng((config.master_seed, _STREAM_FITNESS, eval_seed))
    thetas = rng.uniform(
        0.0, 2.0 * np.pi, (config.theta_samples_per_eval, circuit.param_count)
    )
    grads = gradient_batch(circuit, thetas, obs)
    abs_grads = np.abs(grads)
    if config.p == 1:
        norms = abs_grads.sum(axis=1)
    else:
        norms = (abs_grads**config.p).sum(axis=1) ** (1.0 / config.p)
    return float(norms.mean()), bool((abs_grads >= config.epsilon).all())


def select_parents(population) -> tuple[Individual, Individual]:
    """The two fittest individuals; ties broken by lower population index."""
    if len(population) < 2:
        raise ValueError("need a population of at least two")
    order = sorted(
        range(len(population)), key=lambda i: (-population[i].fitness, i)
    )
    return population[order[0]], population[order[1]]


def crossover(a: RpaStructure, b: RpaStructure, seed) -> RpaStructure:
    """Single-point layer crossover: layers [0, cut) from a, [cut, L) from b."""
    if a.layers != b.layers or a.n_qubits != b.n_qubits:
        raise ValueError("parent structures must have equal dimensions")
    if a.layers == 1:
        return a
    cut = int(np.random.default_rng(seed).integers(1, a.layers))
    return RpaStructure(a.choices[:cut] + b.choices[cut:])


def mutate(structure: RpaStructure, rate: float, seed) -> RpaStructure:
    """Replace each axis label with a different one with probability `rate`."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must be in [0, 1]")
    rng = np.random.default_rng(seed)
    flip = rng.random((structure.layers, structure.n_qubits)) < rate
    pick = rng.integers(0, 2, size=flip.shape)
    rows = []
    for i, row in enumerate(structure.choices):
        new_row = []
        for j, label in enumerate(row):
            if flip[i, j]:
                others = [p for p in ("X", "Y", "Z") if p != label]
                new_row.append(others[pick[i, j]])
            else:
                new_row.append(label)
        rows.append(tuple(new_row))
    return RpaStructure(tuple(rows))


def _evaluate(population, config, obs, pool):
    pending = [ind for ind in population if np.isnan(ind.fitness)]
    if not pending:
        return
    if pool is not None and len(pending) > 1:
        futures = [
            pool.submit(fitness, ind.structure, config, obs, ind.eval_seed)
            for ind in pending
        ]
        results = [f.result() for f in futures]
    else:
        results = [
            fitness(ind.structure, config, obs, ind.eval_seed) for ind in pending
        ]
    for ind, (fit, ok) in zip(pending, results):
        ind.fitness = fit
        ind.constraint_ok = ok


def _plateaued(history) -> bool:
    if len(history) <= _PLATEAU_WINDOW:
        return False
    old = history[-1 - _PLATEAU_WINDOW]
    return history[-1] - old < _PLATEAU_RELTOL * max(abs(old), np.finfo(float).tiny)


def evolve(config: GaConfig, obs: PauliObservable, workers: int = 1) -> GaResult:
    """Run the generational loop and return the best structure found.

    Stops after `generations` rounds, or earlier once the best individual is
    trainable everywhere and its fitness has plateaued.
    """
    population = [
        Individual(
            structure=RpaStructure.random(
                config.n_qubits, config.layers, (config.master_seed, _STREAM_INIT, i)
            ),
            fitness=float("nan"),
            constraint_ok=False,
            eval_seed=i,
        )
        for i in range(config.population_size)
    ]
    next_eval_seed = config.population_size
    breed_rng = np.random.default_rng((config.master_seed, _STREAM_EVOLVE))
    result = GaResult(config=config)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for _ in range(config.generations):
            _evaluate(population, config, obs, pool)
            best = max(population, key=lambda ind: ind.fitness)
            result.best_per_generation.append(best)
            result.fitness_history.append(best.fitness)
            if best.constraint_ok and _plateaued(result.fitness_history):
                break
            parent_a, parent_b = select_parents(population)
            children = []
            for _ in range(config.population_size - 1):
                cross_seed, mut_seed = (int(s) for s in breed_rng.integers(0, 2**63, 2))
                # alternate which parent contributes the leading layers so
                # both tails stay reachable through recombination
                pair = (parent_a, parent_b) if cross_seed & 1 else (parent_b, parent_a)
                child = mutate(
                    crossover(pair[0].structure, pair[1].structure, cross_seed),
                    config.mutation_rate,
                    mut_seed,
                )
                children.append(
                    Individual(child, float("nan"), False, eval_seed=next_eval_seed)
                )
                next_eval_seed += 1
            population = [best] + children
    finally:
        if pool is not None:
            pool.shutdown()
    final_best = result.best_per_generation[-1]
    result.final_circuit = build_rpa_from_structure(final_best.structure)
    return result


def average_abs_gradient(
    circuit: Circuit, obs: PauliObservable, n_samples: int, master_seed: int
) -> float:
    """Mean of |dC/dtheta_i| over all slots and freshly sampled angles."""
    rng = np.random.default_rng((master_seed, _STREAM_COMPARE))
    thetas = rng.uniform(0.0, 2.0 * np.pi, (n_samples, circuit.param_count))
    return float(np.abs(gradient_batch(circuit, thetas, obs)).mean())


def ga_result_to_json(result: GaResult) -> dict:
    config = result.config
    return {
        "schema_version": _GA_SCHEMA,
        "config": {
            "n_qubits": config.n_qubits,
            "layers": config.layers,
            "population_size": config.population_size,
            "generations": config.generations,
            "mutation_rate": config.mutation_rate,
            "p": config.p,
            "epsilon": config.epsilon,
            "theta_samples_per_eval": config.theta_samples_per_eval,
            "master_seed": config.master_seed,
        },
        "fitness_history": list(result.fitness_history),
        "constraint_ok_history": [
            ind.constraint_ok for ind in result.best_per_generation
        ],
        "final_structure": [list(row) for row in result.final_circuit.structure.choices],
        "final_circuit": circuit_to_json(result.final_circuit),
    }
