import json

import numpy as np
import pytest

from bplab.ansatz import RpaStructure, build_rpa, build_rpa_from_structure, circuit_from_json
from bplab.ga import (
    GaConfig,
    Individual,
    average_abs_gradient,
    crossover,
    evolve,
    fitness,
    ga_result_to_json,
    lp_norm,
    mutate,
    select_parents,
)
from bplab.gradients import gradient_batch
from bplab.sim import zz_observable

ZZ01 = zz_observable(0, 1)


def small_config(**overrides):
    base = dict(
        n_qubits=2,
        layers=3,
        population_size=6,
        generations=8,
        mutation_rate=0.1,
        p=1.0,
        epsilon=0.05,
        theta_samples_per_eval=4,
        master_seed=123,
    )
    base.update(overrides)
    return GaConfig(**base)


class TestLpNorm:
    def test_l1(self):
        assert lp_norm([0.1, 0.2], 1.0) == pytest.approx(0.3, abs=1e-15)

    def test_l2(self):
        assert lp_norm([0.3, 0.4], 2.0) == pytest.approx(0.5, abs=1e-15)

    def test_signs_ignored(self):
        assert lp_norm([-0.3, 0.4], 2.0) == pytest.approx(0.5, abs=1e-15)


class TestGaConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            small_config(mutation_rate=1.5)
        with pytest.raises(ValueError):
            small_config(epsilon=0.0)
        with pytest.raises(ValueError):
            small_config(p=0.5)
        with pytest.raises(ValueError):
            small_config(population_size=1)


class TestFitness:
    def test_deterministic_given_seeds(self):
        config = small_config()
        s = RpaStructure.random(2, 3, 1)
        assert fitness(s, config, ZZ01, 5) == fitness(s, config, ZZ01, 5)

    def test_l1_matches_gradient_recomputation(self):
        config = small_config(theta_samples_per_eval=3)
        s = RpaStructure.random(2, 3, 2)
        fit, _ = fitness(s, config, ZZ01, 9)
        circuit = build_rpa_from_structure(s)
        rng = np.random.default_rng((config.master_seed, 2, 9))
        thetas = rng.uniform(0, 2 * np.pi, (3, circuit.param_count))
        grads = gradient_batch(circuit, thetas, ZZ01)
        assert fit == pytest.approx(np.abs(grads).sum(axis=1).mean(), abs=1e-12)

    def test_last_layer_z_blocks_constraint(self):
        # a Z rotation in the last layer commutes with the CZs and the ZZ
        # observable, so its derivative is exactly zero
        choices = [["X", "Y"], ["Y", "X"], ["Z", "X"]]
        s = RpaStructure(tuple(tuple(r) for r in choices))
        config = small_config()
        fit, ok = fitness(s, config, ZZ01, 0)
        assert not ok
        circuit = build_rpa_from_structure(s)
        rng = np.random.default_rng((config.master_seed, 2, 0))
        thetas = rng.uniform(0, 2 * np.pi, (4, circuit.param_count))
        grads = gradient_batch(circuit, thetas, ZZ01)
        np.testing.assert_allclose(grads[:, 4], 0.0, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            fitness(RpaStructure.random(3, 3, 0), small_config(), ZZ01, 0)


class TestSelectParents:
    def make(self, fits):
        return [
            Individual(RpaStructure.random(2, 2, i), f, True, i)
            for i, f in enumerate(fits)
        ]

    def test_orders_by_fitness(self):
        pop = self.make([0.1, 0.9, 0.5])
        a, b = select_parents(pop)
        assert (a, b) == (pop[1], pop[2])

    def test_tie_breaks_by_index(self):
        pop = self.make([0.5, 0.5, 0.1])
        a, b = select_parents(pop)
        assert (a, b) == (pop[0], pop[1])

    def test_two_member_population(self):
        pop = self.make([0.2, 0.7])
        a, b = select_parents(pop)
        assert (a, b) == (pop[1], pop[0])

    def test_rejects_singleton(self):
        with pytest.raises(ValueError):
            select_parents(self.make([1.0]))


class TestCrossover:
    def test_identical_parents_reproduce(self):
        s = RpaStructure.random(3, 4, 7)
        assert crossover(s, s, 99) == s

    def test_two_layer_cut(self):
        a = RpaStructure((("X", "X"), ("X", "X")))
        b = RpaStructure((("Y", "Y"), ("Y", "Y")))
        child = crossover(a, b, 0)
        assert child.choices == (("X", "X"), ("Y", "Y"))

    def test_shape_preserved_and_rows_from_parents(self):
        rng = np.random.default_rng(3)
        a = RpaStructure.random(4, 6, 1)
        b = RpaStructure.random(4, 6, 2)
        for seed in range(10):
            child = crossover(a, b, seed)
            assert child.layers == 6 and child.n_qubits == 4
            for row in child.choices:
                assert row in a.choices or row in b.choices

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            crossover(RpaStructure.random(2, 3, 0), RpaStructure.random(2, 4, 0), 1)


class TestMutate:
    def test_rate_zero_is_identity(self):
        s = RpaStructure.random(3, 5, 11)
        assert mutate(s, 0.0, 4) == s

    def test_rate_one_changes_every_entry(self):
        s = RpaStructure.random(3, 5, 12)
        out = mutate(s, 1.0, 4)
        for r_old, r_new in zip(s.choices, out.choices):
            assert all(a != b for a, b in zip(r_old, r_new))

    def test_expected_change_fraction(self):
        rng = np.random.default_rng(5)
        s = RpaStructure.random(10, 30, 13)  # 300 entries
        rate = 0.2
        changed = []
        for seed in range(30):
            out = mutate(s, rate, seed)
            changed.append(
                sum(
                    a != b
                    for r_old, r_new in zip(s.choices, out.choices)
                    for a, b in zip(r_old, r_new)
                )
            )
        total = 300 * 30
        observed = sum(changed) / total
        se = np.sqrt(rate * (1 - rate) / total)
        assert abs(observed - rate) <= 3 * se

    def test_deterministic(self):
        s = RpaStructure.random(4, 4, 1)
        assert mutate(s, 0.3, 77) == mutate(s, 0.3, 77)


class TestEvolve:
    def test_history_monotone_nondecreasing(self):
        result = evolve(small_config(), ZZ01)
        hist = result.fitness_history
        assert all(a <= b for a, b in zip(hist, hist[1:]))

    def test_deterministic_for_equal_seed(self):
        a = evolve(small_config(), ZZ01)
        b = evolve(small_config(), ZZ01)
        assert a.fitness_history == b.fitness_history
        assert a.final_circuit == b.final_circuit

    def test_shapes_constant_across_generations(self):
        result = evolve(small_config(), ZZ01)
        for ind in result.best_per_generation:
            assert ind.structure.layers == 3
            assert ind.structure.n_qubits == 2
        assert result.final_circuit.param_count == 6

    def test_worker_pool_matches_serial(self):
        a = evolve(small_config(generations=3), ZZ01)
        b = evolve(small_config(generations=3), ZZ01, workers=2)
        assert a.fitness_history == b.fitness_history

    def test_improves_over_random_baseline(self):
        config = small_config(
            n_qubits=2, layers=8, population_size=14, generations=40,
            mutation_rate=0.06, theta_samples_per_eval=8, master_seed=5,
        )
        obs = ZZ01
        result = evolve(config, obs)
        evolved = average_abs_gradient(result.final_circuit, obs, 60, 17)
        baseline = average_abs_gradient(build_rpa(2, 8, 404), obs, 60, 17)
        assert evolved > baseline

    def test_result_json_schema(self):
        result = evolve(small_config(), ZZ01)
        blob = json.loads(json.dumps(ga_result_to_json(result)))
        assert blob["config"]["n_qubits"] == 2
        assert len(blob["fitness_history"]) == len(result.fitness_history)
        assert blob["final_structure"] == [
            list(r) for r in result.final_circuit.structure.choices
        ]
        restored = circuit_from_json(blob["final_circuit"])
        assert restored == result.final_circuit
