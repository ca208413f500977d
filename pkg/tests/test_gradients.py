import numpy as np
import pytest

from bplab.ansatz import Circuit, build_hea, build_rpa, cost
from bplab.gradients import (
    finite_difference,
    full_gradient,
    gradient_batch,
    parameter_shift,
)
from bplab.sim import Gate, PauliObservable, zz_observable

ZZ = zz_observable()


def random_case(rng):
    family = ["HEA", "RPA"][int(rng.integers(2))]
    n = int(rng.integers(2, 7))
    layers = int(rng.integers(1, 21))
    if family == "HEA":
        circuit = build_hea(n, layers)
    else:
        circuit = build_rpa(n, layers, int(rng.integers(1 << 31)))
    params = rng.uniform(0, 2 * np.pi, circuit.param_count)
    index = int(rng.integers(circuit.param_count))
    obs = zz_observable(*rng.choice(n, size=2, replace=False)) if n > 1 else ZZ
    return circuit, params, obs, index


class TestParameterShift:
    def test_cosine_extremum_is_zero(self):
        circuit = build_hea(2, 1)
        assert parameter_shift(circuit, np.zeros(6), ZZ, 0) == pytest.approx(0.0, abs=1e-12)

    def test_cosine_slope_at_half_pi(self):
        circuit = build_hea(2, 1)
        params = np.zeros(6)
        params[0] = np.pi / 2
        assert parameter_shift(circuit, params, ZZ, 0) == pytest.approx(-1.0, abs=1e-12)

    def test_index_out_of_range(self):
        circuit = build_hea(2, 1)
        with pytest.raises(ValueError):
            parameter_shift(circuit, np.zeros(6), ZZ, 6)

    def test_two_pi_shift_symmetry(self):
        rng = np.random.default_rng(0)
        circuit = build_rpa(3, 4, 9)
        params = rng.uniform(0, 2 * np.pi, circuit.param_count)
        for index in (0, 5, circuit.param_count - 1):
            base = parameter_shift(circuit, params, ZZ, index)
            shifted = params.copy()
            shifted[index] += 2 * np.pi
            assert parameter_shift(circuit, shifted, ZZ, index) == pytest.approx(
                base, abs=1e-12
            )

    def test_agrees_with_finite_difference_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            circuit, params, obs, index = random_case(rng)
            ps = parameter_shift(circuit, params, obs, index)
            fd = finite_difference(circuit, params, obs, index, 1e-5)
            assert abs(ps - fd) <= 1e-8


class TestFiniteDifference:
    def test_symmetric_point(self):
        circuit = build_hea(2, 1)
        assert finite_difference(circuit, np.zeros(6), ZZ, 0, 1e-5) == pytest.approx(
            0.0, abs=1e-10
        )

    def test_cosine_slope_closed_form(self):
        circuit = build_hea(2, 1)
        params = np.zeros(6)
        params[0] = 1.0
        assert finite_difference(circuit, params, ZZ, 0, 1e-5) == pytest.approx(
            -np.sin(1.0), abs=1e-9
        )

    def test_rejects_nonpositive_step(self):
        circuit = build_hea(2, 1)
        with pytest.raises(ValueError):
            finite_difference(circuit, np.zeros(6), ZZ, 0, 0.0)
        with pytest.raises(ValueError):
            finite_difference(circuit, np.zeros(6), ZZ, 0, -1e-3)

    def test_halving_step_quarters_truncation_error(self):
        # O(h^2) truncation, checked where the third derivative is sizable
        circuit = build_hea(2, 1)
        params = np.zeros(6)
        params[0] = 1.0
        exact = parameter_shift(circuit, params, ZZ, 0)
        err_big = abs(finite_difference(circuit, params, ZZ, 0, 2e-2) - exact)
        err_small = abs(finite_difference(circuit, params, ZZ, 0, 1e-2) - exact)
        assert err_big / err_small == pytest.approx(4.0, rel=0.05)


class TestFullGradient:
    def test_empty_circuit_gives_empty_vector(self):
        circuit = Circuit(2, (Gate.cz(0, 1),), 0, "CUSTOM")
        grad = full_gradient(circuit, np.zeros(0), ZZ)
        assert grad.values.shape == (0,)

    def test_zero_point_of_hea_is_critical(self):
        circuit = build_hea(2, 1)
        grad = full_gradient(circuit, np.zeros(6), ZZ)
        np.testing.assert_allclose(grad.values, np.zeros(6), atol=1e-12)

    def test_matches_componentwise_finite_differences(self):
        rng = np.random.default_rng(2)
        for seed in range(3):
            circuit = build_rpa(3, 2, seed)
            params = rng.uniform(0, 2 * np.pi, circuit.param_count)
            obs = zz_observable(1, 2)
            grad = full_gradient(circuit, params, obs)
            for i in range(circuit.param_count):
                fd = finite_difference(circuit, params, obs, i, 1e-5)
                assert abs(grad.values[i] - fd) <= 1e-8

    def test_matches_parameter_shift_entries(self):
        rng = np.random.default_rng(3)
        circuit = build_hea(3, 2)
        params = rng.uniform(0, 2 * np.pi, circuit.param_count)
        grad = full_gradient(circuit, params, ZZ)
        for i in [0, 7, circuit.param_count - 1]:
            assert grad.values[i] == pytest.approx(
                parameter_shift(circuit, params, ZZ, i), abs=1e-12
            )


class TestGradientBatch:
    def test_batch_matches_full_gradient(self):
        rng = np.random.default_rng(4)
        circuit = build_rpa(4, 3, 13)
        obs = zz_observable(2, 3)
        pts = rng.uniform(0, 2 * np.pi, (5, circuit.param_count))
        grads = gradient_batch(circuit, pts, obs)
        for i in range(5):
            single = full_gradient(circuit, pts[i], obs)
            np.testing.assert_allclose(grads[i], single.values, atol=1e-13)


class TestInertDirections:
    def test_leading_rz_on_zero_state_has_zero_gradient(self):
        # RZ on |0> is a pure phase, so its slot is inert whatever follows
        gates = (
            Gate.rotation("RZ", 0, slot=0),
            Gate.rotation("RY", 0, slot=1),
            Gate.rotation("RX", 1, slot=2),
            Gate.cz(0, 1),
        )
        circuit = Circuit(2, gates, 3, "CUSTOM")
        rng = np.random.default_rng(5)
        for _ in range(5):
            params = rng.uniform(0, 2 * np.pi, 3)
            assert parameter_shift(circuit, params, ZZ, 0) == pytest.approx(
                0.0, abs=1e-12
            )

    def test_trailing_rz_commutes_with_diagonal_observable(self):
        gates = (
            Gate.rotation("RY", 0, slot=0),
            Gate.rotation("RY", 1, slot=1),
            Gate.cz(0, 1),
            Gate.rotation("RZ", 0, slot=2),
        )
        circuit = Circuit(2, gates, 3, "CUSTOM")
        rng = np.random.default_rng(6)
        for _ in range(5):
            params = rng.uniform(0, 2 * np.pi, 3)
            assert parameter_shift(circuit, params, ZZ, 2) == pytest.approx(
                0.0, abs=1e-12
            )
