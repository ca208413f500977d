"""Exact cost derivatives via the parameter-shift rule.

Every gate built by the ansatz module is generated by an involutory Pauli,
so [C(theta + pi/2 e_i) - C(theta - pi/2 e_i)] / 2 is the exact partial
derivative. Central finite differences are kept solely as an independent
check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import Circuit, cost, cost_batch
from .sim import PauliObservable

SHIFT = np.pi / 2


@dataclass
class GradientVector:
    """All d partial derivatives of the cost at one parameter point."""

    values: np.ndarray
    circuit: Circuit
    params: np.ndarray


def _checked_params(circuit, params):
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.param_count,):
        raise ValueError(
            f"expected {circuit.param_count} parameters, got shape {params.shape}"
        )
    return params


def parameter_shift(circuit: Circuit, params, obs: PauliObservable, index: int) -> float:
    """Exact dC/dtheta_index from two shifted cost evaluations."""
    params = _checked_params(circuit, params)
    if not 0 <= index < circuit.param_count:
        raise ValueError(f"parameter index {index} out of range")
    plus = params.copy()
    minus = params.copy()
    plus[index] += SHIFT
    minus[index] -= SHIFT
    return (cost(circuit, plus, obs) - cost(circuit, minus, obs)) / 2.0


def finite_difference(
    circuit: Circuit, params, obs: PauliObservable, index: int, step: float
) -> float:
    """Central-difference derivative [C(theta+h) - C(theta-h)] / 2h."""
    if step <= 0:
        raise ValueError("step must be positive")
    params = _checked_params(circuit, params)
    if not 0 <= index < circuit.param_count:
        raise ValueError(f"parameter index {index} out of range")
    plus = params.copy()
    minus = params.copy()
    plus[index] += step
    minus[index] -= step
    return (cost(circuit, plus, obs) - cost(circuit, minus, obs)) / (2.0 * step)


def gradient_batch(circuit: Circuit, params_batch, obs: PauliObservable) -> np.ndarray:
    """Parameter-shift gradients for a (S, d) batch of points, as an (S, d) array.

    All 2*S*d shifted cost evaluations run through one vectorized pass.
    """
    points = np.asarray(params_batch, dtype=float)
    if points.ndim != 2 or points.shape[1] != circuit.param_count:
        raise ValueError(
            f"expected batch of {circuit.param_count}-vectors, got shape {points.shape}"
        )
    n_points, d = points.shape
    if d == 0:
        return np.zeros((n_points, 0))
    shifted = np.repeat(points, 2 * d, axis=0).reshape(n_points, 2 * d, d)
    eye = np.eye(d) * SHIFT
    shifted[:, :d, :] += eye
    shifted[:, d:, :] -= eye
    costs = cost_batch(circuit, shifted.reshape(-1, d), obs).reshape(n_points, 2 * d)
    return (costs[:, :d] - costs[:, d:]) / 2.0


def full_gradient(circuit: Circuit, params, obs: PauliObservable) -> GradientVector:
    """Gradient of the cost at `params`, one parameter-shift pair per slot."""
    params = _checked_params(circuit, params)
    if circuit.param_count == 0:
        values = np.zeros(0)
    else:
        values = gradient_batch(circuit, params[None, :], obs)[0]
    return GradientVector(values=values, circuit=circuit, params=params)
