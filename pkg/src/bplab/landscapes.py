"""Analytic 2D Gaussian cost landscapes and their exact x-derivatives.

f(x, y) = -exp(-x^2/(2 sigma_x^2) - y^2/(2 sigma_y^2)), range (-1, 0].
The y-derivative is obtained by symmetry via an axis swap. Quadrature
helpers give exact moments and exceedance probabilities for a uniform
sample over [-halfwidth, halfwidth]^2, usable for scan reports and as an
independent cross-check on Monte Carlo estimates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq


@dataclass(frozen=True)
class GaussianModel:
    sigma_x: float
    sigma_y: float

    def __post_init__(self):
        if self.sigma_x <= 0 or self.sigma_y <= 0:
            raise ValueError("standard deviations must be strictly positive")

    @classmethod
    def isotropic(cls, sigma: float) -> "GaussianModel":
        return cls(sigma, sigma)

    def swapped(self) -> "GaussianModel":
        """Model with x and y axes exchanged."""
        return GaussianModel(self.sigma_y, self.sigma_x)


def value(model: GaussianModel, x, y):
    """Landscape value; vectorized over numpy inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = -np.exp(-(x * x) / (2 * model.sigma_x**2) - (y * y) / (2 * model.sigma_y**2))
    return out if out.ndim else float(out)


def derivative_x(model: GaussianModel, x, y):
    """Exact d f / d x; odd in x, even in y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = (x / model.sigma_x**2) * np.exp(
        -(x * x) / (2 * model.sigma_x**2) - (y * y) / (2 * model.sigma_y**2)
    )
    return out if out.ndim else float(out)


def derivative(model: GaussianModel, x, y, direction: str = "x"):
    """Derivative along 'x' or (by axis swap) 'y'."""
    if direction == "x":
        return derivative_x(model, x, y)
    if direction == "y":
        return derivative_x(model.swapped(), y, x)
    raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")


# ---------------------------------------------------------------------------
# Quadrature over the uniform sampling square
# ---------------------------------------------------------------------------

_EXP_CUTOFF = 42.0  # exp(-t^2) is below double-precision tiny beyond |t| ~ 38


def _gauss_factor_integral(sigma, halfwidth, power_scale):
    """Integral of exp(-power_scale * y^2 / (2 sigma^2)) over [-hw, hw]."""
    scale = sigma * np.sqrt(2.0 / power_scale)
    upper = min(halfwidth / scale, _EXP_CUTOFF)
    val, _ = quad(lambda u: np.exp(-u * u), 0.0, upper, limit=200)
    return 2.0 * scale * val


def _x_factor_moment(sigma, halfwidth, power):
    """Integral of (x / sigma^2)^power * exp(-power * x^2 / (2 sigma^2)) over [-hw, hw]."""
    scale = sigma * np.sqrt(2.0 / power)
    upper = min(halfwidth / scale, _EXP_CUTOFF)
    val, _ = quad(
        lambda u: (u * scale / sigma**2) ** power * np.exp(-u * u),
        0.0,
        upper,
        limit=200,
    )
    return 2.0 * scale * val


def derivative_moment(model: GaussianModel, power: int, halfwidth: float) -> float:
    """E[(df/dx)^power] for (x, y) uniform on the square; exact 0 for odd power."""
    if power < 1:
        raise ValueError("power must be >= 1")
    if halfwidth <= 0:
        raise ValueError("halfwidth must be positive")
    if power % 2 == 1:
        return 0.0
    area = (2.0 * halfwidth) ** 2
    x_part = _x_factor_moment(model.sigma_x, halfwidth, power)
    y_part = _gauss_factor_integral(model.sigma_y, halfwidth, power)
    return x_part * y_part / area


def derivative_variance(model: GaussianModel, halfwidth: float) -> float:
    """Var[df/dx] under uniform sampling; the mean vanishes by symmetry."""
    return derivative_moment(model, 2, halfwidth)


def _wall_height(sigma_x, t):
    # |df/dx| along y = 0 as a function of t = |x|
    return (t / sigma_x**2) * np.exp(-(t * t) / (2 * sigma_x**2))


def exceedance_probability(model: GaussianModel, delta: float, halfwidth: float) -> float:
    """Pr(|df/dx| >= delta) for (x, y) uniform on the square, by quadrature.

    Separates the y-integral in closed form: for fixed x the condition is
    |y| <= sigma_y * sqrt(2 ln(g(|x|)/delta)) with g the y=0 profile, leaving
    one smooth 1D integral over x between the roots of g = delta.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if halfwidth <= 0:
        raise ValueError("halfwidth must be positive")
    sx, sy = model.sigma_x, model.sigma_y
    peak = _wall_height(sx, sx)
    if peak < delta:
        return 0.0

    def excess(t):
        return _wall_height(sx, t) - delta

    # g rises from 0 to its peak at t = sigma_x, then decays; the exceedance
    # region in |x| is the interval between the two roots of g = delta.
    t_lo = brentq(excess, 0.0, sx)
    hi = sx * 2.0
    while excess(hi) > 0:
        hi *= 2.0
    t_hi = min(brentq(excess, sx, hi), halfwidth)
    if t_hi <= t_lo:
        return 0.0

    def y_extent(t):
        g = _wall_height(sx, t)
        if g <= delta:
            return 0.0
        return min(halfwidth, sy * np.sqrt(2.0 * np.log(g / delta)))

    # breakpoints where the y-extent saturates at the domain edge
    points = []
    cap_exponent = halfwidth**2 / (2 * sy**2)
    cap = delta * np.exp(cap_exponent) if cap_exponent < 700 else np.inf
    if np.isfinite(cap) and cap < peak:
        def cap_excess(t):
            return _wall_height(sx, t) - cap
        for lo_b, hi_b in ((t_lo, sx), (sx, t_hi)):
            if cap_excess(lo_b) * cap_excess(hi_b) < 0:
                points.append(brentq(cap_excess, lo_b, hi_b))
    points = [p for p in points if t_lo < p < t_hi]

    integral, _ = quad(y_extent, t_lo, t_hi, points=points or None, limit=200)
    area = (2.0 * halfwidth) ** 2
    return 4.0 * integral / area  # symmetric in x and in y
