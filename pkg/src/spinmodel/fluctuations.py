"""Vacuum-fluctuation models behind the spin magnitude and uncertainty.

Translational fluctuations follow a Gaussian transition kernel whose
per-component variance hbar dt / 2m reproduces <dx dp> = hbar/2.  The
rotational model gives the radius of random circular motion a
half-Gaussian density, whose variational derivation and Monte Carlo
average both land on <L_s> = hbar/2 independent of mass and frequency.
The shift-averaged Kullback-Leibler metric converges to the Fisher-type
functional (hbar/4m) int (grad rho)^2 / rho as dt -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orientation import ConvergenceError


@dataclass(frozen=True)
class TranslationParams:
    mass: float = 1.0
    dt: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if min(self.mass, self.dt, self.hbar) <= 0:
            raise ValueError("all parameters must be positive")

    @property
    def component_variance(self) -> float:
        return self.hbar * self.dt / (2.0 * self.mass)


@dataclass(frozen=True)
class RotationParams:
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if min(self.mass, self.omega, self.hbar) <= 0:
            raise ValueError("all parameters must be positive")

    @property
    def radius_scale(self) -> float:
        """Standard deviation scale sqrt(hbar / 2 m omega) of the radius."""
        return math.sqrt(self.hbar / (2.0 * self.mass * self.omega))


# ---------------------------------------------------------------------------
# translational kernel


def sample_displacement(
    params: TranslationParams, rng: np.random.Generator, size=None
):
    """Gaussian displacement vectors with per-component variance hbar dt/2m."""
    shape = (3,) if size is None else (int(size), 3)
    return rng.normal(0.0, math.sqrt(params.component_variance), shape)


def uncertainty_product(samples: np.ndarray, params: TranslationParams) -> float:
    """Estimate <dx_i dp_i> with p_i = m w_i / dt; expected hbar/2."""
    w = np.asarray(samples, dtype=float)
    if w.ndim != 2 or w.shape[0] < 10**4:
        raise ValueError("need at least 1e4 displacement samples")
    p = params.mass * w / params.dt
    return float(np.mean(w * p))


# ---------------------------------------------------------------------------
# rotational model


def radius_density(u, params: RotationParams):
    """Half-Gaussian density (1/Z) exp(-m omega u^2 / hbar) on u >= 0."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("radius must be non-negative")
    scale = params.mass * params.omega / params.hbar
    z = 0.5 * math.sqrt(math.pi / scale)
    out = np.exp(-scale * u**2) / z
    return out if out.ndim else float(out)


def sample_radius(params: RotationParams, rng: np.random.Generator, size=None):
    return np.abs(rng.normal(0.0, params.radius_scale, size))


def expected_angular_momentum(
    params: RotationParams, n: int, rng: np.random.Generator
) -> float:
    """Monte Carlo <m omega u^2>; hbar/2 for any (m, omega)."""
    if n < 10**4:
        raise ValueError("need at least 1e4 samples")
    u = sample_radius(params, rng, n)
    return float(np.mean(params.mass * params.omega * u**2))


def variational_radius_solve(
    params: RotationParams,
    u_max: float | None = None,
    n_nodes: int = 4096,
    delta_phi: float = 1.0,
    tol: float = 1e-12,
    max_iter: int = 200,
):
    """Minimize the rotational action over radius densities.

    A_t = (m/2) dphi int p(u) omega u^2 du + (hbar/2) dphi int p ln(p/mu) du
    under normalization; the stationarity condition is solved per node and
    renormalized until the iterates settle.  Returns (u_grid, density).
    """
    if u_max is None:
        u_max = 6.0 * params.radius_scale
    u = np.linspace(0.0, u_max, n_nodes)
    p = np.full_like(u, 1.0 / u_max)
    scale = params.mass * params.omega / params.hbar
    for _ in range(max_iter):
        target = np.exp(-scale * u**2)
        target /= np.trapezoid(target, u)
        residual = float(np.max(np.abs(target - p)))
        p = target
        if residual < tol:
            return u, p
    raise ConvergenceError("radius solve did not converge", residual)


def rotational_action(u, p, params: RotationParams, delta_phi: float = 1.0):
    """The functional being minimized; exposed for the test oracles."""
    mu = 1.0 / (u[-1] - u[0])
    mask = p > 0
    entropy = np.zeros_like(p)
    entropy[mask] = p[mask] * np.log(p[mask] / mu)
    classical = 0.5 * params.mass * params.omega * np.trapezoid(p * u**2, u)
    return delta_phi * (classical + 0.5 * params.hbar * np.trapezoid(entropy, u))


def mean_square_radius(u, p) -> float:
    return float(np.trapezoid(p * u**2, u))


# ---------------------------------------------------------------------------
# Fisher-functional limit


def fisher_functional(x, rho, params: TranslationParams) -> float:
    """(hbar/4m) int (grad rho)^2 / rho dx, per unit time."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("density must be strictly positive")
    grad = np.gradient(rho, x)
    return float(
        params.hbar / (4.0 * params.mass) * np.trapezoid(grad**2 / rho, x)
    )


def kl_shift_rate(
    x,
    rho,
    params: TranslationParams,
    rng: np.random.Generator,
    n_shifts: int = 4096,
) -> float:
    """Average KL divergence between rho and its fluctuation-shifted copy,
    per unit time: <D_KL(rho(x) || rho(x+w))>_w / dt with w ~ the
    translational kernel (1D).  Converges to fisher_functional as dt -> 0.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("density must be strictly positive")
    sigma = math.sqrt(params.component_variance)
    shifts = rng.normal(0.0, sigma, n_shifts)
    log_rho = np.log(rho)
    total = 0.0
    for w in shifts:
        shifted = np.interp(x + w, x, rho, left=rho[0], right=rho[-1])
        total += float(np.trapezoid(rho * (log_rho - np.log(shifted)), x))
    return total / n_shifts / params.dt
