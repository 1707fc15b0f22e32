"""Orientation densities of the intrinsic angular momentum.

The polar angle theta between the angular momentum and the field axis
carries a family of stationary densities  p_m(theta) = cos^{2m}(theta)/Z_m
on [0, pi], indexed by a non-negative integer order m (m = 0 is the
uniform, field-free case).  The family arises as the stationary solution
of an action functional combining a precession energy term with a
relative-entropy penalty (Tsallis or Renyi of order alpha = 1 + 1/(2m));
the Kullback-Leibler variant is implemented for contrast and yields an
exponential-of-cosine density instead.

Units: hbar = 1 throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

HBAR = 1.0

DEFAULT_GRID_NODES = 2048
_NORM_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """Raised when an iterative solve stalls; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


# ---------------------------------------------------------------------------
# density representations


@dataclass(frozen=True)
class GridDensity:
    """Non-negative density on a uniform theta grid over [0, pi].

    Integration uses the composite trapezoid rule on the stored grid.
    """

    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if thetas.shape != values.shape or thetas.ndim != 1:
            raise ValueError("thetas and values must be matching 1-d arrays")
        if np.any(values < 0):
            raise ValueError("density values must be non-negative")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "values", values)
        if abs(self.integral() - 1.0) > _NORM_TOL:
            raise ValueError(
                f"grid density not normalized: integral={self.integral()!r}"
            )

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.thetas))

    def expectation(self, f) -> float:
        """Trapezoid integral of f(theta) against the density."""
        return float(np.trapezoid(self.values * f(self.thetas), self.thetas))

    @staticmethod
    def from_unnormalized(thetas, values) -> "GridDensity":
        values = np.clip(np.asarray(values, dtype=float), 0.0, None)
        z = np.trapezoid(values, thetas)
        if z <= 0:
            raise ValueError("cannot normalize a density with zero mass")
        return GridDensity(thetas, values / z)


@dataclass(frozen=True)
class TwoPointDensity:
    """Quantized limit: all mass at theta = 0 (up) and theta = pi (down)."""

    weight_up: float
    weight_down: float

    def __post_init__(self):
        if not (0.0 <= self.weight_up <= 1.0 and 0.0 <= self.weight_down <= 1.0):
            raise ValueError("weights must lie in [0, 1]")
        if abs(self.weight_up + self.weight_down - 1.0) > _NORM_TOL:
            raise ValueError("weights must sum to 1")


def theta_grid(n_nodes: int = DEFAULT_GRID_NODES) -> np.ndarray:
    return np.linspace(0.0, np.pi, n_nodes)


def uniform_density(n_nodes: int = DEFAULT_GRID_NODES) -> GridDensity:
    thetas = theta_grid(n_nodes)
    return GridDensity(thetas, np.full_like(thetas, 1.0 / np.pi))


# ---------------------------------------------------------------------------
# the cos^{2m} family


def alpha_from_m(m: int) -> float:
    """Divergence order alpha = 1 + 1/(2m) for integer m >= 1."""
    if m < 1:
        raise ValueError(
            "m must be >= 1; the m = 0 case is the uniform density and has "
            "no finite divergence order"
        )
    return 1.0 + 1.0 / (2 * m)


@lru_cache(maxsize=None)
def normalization_constant(m: int) -> float:
    """Z_m = integral of cos^{2m}(theta) over [0, pi], by adaptive quadrature."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return float(np.pi)
    value, _ = integrate.quad(
        lambda t: np.cos(t) ** (2 * m), 0.0, np.pi, epsrel=1e-12, limit=200
    )
    return float(value)


def eval_density(m: int, theta) -> float | np.ndarray:
    """p_m(theta) = cos^{2m}(theta) / Z_m; the uniform 1/pi for m = 0."""
    theta = np.asarray(theta, dtype=float)
    if m == 0:
        out = np.full_like(theta, 1.0 / np.pi)
    else:
        out = np.cos(theta) ** (2 * m) / normalization_constant(m)
    return out if out.ndim else float(out)


def closed_form_density(m: int, n_nodes: int = DEFAULT_GRID_NODES) -> GridDensity:
    thetas = theta_grid(n_nodes)
    return GridDensity.from_unnormalized(thetas, eval_density(m, thetas))


@lru_cache(maxsize=None)
def _inverse_cdf_table(m: int, n_nodes: int = 4097):
    thetas = theta_grid(n_nodes)
    pdf = np.asarray(eval_density(m, thetas))
    cdf = integrate.cumulative_trapezoid(pdf, thetas, initial=0.0)
    cdf /= cdf[-1]
    # strictly increasing knots only; cos^{2m} has a flat CDF plateau at
    # theta = pi/2 for large m, which interp handles as a jump
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    return cdf[keep], thetas[keep]


def sample_theta(m: int, rng: np.random.Generator, size=None):
    """Draw theta ~ p_m by inverse-CDF interpolation on a monotone table."""
    if m < 0:
        raise ValueError("m must be non-negative")
    u = rng.random(size)
    cdf, thetas = _inverse_cdf_table(m)
    return np.interp(u, cdf, thetas)


# ---------------------------------------------------------------------------
# action functional


TSALLIS = "tsallis"
RENYI = "renyi"
KULLBACK_LEIBLER = "kl"

_DIVERGENCES = (TSALLIS, RENYI, KULLBACK_LEIBLER)


@dataclass(frozen=True)
class ActionSpec:
    """Parameters of the orientation action functional.

    g_s is the gyromagnetic factor, L_s the angular-momentum magnitude
    (hbar/2 by default), delta_phi the precession-angle window.  The
    stationary family is independent of delta_phi, which therefore
    defaults to 1.
    """

    g_s: float = 2.0
    L_s: float = HBAR / 2
    delta_phi: float = 1.0
    divergence: str = TSALLIS
    m: int = 1
    prior: GridDensity | None = None

    def __post_init__(self):
        if self.delta_phi <= 0:
            raise ValueError("delta_phi must be positive")
        if self.L_s <= 0:
            raise ValueError("L_s must be positive")
        if self.divergence not in _DIVERGENCES:
            raise ValueError(f"divergence must be one of {_DIVERGENCES}")
        if self.divergence in (TSALLIS, RENYI) and self.m < 1:
            raise ValueError("Tsallis/Renyi require order m >= 1")

    @property
    def alpha(self) -> float:
        return alpha_from_m(self.m)


def _prior_values(spec: ActionSpec, thetas: np.ndarray) -> np.ndarray:
    if spec.prior is None:
        return np.full_like(thetas, 1.0 / np.pi)
    return np.interp(thetas, spec.prior.thetas, spec.prior.values)


def divergence_term(density: GridDensity, spec: ActionSpec) -> float:
    """Information metric I_f of the density against the prior.

    Tsallis: ( dphi * int p^a / s^(a-1) - 1 ) / (a - 1)
    Renyi:   ln( dphi * int p^a / s^(a-1) ) / (a - 1)
    K-L:     dphi * int p ln(p / s)
    """
    thetas, p = density.thetas, density.values
    sigma = _prior_values(spec, thetas)
    if spec.divergence == KULLBACK_LEIBLER:
        mask = p > 0
        integrand = np.zeros_like(p)
        integrand[mask] = p[mask] * np.log(p[mask] / sigma[mask])
        return spec.delta_phi * float(np.trapezoid(integrand, thetas))
    a = spec.alpha
    if a == 1.0:
        raise ValueError("alpha = 1 is not valid for Tsallis/Renyi")
    f = spec.delta_phi * float(np.trapezoid(p**a / sigma ** (a - 1.0), thetas))
    if spec.divergence == TSALLIS:
        return (f - 1.0) / (a - 1.0)
    return np.log(f) / (a - 1.0)


def total_action(density: GridDensity, spec: ActionSpec) -> float:
    """A_t = -(1/2) g_s L_s dphi <cos theta> + (hbar/2) I_f."""
    if abs(density.integral() - 1.0) > _NORM_TOL:
        raise ValueError("density must be normalized")
    classical = (
        -0.5 * spec.g_s * spec.L_s * spec.delta_phi * density.expectation(np.cos)
    )
    return classical + 0.5 * HBAR * divergence_term(density, spec)


def variational_solve(
    spec: ActionSpec,
    n_nodes: int = DEFAULT_GRID_NODES,
    tol: float = 1e-10,
    max_iter: int = 500,
) -> GridDensity:
    """Stationary density of the action functional under normalization.

    Solves the per-node Lagrange stationarity condition by fixed-point
    iteration with renormalization after each update.  For Tsallis and
    Renyi of order m the stationary family is cos^{2m}(theta)/Z_m (the
    Renyi condition carries an extra p-dependent scalar factor that the
    renormalization absorbs); for Kullback-Leibler it is the strictly
    positive exp((g_s L_s / hbar) cos theta) family.
    """
    thetas = theta_grid(n_nodes)
    sigma = _prior_values(spec, thetas)
    p = np.full_like(thetas, 1.0 / np.pi)

    for _ in range(max_iter):
        if spec.divergence == KULLBACK_LEIBLER:
            target = sigma * np.exp(spec.g_s * spec.L_s / HBAR * np.cos(thetas))
        else:
            if spec.divergence == RENYI:
                a = spec.alpha
                scale = spec.delta_phi * float(
                    np.trapezoid(p**a / sigma ** (a - 1.0), thetas)
                )
            else:
                scale = 1.0
            target = sigma * (scale * np.cos(thetas)) ** (2 * spec.m)
        target = target / np.trapezoid(target, thetas)
        residual = float(np.max(np.abs(target - p)))
        p = target
        if residual < tol:
            return GridDensity(thetas, p)
    raise ConvergenceError(
        f"variational solve did not converge in {max_iter} iterations", residual
    )


def limit_density(initial: GridDensity) -> TwoPointDensity:
    """Collapse a grid density to its halved-sphere two-point weights."""
    thetas, values = initial.thetas, initial.values
    up_mask = thetas <= np.pi / 2
    w_up = float(np.trapezoid(values[up_mask], thetas[up_mask]))
    w_down = initial.integral() - w_up
    total = w_up + w_down
    return TwoPointDensity(w_up / total, w_down / total)
