"""Single-electron Stern-Gerlach measurement simulation.

Covers the quantized two-outcome regime (strong gradient, order m -> inf),
the rotated second-apparatus statistics, and the weak-gradient regime
where the beam displacement stays continuous because the orientation
density has not collapsed to the poles.

Natural units: e = hbar = m_e = 1, overridable through ApparatusConfig.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orientation import (
    GridDensity,
    TwoPointDensity,
    eval_density,
    normalization_constant,
    sample_theta,
)

UP = +1
DOWN = -1


@dataclass(frozen=True)
class ApparatusConfig:
    """Geometry and field of one Stern-Gerlach apparatus."""

    axis_angle: float = 0.0
    gradient: float = 1.0
    constant_field: float = 0.0
    transit_time: float = 1.0
    m: int | None = 1  # None means the quantized limit
    charge: float = 1.0
    hbar: float = 1.0
    electron_mass: float = 1.0

    def __post_init__(self):
        if self.transit_time <= 0:
            raise ValueError("transit_time must be positive")
        if self.gradient < 0:
            raise ValueError("gradient must be non-negative")


@dataclass(frozen=True)
class SpinOutcome:
    value: int  # +1 up, -1 down
    axis_angle: float = 0.0

    def __post_init__(self):
        if self.value not in (UP, DOWN):
            raise ValueError("outcome value must be +1 or -1")


def measure(
    density: TwoPointDensity, rng: np.random.Generator, axis_angle: float = 0.0
) -> SpinOutcome:
    """Draw one quantized outcome from a two-point density."""
    value = UP if rng.random() < density.weight_up else DOWN
    return SpinOutcome(value, axis_angle)


def measure_many(density: TwoPointDensity, rng: np.random.Generator, n: int):
    """Vectorized outcomes (+1/-1) for n independent measurements."""
    return np.where(rng.random(n) < density.weight_up, UP, DOWN)


def conditional_density(prior: GridDensity, m: int) -> GridDensity:
    """Post-apparatus density proportional to prior(theta) * cos^{2m}(theta).

    The prior is expressed in the apparatus frame; any tilt between the
    first and second apparatus is the caller's frame shift.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    weights = prior.values * np.cos(prior.thetas) ** (2 * m)
    return GridDensity.from_unnormalized(prior.thetas, weights)


def rotated_up_probability(beta: float) -> float:
    """Up-probability cos^2(beta/2) after a second apparatus tilted by beta."""
    return math.cos(beta / 2.0) ** 2


def rotated_down_probability(beta: float) -> float:
    return math.sin(beta / 2.0) ** 2


def two_apparatus_up_probability(beta1: float, beta2: float) -> float:
    """Up-probability when the apparatuses are tilted by beta1, beta2."""
    return math.cos((beta2 - beta1) / 2.0) ** 2


def y_axis_density_coefficients(beta: float, rotation_sign: int = +1):
    """Two-point weights for measurement along the rotated y'-axis.

    rotation_sign +1 corresponds to the apparatus plane rotated by +beta
    (weights ((cos b/2 - sin b/2)^2 / 2, (cos b/2 + sin b/2)^2 / 2)),
    -1 to the mirror rotation, which swaps the pair.
    """
    if rotation_sign not in (+1, -1):
        raise ValueError("rotation_sign must be +1 or -1")
    minus = 0.5 * (math.cos(beta / 2.0) - math.sin(beta / 2.0)) ** 2
    plus = 0.5 * (math.cos(beta / 2.0) + math.sin(beta / 2.0)) ** 2
    return (minus, plus) if rotation_sign == +1 else (plus, minus)


# ---------------------------------------------------------------------------
# weak-gradient displacement regime


def max_displacement(m: int, eta: float, transit_time: float, config=None) -> float:
    return abs(displacement(0.0, m, eta, transit_time, config))


def displacement(theta, m: int, eta: float, transit_time: float, config=None):
    """Screen displacement (e hbar eta / 4 m_e^2 Z_m) dT^2 cos^{2m+1}(theta)."""
    if m is None:
        raise ValueError("displacement requires a finite order m")
    if eta <= 0 or transit_time <= 0:
        raise ValueError("eta and transit_time must be positive")
    e = config.charge if config else 1.0
    hbar = config.hbar if config else 1.0
    me = config.electron_mass if config else 1.0
    z_m = normalization_constant(m)
    prefactor = e * hbar * eta / (4.0 * me**2 * z_m) * transit_time**2
    return prefactor * np.cos(theta) ** (2 * m + 1)


def displacement_density(z, m: int, eta: float, transit_time: float, config=None):
    """Analytic pushforward density of the displacement under theta ~ p_m.

    With x = cos(theta) and dz_max the displacement scale, the map
    z = dz_max * x^{2m+1} is monotone, so the density follows from a
    change of variables; used as the independent oracle for the sampled
    histogram.
    """
    k = displacement(0.0, m, eta, transit_time, config)
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    inside = np.abs(z) < k
    frac = np.clip(np.abs(z[inside]) / k, 0.0, 1.0)
    x = np.sign(z[inside]) * frac ** (1.0 / (2 * m + 1))
    z_m = normalization_constant(m)
    out[inside] = 1.0 / (z_m * k * (2 * m + 1) * np.sqrt(1.0 - x**2))
    return out if out.ndim else float(out)


def displacement_distribution(
    m: int,
    config: ApparatusConfig,
    n_samples: int,
    rng: np.random.Generator,
    bins: int = 200,
):
    """Sample the continuous displacement distribution of the weak regime.

    Returns (samples, bin_edges, counts).
    """
    if m is None:
        raise ValueError("the quantized limit has no continuous distribution")
    thetas = sample_theta(m, rng, n_samples)
    dz = displacement(thetas, m, config.gradient, config.transit_time, config)
    k = max_displacement(m, config.gradient, config.transit_time, config)
    counts, edges = np.histogram(dz, bins=bins, range=(-k, k))
    return dz, edges, counts


def histogram_rows(edges: np.ndarray, counts: np.ndarray):
    """(bin_left, bin_right, count, density) rows for CSV export."""
    total = counts.sum()
    widths = np.diff(edges)
    rows = []
    for left, right, c, w in zip(edges[:-1], edges[1:], counts, widths):
        rows.append((float(left), float(right), int(c), float(c / (total * w))))
    return rows


def order_for_field(eta: float, transit_time: float, scale: float = 1.0) -> int:
    """User-supplied m schedule: monotone in gradient * transit time.

    The physical relation between m and the field is not derived by the
    model; this helper is a convenience default only.
    """
    return max(0, int(round(scale * eta * transit_time)))
