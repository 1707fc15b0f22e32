"""Telegraph dynamics of the orientation trend.

The orientation of the intrinsic angular momentum alternates between an
upward trend (theta in the upper half-sphere) and a downward trend, with
random dwell durations.  Only the binary trend process matters for the
measurement statistics: the probability of spin-up equals the long-run
fraction of time spent trending upward.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

EXPONENTIAL = "exponential"
FIXED = "fixed"


@dataclass(frozen=True)
class DwellModel:
    """Mean dwell times of the upward/downward trend segments."""

    tau_plus: float = 1.0
    tau_minus: float = 1.0
    distribution: str = EXPONENTIAL

    def __post_init__(self):
        if self.tau_plus <= 0 or self.tau_minus <= 0:
            raise ValueError("dwell means must be positive")
        if self.distribution not in (EXPONENTIAL, FIXED):
            raise ValueError("distribution must be 'exponential' or 'fixed'")

    def draw(self, trend: int, rng: np.random.Generator) -> float:
        tau = self.tau_plus if trend > 0 else self.tau_minus
        if self.distribution == FIXED:
            return tau
        return float(rng.exponential(tau))

    def stationary_up_fraction(self) -> float:
        return self.tau_plus / (self.tau_plus + self.tau_minus)


@dataclass(frozen=True)
class TelegraphTrajectory:
    """Alternating trend segments tiling [0, total_duration] gaplessly."""

    start_times: tuple
    trends: tuple  # +1 / -1, strictly alternating
    total_duration: float

    def __post_init__(self):
        starts = self.start_times
        if not starts or starts[0] != 0.0:
            raise ValueError("first segment must start at t = 0")
        if len(starts) != len(self.trends):
            raise ValueError("start_times and trends must have equal length")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("start times must be strictly increasing")
        if any(t * u != -1 for t, u in zip(self.trends, self.trends[1:])):
            raise ValueError("trends must alternate")
        if starts[-1] >= self.total_duration:
            raise ValueError("last segment must start before total_duration")

    def segment_durations(self) -> np.ndarray:
        bounds = np.append(np.asarray(self.start_times), self.total_duration)
        return np.diff(bounds)

    def trend_at(self, t: float) -> int:
        """Trend at time t; boundary instants belong to the later segment."""
        if t < 0 or t > self.total_duration:
            raise ValueError("t outside [0, total_duration]")
        idx = bisect.bisect_right(self.start_times, t) - 1
        return self.trends[idx]

    def switch_count(self) -> int:
        return len(self.trends) - 1


def simulate(
    model: DwellModel,
    duration: float,
    initial_trend: int,
    rng: np.random.Generator,
) -> TelegraphTrajectory:
    """Generate alternating dwell segments until the window is covered."""
    if duration <= 0:
        raise ValueError("duration must be positive")
    if initial_trend not in (+1, -1):
        raise ValueError("initial_trend must be +1 or -1")
    starts = [0.0]
    trends = [initial_trend]
    t = model.draw(initial_trend, rng)
    trend = initial_trend
    while t < duration:
        trend = -trend
        starts.append(t)
        trends.append(trend)
        t += model.draw(trend, rng)
    return TelegraphTrajectory(tuple(starts), tuple(trends), duration)


def empirical_fractions(traj: TelegraphTrajectory) -> tuple[float, float]:
    """Time fractions (up, down); they sum to 1 exactly."""
    durations = traj.segment_durations()
    trends = np.asarray(traj.trends)
    up = float(durations[trends > 0].sum()) / traj.total_duration
    return up, 1.0 - up


def trend_at(traj: TelegraphTrajectory, t: float) -> int:
    return traj.trend_at(t)


def flip_parity(
    model: DwellModel, delay: float, rng: np.random.Generator, size=None
):
    """Whether the trend has switched an odd number of times within delay.

    Vectorized over size for Monte Carlo ensembles; exact for both dwell
    distributions by simulating switch epochs only.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    if size is None:
        return _single_parity(model, delay, rng)
    return np.array([_single_parity(model, delay, rng) for _ in range(int(size))])


def _single_parity(model: DwellModel, delay: float, rng) -> bool:
    if delay == 0:
        return False
    t = 0.0
    trend = +1 if rng.random() < model.stationary_up_fraction() else -1
    flips = 0
    # residual life of the first segment: exponential is memoryless; a
    # fixed-duration segment observed at a uniform time has uniform residual
    first = model.draw(trend, rng)
    if model.distribution == FIXED:
        first *= rng.random()
    t += first
    while t < delay:
        trend = -trend
        flips += 1
        t += model.draw(trend, rng)
    return flips % 2 == 1


def odd_flip_probability(model: DwellModel, delay: float) -> float:
    """Closed-form odd-switch probability for symmetric exponential dwells."""
    if model.distribution != EXPONENTIAL or model.tau_plus != model.tau_minus:
        raise ValueError("closed form only for symmetric exponential dwells")
    return 0.5 * (1.0 - np.exp(-2.0 * delay / model.tau_plus))


def trajectory_rows(traj: TelegraphTrajectory):
    """(start_time, trend) rows for CSV export."""
    return [(float(s), int(t)) for s, t in zip(traj.start_times, traj.trends)]
