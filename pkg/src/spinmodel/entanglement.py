"""Bell-pair correlations from jointly constrained orientation trends.

A Bell pair is encoded by one same/anti correlation per axis (z and y):
the four combinations map onto the four Bell states.  Each axis carries a
joint two-point density with half weight on each of its two compatible
corners.  Expectation values follow the branch-sum convention: the total
E(a, b) is the sum of the z-branch and y-branch conditional expectations
(the y-branch angles are the complements pi/2 - a, pi/2 - b).  Because a
naive equiprobable-branch Monte Carlo mean produces half of that sum, the
sampled estimator is defined as E_hat = 2 * mean(S_A * S_B).

Delayed measurement degrades the z-branch correlation: Bob's trend
evolves as a telegraph process during the delay, and an odd number of
switches flips his sub-state.  Odd parity is the same event as "trend at
the delay differs from the initial trend", which has a closed form for
exponential dwells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .telegraph import EXPONENTIAL, DwellModel, flip_parity

ANTI = "anti"
SAME = "same"

AXIS_Z = "z"
AXIS_Y = "y"

ANALYTIC = "analytic"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class BellPairModel:
    """Per-axis correlation kind; the four combinations are the Bell states."""

    z_correlation: str
    y_correlation: str

    def __post_init__(self):
        for kind in (self.z_correlation, self.y_correlation):
            if kind not in (ANTI, SAME):
                raise ValueError("correlation kind must be 'anti' or 'same'")

    @property
    def name(self) -> str:
        return {
            (ANTI, ANTI): "psi_minus",
            (ANTI, SAME): "psi_plus",
            (SAME, ANTI): "phi_minus",
            (SAME, SAME): "phi_plus",
        }[(self.z_correlation, self.y_correlation)]


PSI_MINUS = BellPairModel(ANTI, ANTI)
PSI_PLUS = BellPairModel(ANTI, SAME)
PHI_MINUS = BellPairModel(SAME, ANTI)
PHI_PLUS = BellPairModel(SAME, SAME)

BELL_MODELS = {m.name: m for m in (PSI_MINUS, PSI_PLUS, PHI_MINUS, PHI_PLUS)}


@dataclass(frozen=True)
class JointTwoPointDensity:
    """Weights over the four (theta_A, theta_B) corners on one axis.

    Corner order: (0,0), (0,pi), (pi,0), (pi,pi).
    """

    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != 4 or any(x < 0 for x in w):
            raise ValueError("need four non-negative weights")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        object.__setattr__(self, "weights", w)

    def as_matrix(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float).reshape(2, 2)


def joint_density(model: BellPairModel, axis: str) -> JointTwoPointDensity:
    kind = {AXIS_Z: model.z_correlation, AXIS_Y: model.y_correlation}.get(axis)
    if kind is None:
        raise ValueError("axis must be 'z' or 'y'")
    if kind == ANTI:
        return JointTwoPointDensity((0.0, 0.5, 0.5, 0.0))
    return JointTwoPointDensity((0.5, 0.0, 0.0, 0.5))


def branch_expectation(correlation: str, alpha: float, beta: float) -> float:
    """Conditional E on one branch, angles measured from the branch axis.

    Summing the four outcome products weighted by the independent
    marginals cos^2/sin^2 collapses to +/- cos(alpha) cos(beta).
    """
    sign = -1.0 if correlation == ANTI else +1.0
    return sign * math.cos(alpha) * math.cos(beta)


def correlation(model: BellPairModel, a: float, b: float) -> float:
    """E(a, b): sum of the z-branch and the complementary y-branch terms."""
    e_z = branch_expectation(model.z_correlation, a, b)
    e_y = branch_expectation(
        model.y_correlation, math.pi / 2 - a, math.pi / 2 - b
    )
    return e_z + e_y


def time_constraint_satisfied(
    t_alice: float, t_bob: float, tau_plus: float
) -> bool:
    """Whether Bob measures soon enough for Alice's inference to hold."""
    if t_bob < t_alice:
        raise ValueError("t_bob must not precede t_alice")
    return (t_bob - t_alice) < tau_plus


# ---------------------------------------------------------------------------
# sampling


def _branch_up_probs(kind: str, alpha: float, beta: float, sub: np.ndarray):
    """Per-sample up-probabilities for Alice and Bob on one branch.

    sub selects the delta sub-branch: 0 means Alice's corner is theta = 0.
    """
    cos2a = math.cos(alpha / 2.0) ** 2
    cos2b = math.cos(beta / 2.0) ** 2
    p_alice = np.where(sub == 0, cos2a, 1.0 - cos2a)
    if kind == ANTI:
        p_bob = np.where(sub == 0, 1.0 - cos2b, cos2b)
    else:
        p_bob = np.where(sub == 0, cos2b, 1.0 - cos2b)
    return p_alice, p_bob


def sample_pair_outcome(
    model: BellPairModel, a: float, b: float, rng: np.random.Generator
):
    """One joint measurement: (S_A, S_B, branch_tag)."""
    s_a, s_b, branch = sample_pair_outcomes(model, a, b, 1, rng)
    tag = AXIS_Z if branch[0] == 0 else AXIS_Y
    return int(s_a[0]), int(s_b[0]), tag


def sample_pair_outcomes(
    model: BellPairModel,
    a: float,
    b: float,
    n: int,
    rng: np.random.Generator,
    bob_flip_z=None,
    bob_flip_y=None,
):
    """Vectorized joint outcomes; returns (S_A, S_B, branch) arrays.

    branch is 0 for z, 1 for y.  The optional flip masks invert Bob's
    sub-state on the corresponding branch (delayed-measurement model).
    """
    branch = (rng.random(n) < 0.5).astype(np.int8)  # 0 -> z, 1 -> y
    sub = (rng.random(n) < 0.5).astype(np.int8)
    if bob_flip_z is not None:
        sub_z = np.where(bob_flip_z & (branch == 0), 1 - sub, sub)
    else:
        sub_z = sub
    if bob_flip_y is not None:
        sub_y = np.where(bob_flip_y & (branch == 1), 1 - sub, sub)
    else:
        sub_y = sub

    pz_a, pz_b = _branch_up_probs(model.z_correlation, a, b, sub)
    # Bob's flipped sub-state changes only his own marginal
    _, pz_b_flipped = _branch_up_probs(model.z_correlation, a, b, sub_z)
    py_a, py_b = _branch_up_probs(
        model.y_correlation, math.pi / 2 - a, math.pi / 2 - b, sub
    )
    _, py_b_flipped = _branch_up_probs(
        model.y_correlation, math.pi / 2 - a, math.pi / 2 - b, sub_y
    )

    p_alice = np.where(branch == 0, pz_a, py_a)
    p_bob = np.where(branch == 0, pz_b_flipped, py_b_flipped)
    s_a = np.where(rng.random(n) < p_alice, 1, -1)
    s_b = np.where(rng.random(n) < p_bob, 1, -1)
    return s_a, s_b, branch


def estimate_correlation(
    model: BellPairModel,
    a: float,
    b: float,
    n: int,
    rng: np.random.Generator,
    **flips,
):
    """Branch-sum Monte Carlo estimator E_hat = 2 mean(S_A S_B) and its SE."""
    s_a, s_b, _ = sample_pair_outcomes(model, a, b, n, rng, **flips)
    products = (s_a * s_b).astype(float)
    e_hat = 2.0 * float(np.mean(products))
    stderr = 2.0 * float(np.std(products) / math.sqrt(n))
    return e_hat, stderr


# ---------------------------------------------------------------------------
# CHSH


@dataclass(frozen=True)
class MeasurementPlan:
    alice_angles: tuple = (0.0, math.pi / 2)
    bob_angles: tuple = (math.pi / 4, 3 * math.pi / 4)
    samples: int = 10**6
    delay: float = 0.0
    dwell: DwellModel = DwellModel()

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.delay < 0:
            raise ValueError("delay must be non-negative")


@dataclass(frozen=True)
class ChshResult:
    settings: tuple  # ((a, b), (a, b'), (a', b), (a', b'))
    expectations: tuple
    stderrs: tuple
    statistic: float

    def rows(self):
        for (a, b), e, se in zip(self.settings, self.expectations, self.stderrs):
            yield (a, b, e, se)


def _chsh_from_terms(es):
    return abs(es[0] - es[1] + es[2] + es[3])


def chsh(
    plan: MeasurementPlan,
    model: BellPairModel,
    mode: str = ANALYTIC,
    rng: np.random.Generator | None = None,
    degrade_y: bool = False,
) -> ChshResult:
    """CHSH statistic for the plan's four settings.

    A zero delay reproduces the simultaneous-measurement Bell test; a
    positive delay applies the telegraph degradation to Bob's branches.
    """
    a, ap = plan.alice_angles
    b, bp = plan.bob_angles
    settings = ((a, b), (a, bp), (ap, b), (ap, bp))
    es, ses = [], []
    for sa, sb in settings:
        if plan.delay == 0 and mode == ANALYTIC:
            es.append(correlation(model, sa, sb))
            ses.append(0.0)
        elif mode == ANALYTIC:
            es.append(
                delayed_correlation(
                    model, sa, sb, plan.delay, plan.dwell, ANALYTIC,
                    degrade_y=degrade_y,
                )
            )
            ses.append(0.0)
        else:
            if rng is None:
                raise ValueError("Monte Carlo mode needs an rng")
            if plan.delay == 0:
                e, se = estimate_correlation(model, sa, sb, plan.samples, rng)
            else:
                e, se = _delayed_mc(
                    model, sa, sb, plan.delay, plan.dwell, plan.samples, rng,
                    degrade_y,
                )
            es.append(e)
            ses.append(se)
    return ChshResult(settings, tuple(es), tuple(ses), _chsh_from_terms(es))


# ---------------------------------------------------------------------------
# delayed measurement


def _switch_rate_sum(dwell: DwellModel) -> float:
    return 1.0 / dwell.tau_plus + 1.0 / dwell.tau_minus


def _odd_flip_prob(dwell: DwellModel, delay: float, start_trend: int, rng=None):
    """P(odd number of trend switches within the delay | initial trend).

    Odd parity is equivalent to the trend differing at the end of the
    delay, which for exponential dwells is the two-state Markov
    transition probability.  Fixed-duration dwells fall back to the
    stationary-phase parity sampler (uniform residual life of the first
    segment), averaged over the initial trend.
    """
    if delay == 0:
        return 0.0
    if dwell.distribution == EXPONENTIAL:
        s = _switch_rate_sum(dwell)
        rate_out = 1.0 / (dwell.tau_plus if start_trend > 0 else dwell.tau_minus)
        return (rate_out / s) * (1.0 - math.exp(-s * delay))
    if rng is None:
        raise ValueError("fixed-duration dwells need an rng for parity")
    return float(np.mean(flip_parity(dwell, delay, rng, size=4096)))


def _damping(dwell: DwellModel, delay: float) -> float:
    """1 - p_odd(+) - p_odd(-): the branch-expectation attenuation factor."""
    if dwell.distribution != EXPONENTIAL:
        raise ValueError("analytic delayed correlation needs exponential dwells")
    return math.exp(-_switch_rate_sum(dwell) * delay)


def delayed_correlation(
    model: BellPairModel,
    a: float,
    b: float,
    delay: float,
    dwell: DwellModel,
    mode: str = ANALYTIC,
    n: int = 10**6,
    rng: np.random.Generator | None = None,
    degrade_y: bool = False,
) -> float:
    """E(a, b) when Bob delays his measurement.

    The z-branch correlation decays by the odd-switch parity of Bob's
    telegraph trend; the y-branch is kept intact unless degrade_y.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    if mode == ANALYTIC:
        d = _damping(dwell, delay) if delay > 0 else 1.0
        e_z = branch_expectation(model.z_correlation, a, b) * d
        e_y = branch_expectation(
            model.y_correlation, math.pi / 2 - a, math.pi / 2 - b
        )
        if degrade_y:
            e_y *= d
        return e_z + e_y
    if rng is None:
        raise ValueError("Monte Carlo mode needs an rng")
    e, _ = _delayed_mc(model, a, b, delay, dwell, n, rng, degrade_y)
    return e


def _delayed_mc(model, a, b, delay, dwell, n, rng, degrade_y):
    # Bob's sub-branch flip probability depends on his initial trend, i.e.
    # on the sub-branch; approximate with the sub-branch average, exact for
    # symmetric dwells and unbiased for the branch expectation (see
    # _damping: only the sum p_odd(+) + p_odd(-) enters E).
    p_plus = _odd_flip_prob(dwell, delay, +1, rng)
    p_minus = _odd_flip_prob(dwell, delay, -1, rng)
    p_flip = 0.5 * (p_plus + p_minus)
    flip_z = rng.random(n) < p_flip
    flip_y = (rng.random(n) < p_flip) if degrade_y else None
    s_a, s_b, _ = sample_pair_outcomes(
        model, a, b, n, rng, bob_flip_z=flip_z, bob_flip_y=flip_y
    )
    products = (s_a * s_b).astype(float)
    return 2.0 * float(np.mean(products)), 2.0 * float(
        np.std(products) / math.sqrt(n)
    )


def outcome_counts(s_a: np.ndarray, s_b: np.ndarray) -> dict:
    """Coincidence counts keyed '++', '+-', '-+', '--' for CSV export."""
    return {
        "++": int(np.sum((s_a > 0) & (s_b > 0))),
        "+-": int(np.sum((s_a > 0) & (s_b < 0))),
        "-+": int(np.sum((s_a < 0) & (s_b > 0))),
        "--": int(np.sum((s_a < 0) & (s_b < 0))),
    }


def rank_one_residual(density: JointTwoPointDensity) -> float:
    """Max-abs residual of the best rank-1 approximation of the weights.

    A factorizable (product) joint density has residual 0; the Bell-state
    densities do not factorize.
    """
    w = density.as_matrix()
    u, s, vt = np.linalg.svd(w)
    approx = s[0] * np.outer(u[:, 0], vt[0])
    return float(np.max(np.abs(w - approx)))
