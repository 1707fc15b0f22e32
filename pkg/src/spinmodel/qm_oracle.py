"""Independent standard-quantum-mechanics reference values.

Everything here is computed with explicit 2- and 4-dimensional complex
algebra written out by hand, deliberately sharing no code with the
simulation modules it cross-checks.  Measurement directions live in the
plane containing the z-axis and are parameterized by their polar angle.
"""

from __future__ import annotations

import cmath
import math

_NORM_TOL = 1e-12

SINGLET = "psi_minus"  # (ud - du)/sqrt2
TRIPLET_PSI_PLUS = "psi_plus"  # (ud + du)/sqrt2
TRIPLET_PHI_MINUS = "phi_minus"  # (uu - dd)/sqrt2
TRIPLET_PHI_PLUS = "phi_plus"  # (uu + dd)/sqrt2

BELL_KINDS = (SINGLET, TRIPLET_PSI_PLUS, TRIPLET_PHI_MINUS, TRIPLET_PHI_PLUS)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# amplitudes in the tensor basis (uu, ud, du, dd)
_BELL_AMPLITUDES = {
    SINGLET: (0.0, _INV_SQRT2, -_INV_SQRT2, 0.0),
    TRIPLET_PSI_PLUS: (0.0, _INV_SQRT2, _INV_SQRT2, 0.0),
    TRIPLET_PHI_MINUS: (_INV_SQRT2, 0.0, 0.0, -_INV_SQRT2),
    TRIPLET_PHI_PLUS: (_INV_SQRT2, 0.0, 0.0, _INV_SQRT2),
}


class Spinor2:
    """Unit-norm two-component spinor."""

    def __init__(self, up: complex, down: complex):
        self.up = complex(up)
        self.down = complex(down)
        norm = abs(self.up) ** 2 + abs(self.down) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"spinor not normalized: |psi|^2 = {norm!r}")

    def inner(self, other: "Spinor2") -> complex:
        return self.up.conjugate() * other.up + self.down.conjugate() * other.down


class PairState:
    """Unit-norm two-spin state, amplitudes in the (uu, ud, du, dd) basis."""

    def __init__(self, amplitudes):
        self.amplitudes = tuple(complex(a) for a in amplitudes)
        if len(self.amplitudes) != 4:
            raise ValueError("need four amplitudes")
        norm = sum(abs(a) ** 2 for a in self.amplitudes)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"pair state not normalized: |psi|^2 = {norm!r}")


def bell_state(kind: str) -> PairState:
    if kind not in _BELL_AMPLITUDES:
        raise ValueError(f"unknown Bell state {kind!r}")
    return PairState(_BELL_AMPLITUDES[kind])


def rotated_up_state(beta: float) -> Spinor2:
    """Spin-up eigenstate of the axis tilted by beta from z."""
    return Spinor2(math.cos(beta / 2.0), math.sin(beta / 2.0))


def rotated_down_state(beta: float) -> Spinor2:
    return Spinor2(math.sin(beta / 2.0), -math.cos(beta / 2.0))


def overlap_prob(beta1: float, beta2: float) -> float:
    """|<up_b1 | up_b2>|^2, evaluated from the explicit inner product."""
    amp = rotated_up_state(beta1).inner(rotated_up_state(beta2))
    return abs(amp) ** 2


def overlap_prob_down(beta1: float, beta2: float) -> float:
    amp = rotated_up_state(beta1).inner(rotated_down_state(beta2))
    return abs(amp) ** 2


def _spin_matrix(angle: float):
    """sigma . n for the in-plane unit vector at polar angle `angle`.

    n = (sin a, 0, cos a), so the matrix is cos(a) sigma_z + sin(a) sigma_x.
    """
    c, s = math.cos(angle), math.sin(angle)
    return ((complex(c), complex(s)), (complex(s), complex(-c)))


def _tensor_apply(ma, mb, amps):
    """(ma x mb) |amps> for 2x2 blocks on the (uu, ud, du, dd) basis."""
    out = [0j, 0j, 0j, 0j]
    for i in range(2):  # Alice row
        for j in range(2):  # Bob row
            acc = 0j
            for k in range(2):
                for l in range(2):
                    acc += ma[i][k] * mb[j][l] * amps[2 * k + l]
            out[2 * i + j] = acc
    return out


def bell_correlation(kind: str, a: float, b: float) -> float:
    """<state| (sigma.a) x (sigma.b) |state> by explicit 4x4 algebra."""
    state = bell_state(kind)
    applied = _tensor_apply(_spin_matrix(a), _spin_matrix(b), state.amplitudes)
    value = sum(
        x.conjugate() * y for x, y in zip(state.amplitudes, applied)
    )
    if abs(value.imag) > 1e-12:
        raise AssertionError("correlation should be real")
    return value.real


def singlet_correlation(a: float, b: float) -> float:
    return bell_correlation(SINGLET, a, b)


def chsh_statistic(kind: str, a: float, ap: float, b: float, bp: float) -> float:
    return abs(
        bell_correlation(kind, a, b)
        - bell_correlation(kind, a, bp)
        + bell_correlation(kind, ap, b)
        + bell_correlation(kind, ap, bp)
    )
