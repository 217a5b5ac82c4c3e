"""Quantum spin correlations, the CHSH functional, and Gisin's construction.

The spin correlation coefficient is P(a, b) = <psi| (a.sigma) (x) (b.sigma) |psi>;
for the canonical state c1|01> + c2|10> it reduces to the closed form
2*c1*c2*(ax*bx + ay*by) - az*bz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    UnitVector3,
    TwoQubitState,
    pauli_dot,
    tensor_observable,
)


class SeparableStateError(ValueError):
    """The state admits a local model; the requested construction needs entanglement."""


@dataclass(frozen=True)
class MeasurementSettings:
    """Analyzer quadruple (a, b, a', b') entering the CHSH functional."""

    a: UnitVector3
    b: UnitVector3
    a_prime: UnitVector3
    b_prime: UnitVector3


@dataclass(frozen=True)
class JointProbabilities:
    """Born probabilities of the outcome pairs (+,+), (+,-), (-,+), (-,-)."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        ps = (self.p_pp, self.p_pm, self.p_mp, self.p_mm)
        if any(p < 0.0 or p > 1.0 for p in ps):
            raise ValueError(f"probability outside [0, 1]: {ps}")
        if abs(sum(ps) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {sum(ps)}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_pp, self.p_pm, self.p_mp, self.p_mm)

    def correlation(self) -> float:
        return self.p_pp + self.p_mm - self.p_pm - self.p_mp


def projector(n: UnitVector3) -> np.ndarray:
    """Rank-1 projector (I + n.sigma) / 2 onto the +1 eigenstate of n.sigma."""
    return 0.5 * (IDENTITY2 + pauli_dot(n))


def _sigma_dot(v: np.ndarray) -> np.ndarray:
    """n.sigma for an arbitrary (not necessarily unit) 3-vector."""
    return v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z


def projector_product(a: UnitVector3, b: UnitVector3) -> np.ndarray:
    """Product of the two rank-1 projectors in closed form.

    ab = I/4 + (a + b).sigma/4 + (a.b) I/4 + i (a x b).sigma/4; it vanishes
    exactly when b = -a, the only case where the projectors are orthogonal.
    """
    av, bv = a.as_array(), b.as_array()
    return (
        0.25 * (1.0 + a.dot(b)) * IDENTITY2
        + 0.25 * _sigma_dot(av + bv)
        + 0.25j * _sigma_dot(np.cross(av, bv))
    )


def correlation_matrix(state: TwoQubitState, a: UnitVector3, b: UnitVector3) -> float:
    """Spin correlation coefficient <psi|(a.sigma)(x)(b.sigma)|psi>.

    The observable is Hermitian so the expectation is real; the imaginary
    part is numerical noise and is dropped.
    """
    psi = state.amplitudes
    return float(np.vdot(psi, tensor_observable(a, b) @ psi).real)


def correlation_closed(c1: float, c2: float, a: UnitVector3, b: UnitVector3) -> float:
    """Closed-form correlation 2*c1*c2*(ax*bx + ay*by) - az*bz for c1|01> + c2|10>."""
    if abs(c1 * c1 + c2 * c2 - 1.0) > 1e-9:
        raise ValueError("coefficients not normalized")
    return 2.0 * c1 * c2 * (a.x * b.x + a.y * b.y) - a.z * b.z


def joint_probabilities(state: TwoQubitState, a: UnitVector3, b: UnitVector3) -> JointProbabilities:
    """Born-rule outcome probabilities with projectors (I +- n.sigma)/2 per side."""
    psi = state.amplitudes
    pi_a = (projector(a), projector(-a))
    pi_b = (projector(b), projector(-b))
    vals = []
    for pa in pi_a:
        for pb in pi_b:
            p = float(np.vdot(psi, np.kron(pa, pb) @ psi).real)
            vals.append(min(1.0, max(0.0, p)))  # clip float noise at the edges
    return JointProbabilities(*vals)


def chsh_value(state: TwoQubitState, s: MeasurementSettings) -> float:
    """CHSH combination |P(a,b) - P(a,b')| + P(a',b) + P(a',b')."""
    p_ab = correlation_matrix(state, s.a, s.b)
    p_abp = correlation_matrix(state, s.a, s.b_prime)
    p_apb = correlation_matrix(state, s.a_prime, s.b)
    p_apbp = correlation_matrix(state, s.a_prime, s.b_prime)
    return abs(p_ab - p_abp) + p_apb + p_apbp


def chsh_value_symmetric(state: TwoQubitState, s: MeasurementSettings) -> float:
    """Symmetric CHSH combination |P(a,b) - P(a,b')| + |P(a',b') + P(a',b)|."""
    p_ab = correlation_matrix(state, s.a, s.b)
    p_abp = correlation_matrix(state, s.a, s.b_prime)
    p_apb = correlation_matrix(state, s.a_prime, s.b)
    p_apbp = correlation_matrix(state, s.a_prime, s.b_prime)
    return abs(p_ab - p_abp) + abs(p_apbp + p_apb)


def gisin_settings(c1: float, c2: float) -> MeasurementSettings:
    """Analyzer quadruple maximizing the CHSH value for c1|01> + c2|10>.

    All four vectors lie in the xz-plane: a = z, a' = (+-1, 0, 0) with the
    sign of c1*c2, and b, b' chosen so cos(beta) = -cos(beta') =
    (1 + 4(c1*c2)^2)^(-1/2) with both sines positive (beta' in (pi/2, pi)).
    """
    if abs(c1 * c1 + c2 * c2 - 1.0) > 1e-9:
        raise ValueError("coefficients not normalized")
    prod = c1 * c2
    if prod == 0.0:
        raise SeparableStateError("c1*c2 = 0: separable state cannot violate the bound")
    denom = math.sqrt(1.0 + 4.0 * prod * prod)
    cos_b = 1.0 / denom
    sin_b = 2.0 * abs(prod) / denom
    a = UnitVector3(0.0, 0.0, 1.0)
    a_prime = UnitVector3(math.copysign(1.0, prod), 0.0, 0.0)
    b = UnitVector3(sin_b, 0.0, cos_b)
    b_prime = UnitVector3(sin_b, 0.0, -cos_b)
    return MeasurementSettings(a=a, b=b, a_prime=a_prime, b_prime=b_prime)


def max_violation(c1: float, c2: float) -> float:
    """Largest CHSH value 2*(1 + 4*(c1*c2)^2)^(1/2) attained at gisin_settings."""
    if abs(c1 * c1 + c2 * c2 - 1.0) > 1e-9:
        raise ValueError("coefficients not normalized")
    return 2.0 * math.sqrt(1.0 + 4.0 * (c1 * c2) ** 2)
