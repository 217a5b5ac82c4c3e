"""Stochastic two-channel-polarizer coincidence experiment.

Each emitted pair draws an outcome pair (+,+), (+,-), (-,+), (-,-) from the
Born probabilities at the (possibly misaligned) analyzer orientations; each
side then records its outcome with probability ``efficiency`` and only pairs
recorded on both sides enter the coincidence tallies.  The experimental
correlation estimator is

    E = (R++ + R-- - R+- - R-+) / (R++ + R-- + R+- + R-+)

and S = E(a,b) - E(a,b') + E(a',b) + E(a',b') combines the four runs.

Misalignment is a pointing error: each side's effective orientation is the
nominal one rotated by an angle drawn from N(0, sigma) about a uniformly
random transverse axis.  Averaged over pairs this damps every correlation by
exactly exp(-sigma^2), which is how a lab-like S below the ideal value is
produced (uniform detection inefficiency alone leaves E unbiased under fair
sampling; it only widens the error bars).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY2, TwoQubitState, UnitVector3
from .chsh import JointProbabilities, MeasurementSettings
from .lhv import CorrelationEstimate

_CHUNK = 1 << 20


class InsufficientDataError(ValueError):
    """No coincidences were recorded; the estimator is undefined."""


@dataclass(frozen=True)
class CoincidenceCounts:
    """Coincidence tallies for one orientation pair."""

    r_pp: int
    r_pm: int
    r_mp: int
    r_mm: int
    n_pairs: int

    def __post_init__(self):
        counts = (self.r_pp, self.r_pm, self.r_mp, self.r_mm)
        if any(c < 0 for c in counts):
            raise ValueError(f"negative count in {counts}")
        if sum(counts) > self.n_pairs:
            raise ValueError("more coincidences than emitted pairs")

    def total(self) -> int:
        return self.r_pp + self.r_pm + self.r_mp + self.r_mm

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.r_pp, self.r_pm, self.r_mp, self.r_mm)


@dataclass(frozen=True)
class ExperimentConfig:
    """Source state, analyzer quadruple, and apparatus knobs for one experiment.

    ``n_pairs`` is the number of emitted pairs per orientation pair;
    ``efficiency`` is the per-side recording probability; ``misalignment_sigma``
    is the pointing-error width in radians (correlations damp by
    exp(-sigma^2) on average).
    """

    state: TwoQubitState
    settings: MeasurementSettings
    n_pairs: int
    efficiency: float = 1.0
    misalignment_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")
        if not (0.0 < self.efficiency <= 1.0):
            raise ValueError("efficiency must be in (0, 1]")
        if not (self.misalignment_sigma >= 0.0):
            raise ValueError("misalignment_sigma must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class SEstimate:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b') with quadrature-combined error."""

    s_value: float
    std_error: float
    e_values: tuple[float, float, float, float]


@dataclass(frozen=True)
class ExperimentReport:
    """Counts, per-pair correlation estimates, and the combined S for one run."""

    config: ExperimentConfig
    counts: tuple[CoincidenceCounts, ...]
    correlations: tuple[CorrelationEstimate, ...]
    s: SEstimate


def misalignment_for_damping(damping: float) -> float:
    """Pointing-error width sigma with mean correlation damping exp(-sigma^2) = damping."""
    if not (0.0 < damping <= 1.0):
        raise ValueError("damping must be in (0, 1]")
    return abs(math.sqrt(-math.log(damping)))


def _bloch_data(state: TwoQubitState):
    """Single-side Bloch vectors and the 3x3 correlation tensor of the state."""
    psi = state.amplitudes
    sigmas = (SIGMA_X, SIGMA_Y, SIGMA_Z)
    m_a = np.array([np.vdot(psi, np.kron(s, IDENTITY2) @ psi).real for s in sigmas])
    m_b = np.array([np.vdot(psi, np.kron(IDENTITY2, s) @ psi).real for s in sigmas])
    t = np.array(
        [[np.vdot(psi, np.kron(sk, sl) @ psi).real for sl in sigmas] for sk in sigmas]
    )
    return m_a, m_b, t


def _perturb(rng: np.random.Generator, nominal: np.ndarray, sigma: float, n: int) -> np.ndarray:
    """Rotate ``nominal`` by N(0, sigma) angles about random transverse axes."""
    delta = rng.normal(0.0, sigma, n)
    psi = rng.uniform(0.0, 2.0 * math.pi, n)
    # Orthonormal frame transverse to the nominal direction.
    helper = np.array([0.0, 0.0, 1.0]) if abs(nominal[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(nominal, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(nominal, e1)
    trans = np.cos(psi)[:, None] * e1 + np.sin(psi)[:, None] * e2
    return np.cos(delta)[:, None] * nominal + np.sin(delta)[:, None] * trans


def simulate_run(cfg: ExperimentConfig, a: UnitVector3, b: UnitVector3, stream: int = 0) -> CoincidenceCounts:
    """Emit cfg.n_pairs pairs at orientations (a, b) and tally coincidences.

    ``stream`` separates the random streams of runs sharing one config (the
    four orientation pairs of estimate_S use streams 0..3); counts are
    bit-identical for identical (config, orientations, stream).
    """
    rng = np.random.default_rng([cfg.seed, stream])
    n = cfg.n_pairs
    eff = cfg.efficiency

    if cfg.misalignment_sigma == 0.0:
        # Fixed Born probabilities: multinomial outcomes, then binomial
        # thinning with the both-sides recording probability.
        from .chsh import joint_probabilities

        p = np.array(joint_probabilities(cfg.state, a, b).as_tuple())
        p = np.clip(p, 0.0, None)
        p /= p.sum()
        outcome = rng.multinomial(n, p)
        if eff < 1.0:
            recorded = rng.binomial(outcome, eff * eff)
        else:
            recorded = outcome
        return CoincidenceCounts(*(int(c) for c in recorded), n_pairs=n)

    m_a, m_b, t = _bloch_data(cfg.state)
    av, bv = a.as_array(), b.as_array()
    tallies = np.zeros(4, dtype=np.int64)
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        a_eff = _perturb(rng, av, cfg.misalignment_sigma, m)
        b_eff = _perturb(rng, bv, cfg.misalignment_sigma, m)
        ma = a_eff @ m_a
        mb = b_eff @ m_b
        e = np.einsum("ij,jk,ik->i", a_eff, t, b_eff)
        # Born probabilities p_ij = (1 + i*ma + j*mb + ij*e)/4 per pair.
        p_pp = np.clip((1.0 + ma + mb + e) / 4.0, 0.0, 1.0)
        p_pm = np.clip((1.0 + ma - mb - e) / 4.0, 0.0, 1.0)
        p_mp = np.clip((1.0 - ma + mb - e) / 4.0, 0.0, 1.0)
        u = rng.uniform(size=m)
        outcome = (u >= p_pp).astype(np.int8)
        outcome += (u >= p_pp + p_pm).astype(np.int8)
        outcome += (u >= p_pp + p_pm + p_mp).astype(np.int8)
        if eff < 1.0:
            both = (rng.uniform(size=m) < eff) & (rng.uniform(size=m) < eff)
            outcome = outcome[both]
        tallies += np.bincount(outcome, minlength=4)
        done += m
    return CoincidenceCounts(*(int(c) for c in tallies), n_pairs=n)


def estimate_probabilities(c: CoincidenceCounts) -> JointProbabilities:
    """Outcome probabilities P_ij = R_ij / (R++ + R-- + R+- + R-+)."""
    total = c.total()
    if total == 0:
        raise InsufficientDataError("all coincidence counts are zero")
    return JointProbabilities(
        p_pp=c.r_pp / total, p_pm=c.r_pm / total, p_mp=c.r_mp / total, p_mm=c.r_mm / total
    )


def estimate_E(c: CoincidenceCounts) -> CorrelationEstimate:
    """Correlation (R++ + R-- - R+- - R-+) / total with multinomial delta-method error."""
    total = c.total()
    if total == 0:
        raise InsufficientDataError("all coincidence counts are zero")
    value = (c.r_pp + c.r_mm - c.r_pm - c.r_mp) / total
    se = math.sqrt(max(0.0, 1.0 - value * value) / total)
    return CorrelationEstimate(value=value, std_error=se, n_samples=total)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Simulate the four orientation pairs and assemble counts, E's, and S."""
    s = cfg.settings
    pairs = ((s.a, s.b), (s.a, s.b_prime), (s.a_prime, s.b), (s.a_prime, s.b_prime))
    counts = tuple(simulate_run(cfg, a, b, stream=i) for i, (a, b) in enumerate(pairs))
    estimates = tuple(estimate_E(c) for c in counts)
    e = [est.value for est in estimates]
    s_value = e[0] - e[1] + e[2] + e[3]
    se = math.sqrt(sum(est.std_error ** 2 for est in estimates))
    return ExperimentReport(
        config=cfg,
        counts=counts,
        correlations=estimates,
        s=SEstimate(s_value=s_value, std_error=se, e_values=tuple(e)),
    )


def estimate_S(cfg: ExperimentConfig) -> SEstimate:
    """S estimate for the configured analyzer quadruple."""
    return run_experiment(cfg).s
