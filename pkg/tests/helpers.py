"""Shared random generators for the test suite."""
import numpy as np

from belllab import MeasurementSettings, TwoQubitState, UnitVector3


def random_unit_vector(rng: np.random.Generator) -> UnitVector3:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return UnitVector3(*v)


def random_settings(rng: np.random.Generator) -> MeasurementSettings:
    return MeasurementSettings(
        a=random_unit_vector(rng),
        b=random_unit_vector(rng),
        a_prime=random_unit_vector(rng),
        b_prime=random_unit_vector(rng),
    )


def random_state(rng: np.random.Generator) -> TwoQubitState:
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps /= np.linalg.norm(amps)
    return TwoQubitState(amps)


def random_coefficients(rng: np.random.Generator, signed: bool = True) -> tuple[float, float]:
    """Normalized (c1, c2) bounded away from the separable limit."""
    t = rng.uniform(0.05, np.pi / 2 - 0.05)
    c1, c2 = np.cos(t), np.sin(t)
    if signed and rng.random() < 0.5:
        c2 = -c2
    return float(c1), float(c2)


def random_unitary2(rng: np.random.Generator) -> np.ndarray:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))
