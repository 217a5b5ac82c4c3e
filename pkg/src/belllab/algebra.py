"""Two-qubit state algebra: unit vectors, Pauli observables, Schmidt form.

Amplitude ordering is fixed as |00>, |01>, |10>, |11> throughout the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12
# Singular values below this count as zero when classifying entanglement.
ENTANGLEMENT_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)
for _m in (SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY2):
    _m.setflags(write=False)


@dataclass(frozen=True)
class UnitVector3:
    """Analyzer/polarizer orientation on the unit sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise ValueError(f"non-finite component in {(self.x, self.y, self.z)}")
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n2 - 1.0) > NORM_TOL:
            raise ValueError(f"vector {(self.x, self.y, self.z)} is not unit (|v|^2 = {n2})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: "UnitVector3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)


def make_unit_vector(theta: float, phi: float) -> UnitVector3:
    """Unit vector from spherical angles: (sin t cos p, sin t sin p, cos t)."""
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise ValueError("spherical angles must be finite")
    st = math.sin(theta)
    return UnitVector3(st * math.cos(phi), st * math.sin(phi), math.cos(theta))


def angle_between(a: UnitVector3, b: UnitVector3) -> float:
    """Angle in [0, pi] between two unit vectors."""
    return math.acos(min(1.0, max(-1.0, a.dot(b))))


def pauli_dot(n: UnitVector3) -> np.ndarray:
    """Spin observable n . sigma: Hermitian, traceless, squares to identity."""
    return n.x * SIGMA_X + n.y * SIGMA_Y + n.z * SIGMA_Z


def tensor_observable(a: UnitVector3, b: UnitVector3) -> np.ndarray:
    """Joint spin observable (a . sigma) (x) (b . sigma) as a 4x4 matrix."""
    return np.kron(pauli_dot(a), pauli_dot(b))


@dataclass(frozen=True)
class TwoQubitState:
    """Normalized pure state of two qubits.

    ``amplitudes`` are the coefficients of |00>, |01>, |10>, |11> in that
    order; the squared moduli must sum to 1 within 1e-12.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1).copy()
        if amps.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {np.shape(self.amplitudes)}")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("non-finite amplitude")
        n2 = float(np.sum(np.abs(amps) ** 2))
        if abs(n2 - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: sum |a|^2 = {n2}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude_matrix(self) -> np.ndarray:
        """2x2 coefficient matrix M[i, j] = <ij|psi> (row: first qubit)."""
        return self.amplitudes.reshape(2, 2)


def canonical_state(c1: float, c2: float, permissive: bool = False) -> TwoQubitState:
    """State c1|01> + c2|10> with real signed coefficients, c1^2 + c2^2 = 1.

    Rejects the separable limit c1*c2 = 0 unless ``permissive`` is set.
    """
    n2 = c1 * c1 + c2 * c2
    if abs(n2 - 1.0) > 1e-9:
        raise ValueError(f"coefficients not normalized: c1^2 + c2^2 = {n2}")
    if not permissive and c1 * c2 == 0.0:
        raise ValueError("separable state (c1*c2 = 0); pass permissive=True to allow")
    n = math.sqrt(n2)
    return TwoQubitState(np.array([0.0, c1 / n, c2 / n, 0.0], dtype=complex))


@dataclass(frozen=True)
class SchmidtForm:
    """Schmidt data of a two-qubit pure state.

    ``c1 >= c2 >= 0`` are the singular values of the amplitude matrix.
    ``basis_a`` / ``basis_b`` are single-qubit unitaries whose k-th columns
    are the local Schmidt vectors, and ``sign`` is the +-1 relative sign
    between the two terms (the sign of the coefficient product when the
    state has real amplitudes; genuinely complex relative phases are folded
    into ``basis_b`` and ``sign`` is +1).  Reconstruction:

        amplitudes = c1 * outer(a0, b0) + sign * c2 * outer(a1, b1)

    up to a global phase.
    """

    c1: float
    c2: float
    sign: int
    basis_a: np.ndarray = field(repr=False)
    basis_b: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.c1 >= self.c2 >= 0.0):
            raise ValueError(f"require c1 >= c2 >= 0, got ({self.c1}, {self.c2})")
        if abs(self.c1 ** 2 + self.c2 ** 2 - 1.0) > NORM_TOL:
            raise ValueError("Schmidt coefficients not normalized")
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +-1, got {self.sign}")
        for name in ("basis_a", "basis_b"):
            u = np.asarray(getattr(self, name), dtype=complex).copy()
            if u.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            if not np.allclose(u.conj().T @ u, np.eye(2), atol=NORM_TOL):
                raise ValueError(f"{name} is not unitary")
            u.setflags(write=False)
            object.__setattr__(self, name, u)

    @property
    def entangled(self) -> bool:
        return self.c2 > ENTANGLEMENT_TOL

    def reconstruct(self) -> TwoQubitState:
        """State rebuilt from the Schmidt data (global phase fixed arbitrarily)."""
        m = self.c1 * np.outer(self.basis_a[:, 0], self.basis_b[:, 0])
        m = m + self.sign * self.c2 * np.outer(self.basis_a[:, 1], self.basis_b[:, 1])
        return TwoQubitState(m.reshape(4))


def _first_nonzero_phase(v: np.ndarray) -> complex:
    """Phase of the first component with modulus above 1e-12 (1 if none)."""
    for comp in v:
        if abs(comp) > 1e-12:
            return comp / abs(comp)
    return 1.0 + 0.0j


def schmidt_decompose(state: TwoQubitState) -> SchmidtForm:
    """Schmidt decomposition via SVD of the 2x2 amplitude matrix.

    Basis columns are ordered by descending singular value and phase-fixed so
    their first nonzero component is real positive; the residual relative
    phase between the two terms becomes ``sign`` when it is +-1 (real states)
    and is absorbed into ``basis_b`` otherwise.
    """
    m = state.amplitude_matrix()
    u, s, vh = np.linalg.svd(m)
    u = u.copy()
    vh = vh.copy()

    # Fix column phases of u, pushing them into the rows of vh.
    for k in range(2):
        ph = _first_nonzero_phase(u[:, k])
        u[:, k] *= np.conj(ph)
        vh[k, :] *= ph
    # Fix row phases of vh, keeping the leftover as per-term coefficients.
    coeff_phase = np.ones(2, dtype=complex)
    for k in range(2):
        ph = _first_nonzero_phase(vh[k, :])
        vh[k, :] *= np.conj(ph)
        coeff_phase[k] = ph

    sign = 1
    if s[1] > ENTANGLEMENT_TOL:
        rel = coeff_phase[1] / coeff_phase[0]  # residual relative phase e^{i delta}
        if abs(rel.imag) <= 1e-11:
            sign = 1 if rel.real > 0 else -1
        else:
            vh[1, :] *= rel

    return SchmidtForm(c1=float(s[0]), c2=float(s[1]), sign=sign, basis_a=u, basis_b=vh.T)


def concurrence(form: SchmidtForm) -> float:
    """Degree of entanglement 2*c1*c2: 0 for product states, 1 for maximal."""
    return 2.0 * form.c1 * form.c2
