"""Single-qubit polarization states: Jones vectors, density matrices, Bloch vectors.

Bloch convention: H is the +z pole, D the +x pole and L = (H + iV)/sqrt(2)
the +y pole, with the standard Pauli matrices. This puts all six canonical
polarization states on the six axis poles.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalStateError, NormalizationError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_FLOOR = -1e-10
NORM_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)
PAULI_LABELS = ("I", "X", "Y", "Z")

_SQ = 1 / np.sqrt(2)


class StateLabel(str, enum.Enum):
    H = "H"
    V = "V"
    D = "D"
    A = "A"
    R = "R"
    L = "L"


CANONICAL_LABELS = tuple(StateLabel)

_AMPLITUDES = {
    StateLabel.H: (1.0, 0.0),
    StateLabel.V: (0.0, 1.0),
    StateLabel.D: (_SQ, _SQ),
    StateLabel.A: (_SQ, -_SQ),
    StateLabel.R: (_SQ, -1j * _SQ),
    StateLabel.L: (_SQ, 1j * _SQ),
}


@dataclass(frozen=True)
class JonesVector:
    """Polarization amplitude pair in the H/V basis."""

    amp_h: complex
    amp_v: complex

    @classmethod
    def from_array(cls, vec) -> JonesVector:
        vec = np.asarray(vec, dtype=complex).reshape(2)
        return cls(complex(vec[0]), complex(vec[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=complex)

    @property
    def norm_squared(self) -> float:
        return abs(self.amp_h) ** 2 + abs(self.amp_v) ** 2

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared - 1.0) <= tol

    def normalized(self) -> JonesVector:
        n = np.sqrt(self.norm_squared)
        if n == 0:
            raise NormalizationError("cannot normalize a zero Jones vector")
        return JonesVector(self.amp_h / n, self.amp_v / n)


@dataclass(frozen=True)
class WeightedJones:
    """A normalized polarization together with the probability carried by its mode.

    ``state`` is None when the mode carries no amplitude at all.
    """

    state: JonesVector | None
    weight: float

    @classmethod
    def from_unnormalized(cls, vec, tol: float = 1e-30) -> WeightedJones:
        vec = np.asarray(vec, dtype=complex)
        weight = float(np.vdot(vec, vec).real)
        if weight <= tol:
            return cls(None, 0.0)
        return cls(JonesVector.from_array(vec / np.sqrt(weight)), weight)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 2x2 density matrix. The stored array is read-only."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise NonPhysicalStateError(f"density matrix must be 2x2, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise NonPhysicalStateError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise NonPhysicalStateError(f"trace {np.trace(m).real:.3g} != 1")
        if np.linalg.eigvalsh(m).min() < EIGEN_FLOOR:
            raise NonPhysicalStateError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def allclose(self, other: DensityMatrix, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix, np.asarray(other), rtol=0, atol=atol))

    def to_json(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]

    @classmethod
    def from_json(cls, data) -> DensityMatrix:
        arr = np.array([[complex(re, im) for re, im in row] for row in data])
        return cls(arr)


@dataclass(frozen=True)
class BlochVector:
    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        if self.norm > 1 + 1e-10:
            raise NonPhysicalStateError(f"Bloch vector norm {self.norm:.6g} exceeds 1")

    @property
    def array(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz])

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.rx**2 + self.ry**2 + self.rz**2))

    def to_json(self) -> dict:
        return {"rx": self.rx, "ry": self.ry, "rz": self.rz}

    @classmethod
    def from_json(cls, data: dict) -> BlochVector:
        return cls(float(data["rx"]), float(data["ry"]), float(data["rz"]))


def pure_from_label(label: StateLabel | str) -> JonesVector:
    h, v = _AMPLITUDES[StateLabel(label)]
    return JonesVector(complex(h), complex(v))


def density_from_pure(psi: JonesVector) -> DensityMatrix:
    if not psi.is_normalized():
        raise NormalizationError(f"Jones vector has norm^2 {psi.norm_squared:.6g}")
    v = psi.vector
    return DensityMatrix(np.outer(v, v.conj()))


def density_from_label(label: StateLabel | str) -> DensityMatrix:
    return density_from_pure(pure_from_label(label))


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(IDENTITY / 2)


def bloch_from_density(rho: DensityMatrix) -> BlochVector:
    m = np.asarray(rho)
    r = [float(np.trace(m @ s).real) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    return BlochVector(*r)


def density_from_bloch(r: BlochVector | tuple) -> DensityMatrix:
    if not isinstance(r, BlochVector):
        r = BlochVector(*map(float, r))
    m = (IDENTITY + r.rx * SIGMA_X + r.ry * SIGMA_Y + r.rz * SIGMA_Z) / 2
    return DensityMatrix(m)


def purity(rho: DensityMatrix) -> float:
    m = np.asarray(rho)
    return float(np.trace(m @ m).real)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix; tiny negative eigenvalues are clipped."""
    w, u = np.linalg.eigh((m + m.conj().T) / 2)
    return (u * np.sqrt(np.clip(w, 0, None))) @ u.conj().T


def uhlmann_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """(Tr sqrt(sqrt(a) b sqrt(a)))^2 for PSD matrices of equal size.

    Evaluated as the squared nuclear norm of sqrt(a) sqrt(b), which avoids
    taking square roots of round-off-sized eigenvalues when either input
    is rank deficient.
    """
    sa = psd_sqrt(np.asarray(a, dtype=complex))
    sb = psd_sqrt(np.asarray(b, dtype=complex))
    f = float(np.linalg.svd(sa @ sb, compute_uv=False).sum() ** 2)
    return min(max(f, 0.0), 1.0)


def state_fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    return uhlmann_fidelity(np.asarray(rho1), np.asarray(rho2))


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    diff = np.asarray(rho1) - np.asarray(rho2)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def random_pure(rng: np.random.Generator) -> JonesVector:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return JonesVector.from_array(v / np.linalg.norm(v))


def random_density(rng: np.random.Generator) -> DensityMatrix:
    """Random mixed state from the Hilbert-Schmidt ensemble."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return DensityMatrix((m + m.conj().T) / 2)
