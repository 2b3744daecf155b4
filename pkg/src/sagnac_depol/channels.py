"""Single-qubit channels in Kraus and Pauli-basis chi form.

chi normalization: E(rho) = sum_mn chi_mn s_m rho s_n with s = (I, X, Y, Z),
so a trace-preserving channel has Tr chi = 1 and the identity channel is
diag(1, 0, 0, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChannelValidationError, NonPhysicalProcessError, ParameterError
from .qstate import (
    CANONICAL_LABELS,
    IDENTITY,
    PAULI,
    PAULI_LABELS,
    DensityMatrix,
    density_from_label,
    random_density,
    uhlmann_fidelity,
)

COMPLETENESS_TOL = 1e-10
CHI_HERMITIAN_TOL = 1e-10
CHI_TRACE_TOL = 1e-10
CHI_FLOOR_ANALYTIC = -1e-12
CHI_FLOOR_ESTIMATED = -1e-8


@dataclass(frozen=True)
class ChannelParams:
    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ParameterError(f"degree of decoherence must lie in [0, 1], got {self.p}")


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    kraus_ops: tuple
    subnormalized: bool = False

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops or any(k.shape != (2, 2) for k in ops):
            raise ParameterError("a channel needs at least one 2x2 Kraus operator")
        for k in ops:
            k.flags.writeable = False
        object.__setattr__(self, "kraus_ops", ops)

    def completeness(self) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.kraus_ops)


@dataclass(frozen=True, eq=False)
class ChiMatrix:
    """Validated 4x4 process matrix in the (I, X, Y, Z) basis.

    ``estimated`` selects the looser eigenvalue floor used for tomographic output.
    """

    matrix: np.ndarray
    estimated: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise NonPhysicalProcessError(f"chi must be 4x4, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > CHI_HERMITIAN_TOL:
            raise NonPhysicalProcessError("chi is not Hermitian")
        if abs(np.trace(m) - 1) > CHI_TRACE_TOL:
            raise NonPhysicalProcessError(f"chi trace {np.trace(m).real:.6g} != 1")
        floor = CHI_FLOOR_ESTIMATED if self.estimated else CHI_FLOOR_ANALYTIC
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < floor:
            raise NonPhysicalProcessError("chi has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def to_json(self) -> dict:
        return {
            "basis": list(PAULI_LABELS),
            "chi": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }

    @classmethod
    def from_json(cls, data: dict, estimated: bool = True) -> ChiMatrix:
        if list(data.get("basis", [])) != list(PAULI_LABELS):
            raise ParameterError(f"unsupported chi basis {data.get('basis')!r}")
        arr = np.array([[complex(re, im) for re, im in row] for row in data["chi"]])
        return cls(arr, estimated=estimated)

    def real_part_rows(self) -> list[list]:
        """Rows of the real part, each prefixed by its Pauli label (CSV layout)."""
        return [[PAULI_LABELS[i], *map(float, self.matrix[i].real)] for i in range(4)]


@dataclass(frozen=True)
class ValidationReport:
    completeness_residual: float
    hermiticity_residual: float
    chi_min_eigenvalue: float
    tolerance: float = COMPLETENESS_TOL

    @property
    def trace_preserving(self) -> bool:
        return self.completeness_residual <= self.tolerance

    @property
    def physical(self) -> bool:
        return self.chi_min_eigenvalue >= CHI_FLOOR_ESTIMATED and self.hermiticity_residual <= CHI_HERMITIAN_TOL

    @property
    def ok(self) -> bool:
        return self.trace_preserving and self.physical


def depolarize(rho: DensityMatrix, p: float) -> DensityMatrix:
    """Closed form p I/2 + (1 - p) rho."""
    ChannelParams(p)
    return DensityMatrix(p * IDENTITY / 2 + (1 - p) * np.asarray(rho))


def depolarizing_channel(params: ChannelParams | float) -> QuantumChannel:
    p = params.p if isinstance(params, ChannelParams) else ChannelParams(float(params)).p
    weights = (1 - 3 * p / 4, p / 4, p / 4, p / 4)
    ops = [math.sqrt(w) * s for w, s in zip(weights, PAULI) if w > 0]
    return QuantumChannel(tuple(ops))


def identity_channel() -> QuantumChannel:
    return QuantumChannel((IDENTITY,))


def channel_action(ch: QuantumChannel, rho) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    return sum(k @ m @ k.conj().T for k in ch.kraus_ops)


def apply_channel(ch: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply ``ch`` to ``rho``.

    Sub-normalized channels must be flagged; their output is renormalized
    (post-selected on the channel succeeding).
    """
    residual = float(np.linalg.norm(ch.completeness() - IDENTITY, 2))
    if residual > COMPLETENESS_TOL and not ch.subnormalized:
        raise ChannelValidationError(f"channel is not trace preserving (residual {residual:.3g})")
    out = channel_action(ch, rho)
    tr = np.trace(out).real
    if tr <= 0:
        raise ChannelValidationError("channel annihilates the input state")
    out = out / tr
    return DensityMatrix((out + out.conj().T) / 2)


def pauli_coefficients(k: np.ndarray) -> np.ndarray:
    """Coefficients a_m with K = sum_m a_m s_m."""
    return np.array([np.trace(s @ k) / 2 for s in PAULI])


def chi_array_from_kraus(kraus_ops) -> np.ndarray:
    a = np.array([pauli_coefficients(np.asarray(k)) for k in kraus_ops])
    return a.T @ a.conj()


def chi_from_kraus(ch: QuantumChannel) -> ChiMatrix:
    return ChiMatrix(chi_array_from_kraus(ch.kraus_ops))


def chi_depolarizing(p: float) -> ChiMatrix:
    ChannelParams(p)
    return ChiMatrix(np.diag([1 - 3 * p / 4, p / 4, p / 4, p / 4]).astype(complex))


def chi_action(chi, rho) -> np.ndarray:
    """sum_mn chi_mn s_m rho s_n; ``chi`` may be a raw 4x4 array."""
    c = np.asarray(chi, dtype=complex)
    m = np.asarray(rho, dtype=complex)
    out = np.zeros((2, 2), dtype=complex)
    for i, si in enumerate(PAULI):
        for j, sj in enumerate(PAULI):
            out += c[i, j] * (si @ m @ sj)
    return out


def kraus_from_chi(chi: ChiMatrix | np.ndarray, floor: float = CHI_FLOOR_ESTIMATED) -> QuantumChannel:
    c = np.asarray(chi, dtype=complex)
    w, u = np.linalg.eigh((c + c.conj().T) / 2)
    if w.min() < floor:
        raise NonPhysicalProcessError(f"chi eigenvalue {w.min():.3g} below floor {floor:.1g}")
    ops = []
    for lam, vec in zip(w, u.T):
        if lam <= 1e-15:
            continue
        ops.append(math.sqrt(lam) * sum(v * s for v, s in zip(vec, PAULI)))
    if not ops:
        raise NonPhysicalProcessError("chi is zero")
    return QuantumChannel(tuple(ops))


def process_fidelity(a: ChiMatrix, b: ChiMatrix) -> float:
    return uhlmann_fidelity(np.asarray(a), np.asarray(b))


def _chi_completeness_residual(c: np.ndarray) -> float:
    total = np.zeros((2, 2), dtype=complex)
    for i, si in enumerate(PAULI):
        for j, sj in enumerate(PAULI):
            total += c[i, j] * (sj @ si)
    return float(np.linalg.norm(total - IDENTITY, 2))


def validate_channel(ch: QuantumChannel | np.ndarray) -> ValidationReport:
    """Residual report for a Kraus set or a raw chi array; never raises."""
    if isinstance(ch, QuantumChannel):
        c = chi_array_from_kraus(ch.kraus_ops)
        residual = float(np.linalg.norm(ch.completeness() - IDENTITY, 2))
    else:
        c = np.asarray(ch, dtype=complex)
        residual = _chi_completeness_residual(c)
    herm = float(np.max(np.abs(c - c.conj().T)))
    min_eig = float(np.linalg.eigvalsh((c + c.conj().T) / 2).min())
    return ValidationReport(residual, herm, min_eig)


def probe_states(n_random: int = 2, seed: int = 0) -> list[DensityMatrix]:
    """The six canonical states plus ``n_random`` seeded random mixed states."""
    rng = np.random.default_rng(seed)
    states = [density_from_label(lab) for lab in CANONICAL_LABELS]
    states += [random_density(rng) for _ in range(n_random)]
    return states


def action_distance(a, b, states=None) -> float:
    """Largest entrywise gap between two channels' outputs on a probe set.

    Each argument may be a QuantumChannel or a chi matrix.
    """
    states = probe_states() if states is None else states

    def act(ch, rho):
        if isinstance(ch, QuantumChannel):
            return channel_action(ch, rho)
        return chi_action(ch, rho)

    return max(float(np.max(np.abs(act(a, s) - act(b, s)))) for s in states)


def channels_equal(a, b, atol: float = 1e-10) -> bool:
    return action_distance(a, b) <= atol
