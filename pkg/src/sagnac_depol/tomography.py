"""State and process tomography for one polarization qubit.

States are reconstructed by linear (Stokes) inversion from the three
mutually unbiased bases, followed by eigenvalue clipping. Processes are
reconstructed by solving the linear chi system from a set of probe states
and their reconstructed outputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .channels import ChiMatrix, chi_action
from .errors import IncompleteProbeError, InsufficientDataError, ParameterError
from .qstate import (
    IDENTITY,
    PAULI,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    StateLabel,
    density_from_label,
)

CLIP_FLAG_TOL = 1e-14


class MeasurementBasis(str, enum.Enum):
    Z = "Z"
    X = "X"
    Y = "Y"

    @property
    def labels(self) -> tuple[StateLabel, StateLabel]:
        return _BASIS_LABELS[self]

    @property
    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        plus, minus = self.labels
        return np.asarray(density_from_label(plus)), np.asarray(density_from_label(minus))

    @property
    def pauli(self) -> np.ndarray:
        return {MeasurementBasis.Z: SIGMA_Z, MeasurementBasis.X: SIGMA_X, MeasurementBasis.Y: SIGMA_Y}[self]


_BASIS_LABELS = {
    MeasurementBasis.Z: (StateLabel.H, StateLabel.V),
    MeasurementBasis.X: (StateLabel.D, StateLabel.A),
    MeasurementBasis.Y: (StateLabel.L, StateLabel.R),
}

ALL_BASES = (MeasurementBasis.Z, MeasurementBasis.X, MeasurementBasis.Y)


@dataclass(frozen=True)
class CountRecord:
    basis: MeasurementBasis
    plus: int
    minus: int

    def __post_init__(self):
        object.__setattr__(self, "basis", MeasurementBasis(self.basis))
        if self.plus < 0 or self.minus < 0:
            raise ParameterError("counts must be non-negative")

    @property
    def total(self) -> int:
        return self.plus + self.minus

    def to_json(self) -> dict:
        return {"basis": self.basis.value, "plus": int(self.plus), "minus": int(self.minus)}

    @classmethod
    def from_json(cls, data: dict) -> CountRecord:
        return cls(MeasurementBasis(data["basis"]), int(data["plus"]), int(data["minus"]))


@dataclass(frozen=True)
class TomographyResult:
    estimate: DensityMatrix | ChiMatrix
    raw: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        raw = [[[float(z.real), float(z.imag)] for z in row] for row in self.raw]
        if isinstance(self.estimate, ChiMatrix):
            est = self.estimate.to_json()
            kind = "process"
        else:
            est = self.estimate.to_json()
            kind = "state"
        return {"kind": kind, "estimate": est, "raw": raw, "diagnostics": dict(self.diagnostics)}


def measurement_probabilities(rho: DensityMatrix, basis: MeasurementBasis) -> tuple[float, float]:
    m = np.asarray(rho)
    plus, minus = (float(np.trace(pr @ m).real) for pr in MeasurementBasis(basis).projectors)
    plus, minus = max(plus, 0.0), max(minus, 0.0)
    s = plus + minus
    return plus / s, minus / s


def _clip(raw: np.ndarray) -> tuple[np.ndarray, dict]:
    h = (raw + raw.conj().T) / 2
    w, u = np.linalg.eigh(h)
    diag = {"min_eigenvalue_raw": float(w.min()), "clipped": bool(w.min() < -CLIP_FLAG_TOL)}
    if w.min() >= 0:
        out = h / np.trace(h).real
    else:
        w = np.clip(w, 0, None)
        if w.sum() <= 0:
            raise InsufficientDataError("estimate has no positive spectrum to project onto")
        out = (u * (w / w.sum())) @ u.conj().T
        out = (out + out.conj().T) / 2
    diag["projection_distance"] = float(np.linalg.norm(out - h))
    return out, diag


def psd_project(raw) -> DensityMatrix:
    """Clip negative eigenvalues and renormalize the trace to one."""
    out, _ = _clip(np.asarray(raw, dtype=complex))
    return DensityMatrix(out)


def chi_psd_project(raw) -> ChiMatrix:
    out, _ = _clip(np.asarray(raw, dtype=complex))
    return ChiMatrix(out, estimated=True)


def project_chi(raw) -> TomographyResult:
    """chi_psd_project with the clip diagnostics kept."""
    raw = np.asarray(raw, dtype=complex)
    out, diag = _clip(raw)
    return TomographyResult(ChiMatrix(out, estimated=True), raw, diag)


def _records_by_basis(records) -> dict[MeasurementBasis, CountRecord]:
    if isinstance(records, Mapping):
        records = records.values()
    out = {}
    for rec in records:
        out[rec.basis] = rec
    missing = [b.value for b in ALL_BASES if b not in out]
    if missing:
        raise InsufficientDataError(f"missing bases: {', '.join(missing)}")
    return out


def _state_from_stokes(stokes: Mapping[MeasurementBasis, float], extra: dict | None = None) -> TomographyResult:
    raw = IDENTITY.copy()
    for b in ALL_BASES:
        raw = raw + stokes[b] * b.pauli
    raw = raw / 2
    out, diag = _clip(raw)
    diag["bloch_raw"] = [float(stokes[b]) for b in (MeasurementBasis.X, MeasurementBasis.Y, MeasurementBasis.Z)]
    if extra:
        diag.update(extra)
    return TomographyResult(DensityMatrix(out), raw, diag)


def qst_linear(records: Iterable[CountRecord] | Mapping[MeasurementBasis, CountRecord]) -> TomographyResult:
    """Linear-inversion state tomography from counts in the Z, X and Y bases."""
    by_basis = _records_by_basis(records)
    stokes = {}
    for b, rec in by_basis.items():
        if rec.total <= 0:
            raise InsufficientDataError(f"basis {b.value} has zero total counts")
        stokes[b] = (rec.plus - rec.minus) / rec.total
    return _state_from_stokes(stokes, {"totals": {b.value: by_basis[b].total for b in ALL_BASES}})


def qst_from_probabilities(probs: Mapping[MeasurementBasis, tuple[float, float]]) -> TomographyResult:
    """Same reconstruction from exact outcome probabilities (infinite counts)."""
    stokes = {}
    for b in ALL_BASES:
        if b not in probs:
            raise InsufficientDataError(f"missing basis {b.value}")
        plus, minus = probs[b]
        if plus + minus <= 0:
            raise InsufficientDataError(f"basis {b.value} has zero total probability")
        stokes[b] = (plus - minus) / (plus + minus)
    return _state_from_stokes(stokes)


def exact_state_tomography(rho: DensityMatrix) -> TomographyResult:
    return qst_from_probabilities({b: measurement_probabilities(rho, b) for b in ALL_BASES})


QPT_PROBES = (StateLabel.H, StateLabel.V, StateLabel.D, StateLabel.R)


def _as_density(x) -> DensityMatrix:
    if isinstance(x, DensityMatrix):
        return x
    if isinstance(x, (str, StateLabel)):
        return density_from_label(x)
    return DensityMatrix(np.asarray(x))


def qpt(
    input_states: Sequence[StateLabel | str | DensityMatrix],
    output_estimates: Sequence[DensityMatrix],
) -> TomographyResult:
    """Least-squares solve of E(rho_k) = sum_mn chi_mn s_m rho_k s_n, then project.

    Four probes (H, V, D, R) give an exactly determined system; more probes
    are solved in the least-squares sense.
    """
    if len(input_states) != len(output_estimates):
        raise ParameterError("need exactly one output estimate per probe state")
    inputs = [np.asarray(_as_density(s)) for s in input_states]
    outputs = [np.asarray(_as_density(s)) for s in output_estimates]
    if not inputs or np.linalg.matrix_rank(np.array([m.ravel() for m in inputs]), tol=1e-10) < 4:
        raise IncompleteProbeError("probe states do not span the operator space")

    rows, rhs = [], []
    for rho_in, rho_out in zip(inputs, outputs):
        cols = [(si @ rho_in @ sj).ravel() for si in PAULI for sj in PAULI]
        rows.append(np.array(cols).T)
        rhs.append(rho_out.ravel())
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    raw = sol.reshape(4, 4)
    raw = (raw + raw.conj().T) / 2
    out, diag = _clip(raw)
    diag["fit_residual"] = float(np.linalg.norm(a @ sol - b))
    diag["n_probes"] = len(inputs)
    return TomographyResult(ChiMatrix(out, estimated=True), raw, diag)


def qpt_exact(channel_fn, probes: Sequence[StateLabel | str] = QPT_PROBES) -> TomographyResult:
    """Process tomography of ``channel_fn`` from exact output states."""
    inputs = [density_from_label(p) for p in probes]
    return qpt(inputs, [channel_fn(r) for r in inputs])


__all__ = [
    "ALL_BASES",
    "QPT_PROBES",
    "CountRecord",
    "MeasurementBasis",
    "TomographyResult",
    "chi_action",
    "chi_psd_project",
    "exact_state_tomography",
    "measurement_probabilities",
    "project_chi",
    "psd_project",
    "qpt",
    "qpt_exact",
    "qst_from_probabilities",
    "qst_linear",
]
