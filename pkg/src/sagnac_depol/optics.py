"""Jones-calculus model of the depolarizing apparatus.

Three stages: a displaced Sagnac interferometer acting as a variable
non-polarizing beam splitter (modes A and B), a multimode fiber that
depolarizes mode B, and a beam splitter that recombines the two modes
incoherently.

Sagnac routing used here: the PBS transmits H into the clockwise path and
reflects V into the counter-clockwise path, each path crossing one HWP at
angle theta. On the way back, light that kept its polarization leaves in
mode A, light that was flipped leaves in mode B, where a fixed HWP at 45 deg
restores the input polarization. Every PBS reflection carries a factor i
(symmetric beam-splitter convention). With that phase the two paths
recombine into exactly ``cos(2 theta) * psi`` in A and ``i sin(2 theta) * psi``
in B.

Angles are radians throughout; the JSON config blocks use degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParameterError
from .qstate import (
    IDENTITY,
    DensityMatrix,
    JonesVector,
    WeightedJones,
    density_from_pure,
    state_fidelity,
)

FIXED_PLATE_ANGLE = math.pi / 4


def hwp(theta: float) -> np.ndarray:
    """Half-wave plate with its fast axis at ``theta`` from horizontal."""
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def qwp(theta: float) -> np.ndarray:
    """Quarter-wave plate, fast axis at ``theta``.

    The slow axis picks up a phase of +i, so ``qwp(pi/4)`` takes H to
    R = (H - iV)/sqrt(2) up to a global phase, and ``qwp(t) @ qwp(t) == hwp(t)``.
    """
    return _rotation(theta) @ np.diag([1, 1j]) @ _rotation(-theta)


def pbs_transmit(extinction: float = 0.0) -> np.ndarray:
    return np.diag([math.sqrt(1 - extinction), math.sqrt(extinction)]).astype(complex)


def pbs_reflect(extinction: float = 0.0) -> np.ndarray:
    return 1j * np.diag([math.sqrt(extinction), math.sqrt(1 - extinction)])


def splitting_parameter(theta: float) -> float:
    return math.sin(2 * theta) ** 2


def theta_for_p(p: float) -> float:
    """Plate angle in [0, pi/4] that realizes splitting parameter ``p``."""
    if not 0 <= p <= 1:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    return math.asin(math.sqrt(p)) / 2


@dataclass(frozen=True)
class SagnacConfig:
    """Plate angle plus optional imperfections.

    ``pbs_extinction`` is the intensity fraction of the wrong polarization
    leaking into each path. ``plate_offsets`` are added to ``theta`` for the
    clockwise and counter-clockwise plate respectively.
    """

    theta: float
    pbs_extinction: float = 0.0
    plate_offsets: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not 0 <= self.pbs_extinction <= 1:
            raise ParameterError("pbs_extinction must lie in [0, 1]")
        if len(self.plate_offsets) != 2:
            raise ParameterError("plate_offsets needs one entry per plate")
        object.__setattr__(self, "plate_offsets", tuple(float(x) for x in self.plate_offsets))

    @property
    def p(self) -> float:
        return splitting_parameter(self.theta)

    @property
    def is_ideal(self) -> bool:
        return self.pbs_extinction == 0 and self.plate_offsets == (0.0, 0.0)

    def to_json(self) -> dict:
        return {
            "theta_deg": math.degrees(self.theta),
            "pbs_extinction": self.pbs_extinction,
            "plate_offsets_deg": [math.degrees(x) for x in self.plate_offsets],
        }

    @classmethod
    def from_json(cls, data: dict) -> SagnacConfig:
        offsets = data.get("plate_offsets_deg", [0.0, 0.0])
        return cls(
            theta=math.radians(float(data["theta_deg"])),
            pbs_extinction=float(data.get("pbs_extinction", 0.0)),
            plate_offsets=tuple(math.radians(float(x)) for x in offsets),
        )


@dataclass(frozen=True)
class DepolarizerConfig:
    """Multimode-fiber depolarizer; ``d = 1`` fully erases the polarization."""

    d: float = 1.0

    def __post_init__(self):
        if not 0 <= self.d <= 1:
            raise ParameterError(f"depolarization strength must lie in [0, 1], got {self.d}")

    def to_json(self) -> dict:
        return {"d": self.d}

    @classmethod
    def from_json(cls, data: dict) -> DepolarizerConfig:
        return cls(d=float(data.get("d", 1.0)))


@dataclass(frozen=True)
class Imperfections:
    pbs_extinction: float = 0.0
    plate_offsets: tuple[float, float] = (0.0, 0.0)
    fiber_depolarization: float = 1.0


@dataclass(frozen=True)
class SplitOutput:
    """States leaving the two Sagnac ports, B reported after the 45 deg plate.

    A port with zero weight reports the input state. ``fidelity_a`` and
    ``fidelity_b`` compare each port's state to the input.
    """

    state_a: DensityMatrix
    weight_a: float
    state_b: DensityMatrix
    weight_b: float
    fidelity_a: float = 1.0
    fidelity_b: float = 1.0


def sagnac_operators(cfg: SagnacConfig) -> tuple[np.ndarray, np.ndarray]:
    """Jones operators (M_A, M_B) taking the input to the A and B ports.

    ``M_A^dag M_A + M_B^dag M_B = I`` for any extinction and plate offsets.
    """
    t = pbs_transmit(cfg.pbs_extinction)
    r = pbs_reflect(cfg.pbs_extinction)
    w_cw = hwp(cfg.theta + cfg.plate_offsets[0])
    w_ccw = hwp(cfg.theta + cfg.plate_offsets[1])
    m_a = t @ w_cw @ t + r @ w_ccw @ r
    m_b = hwp(FIXED_PLATE_ANGLE) @ (r @ w_cw @ t + t @ w_ccw @ r)
    return m_a, m_b


def sagnac_split_jones(psi: JonesVector, cfg: SagnacConfig) -> tuple[WeightedJones, WeightedJones]:
    """Trace a pure input through the Sagnac one path at a time."""
    v = psi.vector
    t = pbs_transmit(cfg.pbs_extinction)
    r = pbs_reflect(cfg.pbs_extinction)

    clockwise = t @ v
    counter = r @ v
    clockwise = hwp(cfg.theta + cfg.plate_offsets[0]) @ clockwise
    counter = hwp(cfg.theta + cfg.plate_offsets[1]) @ counter

    # back at the PBS: kept polarization exits in A, flipped polarization in B
    mode_a = t @ clockwise + r @ counter
    mode_b = r @ clockwise + t @ counter
    mode_b = hwp(FIXED_PLATE_ANGLE) @ mode_b
    return WeightedJones.from_unnormalized(mode_a), WeightedJones.from_unnormalized(mode_b)


def _propagate(rho: np.ndarray, m: np.ndarray) -> tuple[np.ndarray | None, float]:
    out = m @ rho @ m.conj().T
    w = float(np.trace(out).real)
    if w <= 1e-15:
        return None, 0.0
    out = out / w
    return (out + out.conj().T) / 2, w


def sagnac_split(rho: DensityMatrix, cfg: SagnacConfig) -> SplitOutput:
    m = np.asarray(rho)
    m_a, m_b = sagnac_operators(cfg)
    out_a, wa = _propagate(m, m_a)
    out_b, wb = _propagate(m, m_b)
    state_a = rho if out_a is None else DensityMatrix(out_a)
    state_b = rho if out_b is None else DensityMatrix(out_b)
    return SplitOutput(
        state_a,
        wa,
        state_b,
        wb,
        fidelity_a=state_fidelity(rho, state_a),
        fidelity_b=state_fidelity(rho, state_b),
    )


def sagnac_split_pure(psi: JonesVector, cfg: SagnacConfig) -> SplitOutput:
    """Convenience lift of :func:`sagnac_split_jones` to density matrices."""
    rho = density_from_pure(psi)
    a, b = sagnac_split_jones(psi, cfg)
    state_a = rho if a.state is None else density_from_pure(a.state)
    state_b = rho if b.state is None else density_from_pure(b.state)
    return SplitOutput(
        state_a,
        a.weight,
        state_b,
        b.weight,
        fidelity_a=state_fidelity(rho, state_a),
        fidelity_b=state_fidelity(rho, state_b),
    )


def fiber_depolarize(rho: DensityMatrix, cfg: DepolarizerConfig | float = DepolarizerConfig()) -> DensityMatrix:
    d = cfg.d if isinstance(cfg, DepolarizerConfig) else DepolarizerConfig(float(cfg)).d
    return DensityMatrix((1 - d) * np.asarray(rho) + d * IDENTITY / 2)


def incoherent_combine(a: DensityMatrix, wa: float, b: DensityMatrix, wb: float) -> DensityMatrix:
    """Classical mixture of two beams meeting at a beam splitter with no mutual coherence."""
    if wa < 0 or wb < 0:
        raise ParameterError("mixture weights must be non-negative")
    total = wa + wb
    if total <= 0:
        raise DegenerateInputError("both mixture weights are zero")
    return DensityMatrix((wa * np.asarray(a) + wb * np.asarray(b)) / total)


def full_apparatus(
    rho: DensityMatrix, theta: float, imperfections: Imperfections | None = None
) -> DensityMatrix:
    """Sagnac split, depolarize mode B in the fiber, recombine at the BS."""
    imp = imperfections or Imperfections()
    cfg = SagnacConfig(theta, imp.pbs_extinction, imp.plate_offsets)
    split = sagnac_split(rho, cfg)
    depolarized = fiber_depolarize(split.state_b, DepolarizerConfig(imp.fiber_depolarization))
    return incoherent_combine(split.state_a, split.weight_a, depolarized, split.weight_b)
