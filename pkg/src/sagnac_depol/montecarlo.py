"""Simulated photon-counting experiments and the three reproduction pipelines.

Every random draw comes from its own substream, keyed by (stage, setting,
input state, trial), so results do not depend on worker count or
scheduling. ``infinite_n`` bypasses sampling and uses exact probabilities.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .channels import ChiMatrix, chi_depolarizing, depolarize, process_fidelity
from .errors import ParameterError
from .optics import Imperfections, SagnacConfig, full_apparatus, sagnac_split, splitting_parameter, theta_for_p
from .qstate import (
    CANONICAL_LABELS,
    BlochVector,
    DensityMatrix,
    StateLabel,
    bloch_from_density,
    density_from_label,
    purity,
    state_fidelity,
)
from .tomography import (
    ALL_BASES,
    QPT_PROBES,
    CountRecord,
    MeasurementBasis,
    TomographyResult,
    measurement_probabilities,
    qpt,
    qst_from_probabilities,
    qst_linear,
)

STAGE_SCAN = 1
STAGE_SWEEP = 2
STAGE_QPT = 3
STAGE_BOOTSTRAP = 4

DEFAULT_THETA_GRID = tuple(math.radians(2.5 * k) for k in range(19))
DEFAULT_P_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """Experimental knobs. Angles in radians; fractions in [0, 1]."""

    counts_per_setting: int = 10_000
    rng_seed: int = 0
    theta_grid: tuple[float, ...] = DEFAULT_THETA_GRID
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    pbs_extinction: float = 0.0
    angle_jitter: float = 0.0
    fiber_depolarization: float = 1.0
    dark_fraction: float = 0.0
    infinite_n: bool = False
    trials: int = 1
    all_probes: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "theta_grid", tuple(float(t) for t in self.theta_grid))
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        if self.counts_per_setting < 1:
            raise ParameterError("counts_per_setting must be >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ParameterError("rng_seed must be an unsigned 64-bit integer")
        if not self.theta_grid or not self.p_grid:
            raise ParameterError("theta_grid and p_grid must be non-empty")
        if any(not 0 <= p <= 1 for p in self.p_grid):
            raise ParameterError("p_grid entries must lie in [0, 1]")
        for name in ("pbs_extinction", "fiber_depolarization", "dark_fraction"):
            if not 0 <= getattr(self, name) <= 1:
                raise ParameterError(f"{name} must lie in [0, 1]")
        if self.angle_jitter < 0:
            raise ParameterError("angle_jitter must be non-negative")
        if self.trials < 1 or self.workers < 1:
            raise ParameterError("trials and workers must be >= 1")

    @classmethod
    def mild(cls, **overrides) -> ExperimentConfig:
        """Mild imperfection preset: 1% PBS leak, 0.2 deg plate jitter, 99% fiber depolarization."""
        base = dict(pbs_extinction=0.01, angle_jitter=math.radians(0.2), fiber_depolarization=0.99)
        base.update(overrides)
        return cls(**base)

    def with_overrides(self, **kw) -> ExperimentConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass(frozen=True)
class SplittingScanRow:
    theta: float
    trial: int
    per_state_a: dict[StateLabel, float]
    per_state_b: dict[StateLabel, float]
    counts: dict[StateLabel, tuple[int, int]] | None

    @property
    def p(self) -> float:
        return splitting_parameter(self.theta)

    @property
    def avg_a(self) -> float:
        return float(np.mean(list(self.per_state_a.values())))

    @property
    def avg_b(self) -> float:
        return float(np.mean(list(self.per_state_b.values())))


@dataclass(frozen=True)
class BlochSweepPoint:
    label: StateLabel
    p: float
    trial: int
    bloch: BlochVector
    purity: float
    fidelity: float
    tomography: TomographyResult
    records: tuple[CountRecord, ...] | None = None

    @property
    def bloch_norm(self) -> float:
        return self.bloch.norm


@dataclass(frozen=True)
class ProcessRun:
    p: float
    trial: int
    chi: ChiMatrix
    fidelity: float
    tomography: TomographyResult
    output_states: tuple[DensityMatrix, ...]


@dataclass(frozen=True)
class Interval:
    estimate: float
    low: float
    high: float

    @property
    def width(self) -> float:
        return self.high - self.low


def _float_key(x: float) -> int:
    return int.from_bytes(struct.pack(">d", float(x)), "big")


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))


def _run_tasks(fn: Callable, tasks: Sequence, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _draw_imperfections(cfg: ExperimentConfig, rng: np.random.Generator) -> Imperfections:
    if cfg.angle_jitter > 0:
        offsets = tuple(rng.normal(0.0, cfg.angle_jitter, size=2))
    else:
        offsets = (0.0, 0.0)
    return Imperfections(cfg.pbs_extinction, offsets, cfg.fiber_depolarization)


def _with_dark(prob: float, dark_fraction: float) -> float:
    return (1 - dark_fraction) * prob + dark_fraction * 0.5


def simulate_counts(
    rho: DensityMatrix,
    basis: MeasurementBasis,
    n: int,
    rng: np.random.Generator,
    dark_fraction: float = 0.0,
) -> CountRecord:
    """Binomial counts of ``n`` heralded photons at the two detectors of ``basis``."""
    plus_prob, _ = measurement_probabilities(rho, basis)
    prob = min(max(_with_dark(plus_prob, dark_fraction), 0.0), 1.0)
    plus = int(rng.binomial(n, prob))
    return CountRecord(basis, plus, n - plus)


def reconstruct(
    rho: DensityMatrix, cfg: ExperimentConfig, rng: np.random.Generator
) -> tuple[TomographyResult, tuple[CountRecord, ...] | None]:
    """State tomography of ``rho`` as the configured detectors would see it."""
    if cfg.infinite_n:
        probs = {}
        for b in ALL_BASES:
            plus, _ = measurement_probabilities(rho, b)
            plus = _with_dark(plus, cfg.dark_fraction)
            probs[b] = (plus, 1 - plus)
        return qst_from_probabilities(probs), None
    records = tuple(simulate_counts(rho, b, cfg.counts_per_setting, rng, cfg.dark_fraction) for b in ALL_BASES)
    return qst_linear(records), records


def run_splitting_scan(cfg: ExperimentConfig) -> list[SplittingScanRow]:
    tasks = [(i, t) for t in range(cfg.trials) for i in range(len(cfg.theta_grid))]

    def one(task):
        i, t = task
        theta = cfg.theta_grid[i]
        per_a, per_b, counts = {}, {}, {}
        for j, label in enumerate(CANONICAL_LABELS):
            rng = substream(cfg.rng_seed, STAGE_SCAN, i, j, t)
            imp = _draw_imperfections(cfg, rng)
            split = sagnac_split(density_from_label(label), SagnacConfig(theta, imp.pbs_extinction, imp.plate_offsets))
            prob_a = _with_dark(split.weight_a / (split.weight_a + split.weight_b), cfg.dark_fraction)
            if cfg.infinite_n:
                per_a[label], per_b[label] = prob_a, 1 - prob_a
            else:
                n_a = int(rng.binomial(cfg.counts_per_setting, min(max(prob_a, 0.0), 1.0)))
                n_b = cfg.counts_per_setting - n_a
                counts[label] = (n_a, n_b)
                per_a[label] = n_a / (n_a + n_b)
                per_b[label] = n_b / (n_a + n_b)
        return SplittingScanRow(theta, t, per_a, per_b, None if cfg.infinite_n else counts)

    rows = _run_tasks(one, tasks, cfg.workers)
    return sorted(rows, key=lambda r: (r.trial, r.theta))


def run_depolarization_sweep(cfg: ExperimentConfig) -> list[BlochSweepPoint]:
    tasks = [(i, j, t) for t in range(cfg.trials) for i in range(len(cfg.p_grid)) for j in range(6)]

    def one(task):
        i, j, t = task
        p = cfg.p_grid[i]
        label = CANONICAL_LABELS[j]
        rng = substream(cfg.rng_seed, STAGE_SWEEP, i, j, t)
        rho = density_from_label(label)
        out = full_apparatus(rho, theta_for_p(p), _draw_imperfections(cfg, rng))
        result, records = reconstruct(out, cfg, rng)
        est = result.estimate
        return BlochSweepPoint(
            label=label,
            p=p,
            trial=t,
            bloch=bloch_from_density(est),
            purity=purity(est),
            fidelity=state_fidelity(est, depolarize(rho, p)),
            tomography=result,
            records=records,
        )

    return _run_tasks(one, tasks, cfg.workers)


def run_process_tomography_experiment(cfg: ExperimentConfig, p: float, trial: int = 0) -> ProcessRun:
    """Probe the simulated apparatus, reconstruct chi and compare it to the ideal channel.

    One plate-offset draw is shared by all probes of a run: it stands for the
    alignment of the apparatus during that run.
    """
    if not 0 <= p <= 1:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    probes = CANONICAL_LABELS if cfg.all_probes else QPT_PROBES
    theta = theta_for_p(p)
    imp = _draw_imperfections(cfg, substream(cfg.rng_seed, STAGE_QPT, _float_key(p), trial))
    outputs = []
    for k, label in enumerate(probes):
        rng = substream(cfg.rng_seed, STAGE_QPT, _float_key(p), trial, k + 1)
        out = full_apparatus(density_from_label(label), theta, imp)
        outputs.append(reconstruct(out, cfg, rng)[0].estimate)
    result = qpt(list(probes), outputs)
    chi = result.estimate
    return ProcessRun(p, trial, chi, process_fidelity(chi, chi_depolarizing(p)), result, tuple(outputs))


def run_process_sweep(cfg: ExperimentConfig) -> list[ProcessRun]:
    tasks = [(p, t) for t in range(cfg.trials) for p in cfg.p_grid]
    return _run_tasks(lambda task: run_process_tomography_experiment(cfg, *task), tasks, cfg.workers)


def bootstrap_errorbars(
    records: Iterable[CountRecord],
    resamples: int,
    rng: np.random.Generator,
    reference: DensityMatrix | None = None,
    confidence: float = 0.95,
) -> dict[str, Interval]:
    """Percentile intervals on Bloch norm, purity and (given a reference) fidelity.

    Each basis is resampled binomially at its observed total.
    """
    if resamples < 100:
        raise ParameterError("bootstrap needs at least 100 resamples")
    records = list(records)
    point = qst_linear(records).estimate
    draws = {
        rec.basis: rng.binomial(rec.total, rec.plus / rec.total if rec.total else 0.5, size=resamples)
        for rec in records
    }
    metrics: dict[str, list[float]] = {"bloch_norm": [], "purity": []}
    if reference is not None:
        metrics["fidelity"] = []
    for k in range(resamples):
        resampled = [CountRecord(r.basis, int(draws[r.basis][k]), r.total - int(draws[r.basis][k])) for r in records]
        est = qst_linear(resampled).estimate
        metrics["bloch_norm"].append(bloch_from_density(est).norm)
        metrics["purity"].append(purity(est))
        if reference is not None:
            metrics["fidelity"].append(state_fidelity(est, reference))

    point_values = {"bloch_norm": bloch_from_density(point).norm, "purity": purity(point)}
    if reference is not None:
        point_values["fidelity"] = state_fidelity(point, reference)
    tail = 100 * (1 - confidence) / 2
    out = {}
    for name, values in metrics.items():
        low, high = np.percentile(values, [tail, 100 - tail])
        out[name] = Interval(point_values[name], float(low), float(high))
    return out
