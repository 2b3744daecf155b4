"""Analytic invariant suite (no sampling) behind ``sagnac-depol validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channels, montecarlo, optics, qstate, tomography

ANALYTIC_TOL = 1e-12
ESTIMATOR_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _thetas(n: int = 25) -> np.ndarray:
    return np.linspace(0, math.pi, n)


def _random_states(n: int = 20, seed: int = 11) -> list:
    rng = np.random.default_rng(seed)
    return [qstate.random_density(rng) for _ in range(n)]


def _canonical() -> list:
    return [qstate.density_from_label(lab) for lab in qstate.CANONICAL_LABELS]


def check_hwp_unitary_involutory() -> float:
    worst = 0.0
    for t in _thetas():
        m = optics.hwp(t)
        worst = max(worst, np.max(np.abs(m.conj().T @ m - np.eye(2))), np.max(np.abs(m @ m - np.eye(2))))
    return worst


def check_fixed_plate_swaps_h_v() -> float:
    return float(np.max(np.abs(optics.hwp(math.pi / 4) - qstate.SIGMA_X)))


def check_qwp_squared_is_hwp() -> float:
    return max(float(np.max(np.abs(optics.qwp(t) @ optics.qwp(t) - optics.hwp(t)))) for t in _thetas())


def check_splitting_law() -> float:
    worst = 0.0
    for t in _thetas():
        for rho in _canonical():
            split = optics.sagnac_split(rho, optics.SagnacConfig(t))
            worst = max(worst, abs(split.weight_a - (1 - optics.splitting_parameter(t))))
            worst = max(worst, abs(split.weight_b - optics.splitting_parameter(t)))
    return worst


def check_sagnac_identity_action() -> float:
    worst = 0.0
    for t in _thetas(13)[1:-1]:
        for rho in _canonical() + _random_states(10):
            split = optics.sagnac_split(rho, optics.SagnacConfig(t))
            worst = max(worst, np.max(np.abs(np.asarray(split.state_a) - np.asarray(rho))))
            worst = max(worst, np.max(np.abs(np.asarray(split.state_b) - np.asarray(rho))))
    return worst


def check_jones_path_matches_density_path() -> float:
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        psi = qstate.random_pure(rng)
        cfg = optics.SagnacConfig(rng.uniform(0, math.pi))
        by_jones = optics.sagnac_split_pure(psi, cfg)
        by_rho = optics.sagnac_split(qstate.density_from_pure(psi), cfg)
        worst = max(
            worst,
            abs(by_jones.weight_a - by_rho.weight_a),
            np.max(np.abs(np.asarray(by_jones.state_a) - np.asarray(by_rho.state_a))),
            np.max(np.abs(np.asarray(by_jones.state_b) - np.asarray(by_rho.state_b))),
        )
    return worst


def check_apparatus_is_depolarizing() -> float:
    rng = np.random.default_rng(3)
    worst = 0.0
    for rho in _random_states(10):
        for t in rng.uniform(0, math.pi, 10):
            out = optics.full_apparatus(rho, t)
            ideal = channels.depolarize(rho, optics.splitting_parameter(t))
            worst = max(worst, np.max(np.abs(np.asarray(out) - np.asarray(ideal))))
    return worst


def check_kraus_matches_closed_form() -> float:
    rng = np.random.default_rng(7)
    worst = 0.0
    for rho in _random_states(50):
        p = rng.uniform()
        out = channels.apply_channel(channels.depolarizing_channel(p), rho)
        worst = max(worst, np.max(np.abs(np.asarray(out) - np.asarray(channels.depolarize(rho, p)))))
    return worst


def check_bloch_contraction() -> float:
    worst = 0.0
    for p in np.linspace(0, 1, 11):
        for rho in _canonical() + _random_states(5):
            r_in = qstate.bloch_from_density(rho).array
            r_out = qstate.bloch_from_density(channels.depolarize(rho, p)).array
            worst = max(worst, np.max(np.abs(r_out - (1 - p) * r_in)))
    return worst


def check_purity_input_independent() -> float:
    worst = 0.0
    for p in np.linspace(0, 1, 11):
        values = [qstate.purity(channels.depolarize(rho, p)) for rho in _canonical()]
        worst = max(worst, max(values) - min(values), abs(values[0] - (1 + (1 - p) ** 2) / 2))
    return worst


def check_chi_diagonal() -> float:
    worst = 0.0
    for p in np.linspace(0, 1, 11):
        chi = np.asarray(channels.chi_from_kraus(channels.depolarizing_channel(p)))
        worst = max(worst, np.max(np.abs(chi - np.diag([1 - 3 * p / 4, p / 4, p / 4, p / 4]))))
    return worst


def check_kraus_chi_roundtrip() -> float:
    worst = 0.0
    for p in np.linspace(0, 1, 11):
        ch = channels.depolarizing_channel(p)
        back = channels.kraus_from_chi(channels.chi_from_kraus(ch))
        worst = max(worst, channels.action_distance(ch, back))
    return worst


def check_bloch_roundtrip() -> float:
    worst = 0.0
    for rho in _canonical() + _random_states():
        back = qstate.density_from_bloch(qstate.bloch_from_density(rho))
        worst = max(worst, np.max(np.abs(np.asarray(back) - np.asarray(rho))))
    return worst


def check_qst_roundtrip() -> float:
    worst = 0.0
    for rho in _canonical() + _random_states():
        est = tomography.exact_state_tomography(rho).estimate
        worst = max(worst, np.max(np.abs(np.asarray(est) - np.asarray(rho))))
    return worst


def check_qpt_roundtrip() -> float:
    worst = 0.0
    for p in np.linspace(0, 1, 7):
        res = tomography.qpt_exact(lambda r: channels.depolarize(r, p))
        worst = max(worst, np.max(np.abs(np.asarray(res.estimate) - np.diag([1 - 3 * p / 4, p / 4, p / 4, p / 4]))))
    return worst


def check_infinite_n_sweep() -> float:
    cfg = montecarlo.ExperimentConfig(infinite_n=True, p_grid=(0.0, 0.25, 0.5, 1.0))
    return max(abs(pt.bloch_norm - (1 - pt.p)) for pt in montecarlo.run_depolarization_sweep(cfg))


CHECKS: dict[str, tuple[Callable[[], float], float]] = {
    "hwp_unitary_involutory": (check_hwp_unitary_involutory, ANALYTIC_TOL),
    "fixed_plate_swaps_h_v": (check_fixed_plate_swaps_h_v, ANALYTIC_TOL),
    "qwp_squared_is_hwp": (check_qwp_squared_is_hwp, ANALYTIC_TOL),
    "splitting_law": (check_splitting_law, ANALYTIC_TOL),
    "sagnac_identity_action": (check_sagnac_identity_action, ANALYTIC_TOL),
    "jones_path_matches_density_path": (check_jones_path_matches_density_path, ANALYTIC_TOL),
    "apparatus_is_depolarizing": (check_apparatus_is_depolarizing, ANALYTIC_TOL),
    "kraus_matches_closed_form": (check_kraus_matches_closed_form, ANALYTIC_TOL),
    "bloch_contraction": (check_bloch_contraction, ANALYTIC_TOL),
    "purity_input_independent": (check_purity_input_independent, ANALYTIC_TOL),
    "chi_depolarizing_diagonal": (check_chi_diagonal, ANALYTIC_TOL),
    "kraus_chi_roundtrip": (check_kraus_chi_roundtrip, ESTIMATOR_TOL),
    "bloch_roundtrip": (check_bloch_roundtrip, ANALYTIC_TOL),
    "qst_roundtrip": (check_qst_roundtrip, ESTIMATOR_TOL),
    "qpt_roundtrip": (check_qpt_roundtrip, ESTIMATOR_TOL),
    "infinite_n_sweep_radii": (check_infinite_n_sweep, ESTIMATOR_TOL),
}


def run_all() -> list[CheckResult]:
    results = []
    for name, (fn, tol) in CHECKS.items():
        try:
            err = float(fn())
        except Exception as exc:  # a broken element can make downstream states unphysical
            results.append(CheckResult(name, False, f"raised {type(exc).__name__}: {exc}"))
            continue
        ok = err <= tol
        results.append(CheckResult(name, ok, f"max error {err:.3e} (tol {tol:.0e})"))
    return results
