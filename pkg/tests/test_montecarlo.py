import math

import numpy as np
import pytest

from sagnac_depol.channels import chi_depolarizing
from sagnac_depol.errors import ParameterError
from sagnac_depol.montecarlo import (
    ExperimentConfig,
    bootstrap_errorbars,
    run_depolarization_sweep,
    run_process_sweep,
    run_process_tomography_experiment,
    run_splitting_scan,
    simulate_counts,
    substream,
)
from sagnac_depol.qstate import CANONICAL_LABELS, density_from_label, maximally_mixed
from sagnac_depol.tomography import ALL_BASES, CountRecord, MeasurementBasis, measurement_probabilities


def test_simulate_counts_examples():
    rec = simulate_counts(density_from_label("H"), MeasurementBasis.Z, 1234, np.random.default_rng(9))
    assert (rec.plus, rec.minus) == (1234, 0)
    n = 10_000
    rec = simulate_counts(maximally_mixed(), MeasurementBasis.Z, n, np.random.default_rng(1))
    assert abs(rec.plus / n - 0.5) <= 5 * math.sqrt(0.25 / n)
    a = simulate_counts(maximally_mixed(), MeasurementBasis.X, n, substream(5, 1, 2))
    b = simulate_counts(maximally_mixed(), MeasurementBasis.X, n, substream(5, 1, 2))
    assert a == b


def test_dark_counts_pull_toward_half():
    n = 1_000_000
    rec = simulate_counts(density_from_label("H"), MeasurementBasis.Z, n, np.random.default_rng(2), dark_fraction=0.1)
    assert rec.plus / n == pytest.approx(0.95, abs=5 * math.sqrt(0.95 * 0.05 / n))


def test_config_validation():
    for bad in (
        dict(counts_per_setting=0),
        dict(p_grid=()),
        dict(p_grid=(1.5,)),
        dict(pbs_extinction=2),
        dict(angle_jitter=-1),
        dict(rng_seed=-1),
        dict(rng_seed=2**64),
        dict(trials=0),
    ):
        with pytest.raises(ParameterError):
            ExperimentConfig(**bad)
    mild = ExperimentConfig.mild()
    assert mild.pbs_extinction == 0.01 and mild.fiber_depolarization == 0.99
    assert mild.angle_jitter == pytest.approx(math.radians(0.2))


def test_scan_examples():
    rows = run_splitting_scan(ExperimentConfig(theta_grid=(0.0,)))
    assert rows[0].avg_a == 1 and all(v == 1 for v in rows[0].per_state_a.values())

    n = 10_000
    rows = run_splitting_scan(ExperimentConfig(theta_grid=(math.pi / 8,), counts_per_setting=n, rng_seed=4))
    sigma = math.sqrt(0.25 / n)
    for v in rows[0].per_state_a.values():
        assert abs(v - 0.5) <= 5 * sigma
    assert abs(rows[0].avg_a - 0.5) <= 5 * sigma / math.sqrt(6)


def test_scan_infinite_n_is_exact_line():
    rows = run_splitting_scan(ExperimentConfig(infinite_n=True))
    assert len(rows) == 19
    for r in rows:
        assert abs(r.avg_a - (1 - r.p)) < 1e-12
        assert abs(r.avg_a + r.avg_b - 1) < 1e-12
        assert r.counts is None


def test_scan_normalized_outputs_sum_to_one():
    for r in run_splitting_scan(ExperimentConfig(counts_per_setting=997)):
        for lab in CANONICAL_LABELS:
            assert r.per_state_a[lab] + r.per_state_b[lab] == pytest.approx(1, abs=1e-15)
            assert sum(r.counts[lab]) == 997


def test_scan_input_independence_is_binomial():
    # pooled chi-square of per-state spread around the mean, at the 0.1% level
    n, theta = 10_000, math.radians(15)
    q = 1 - math.sin(2 * theta) ** 2
    rejected = 0
    for seed in range(100):
        r = run_splitting_scan(ExperimentConfig(theta_grid=(theta,), counts_per_setting=n, rng_seed=seed))[0]
        vals = np.array(list(r.per_state_a.values()))
        stat = np.sum((vals - vals.mean()) ** 2) / (q * (1 - q) / n)
        rejected += stat > 20.515  # chi-square 5 dof, upper 0.1% point
    assert rejected <= 2


def test_sweep_examples():
    pts = run_depolarization_sweep(ExperimentConfig(infinite_n=True, p_grid=(0.0, 0.5)))
    for pt in pts:
        assert pt.bloch_norm == pytest.approx(1 - pt.p, abs=1e-10)
        assert pt.fidelity == pytest.approx(1, abs=1e-10)
    pts = run_depolarization_sweep(ExperimentConfig(p_grid=(0.5,), rng_seed=8))
    assert len(pts) == 6
    assert all(abs(pt.bloch_norm - 0.5) <= 0.05 for pt in pts)


def test_sweep_isotropy_improves_with_counts():
    def spread(n):
        values = []
        for seed in range(20):
            pts = run_depolarization_sweep(ExperimentConfig(p_grid=(0.5,), counts_per_setting=n, rng_seed=seed))
            purities = [pt.purity for pt in pts]
            values.append(max(purities) - min(purities))
        return np.median(values)

    s3, s4, s5 = spread(10**3), spread(10**4), spread(10**5)
    assert s3 > s4 > s5


def test_qpt_experiment_examples():
    run = run_process_tomography_experiment(ExperimentConfig(infinite_n=True), 0.0)
    np.testing.assert_allclose(run.chi.matrix, np.diag([1, 0, 0, 0]), atol=1e-10)
    assert run.fidelity == pytest.approx(1, abs=1e-10)
    run = run_process_tomography_experiment(ExperimentConfig(infinite_n=True), 1.0)
    np.testing.assert_allclose(run.chi.matrix, np.eye(4) / 4, atol=1e-10)
    assert run.fidelity == pytest.approx(1, abs=1e-10)
    with pytest.raises(ParameterError):
        run_process_tomography_experiment(ExperimentConfig(), 1.2)


def test_qpt_all_probes_matches_minimal_in_infinite_mode():
    cfg = ExperimentConfig(infinite_n=True, all_probes=True)
    run = run_process_tomography_experiment(cfg, 0.4)
    np.testing.assert_allclose(run.chi.matrix, chi_depolarizing(0.4).matrix, atol=1e-10)
    assert run.tomography.diagnostics["n_probes"] == 6


def test_qpt_mild_band():
    cfg = ExperimentConfig.mild(p_grid=(0.0, 0.33, 0.66, 1.0), trials=10, rng_seed=21)
    runs = run_process_sweep(cfg)
    assert len(runs) == 40
    assert all(0.95 <= r.fidelity <= 1.0 for r in runs)


def test_worker_count_does_not_change_results():
    cfg = ExperimentConfig.mild(rng_seed=77, trials=2)
    a = run_depolarization_sweep(cfg)
    b = run_depolarization_sweep(cfg.with_overrides(workers=4))
    assert [(p.label, p.p, p.trial, p.bloch, p.records) for p in a] == [(p.label, p.p, p.trial, p.bloch, p.records) for p in b]
    s1 = run_splitting_scan(cfg)
    s2 = run_splitting_scan(cfg.with_overrides(workers=3))
    assert [(r.theta, r.per_state_a, r.counts) for r in s1] == [(r.theta, r.per_state_a, r.counts) for r in s2]


def test_bootstrap_examples():
    rho = density_from_label("D")
    n = 10**15
    exact = []
    for b in ALL_BASES:
        plus, _ = measurement_probabilities(rho, b)
        k = round(plus * n)
        exact.append(CountRecord(b, k, n - k))
    iv = bootstrap_errorbars(exact, 200, np.random.default_rng(0), reference=rho)
    assert all(v.width < 1e-6 for v in iv.values())

    a = bootstrap_errorbars(exact, 150, np.random.default_rng(3), reference=rho)
    b = bootstrap_errorbars(exact, 150, np.random.default_rng(3), reference=rho)
    assert a == b
    with pytest.raises(ParameterError):
        bootstrap_errorbars(exact, 50, np.random.default_rng(0))


def test_bootstrap_width_matches_reported_scale():
    cfg = ExperimentConfig.mild(p_grid=(0.0,), rng_seed=12)
    widths = []
    for pt in run_depolarization_sweep(cfg):
        ref = density_from_label(pt.label)
        iv = bootstrap_errorbars(pt.records, 400, substream(12, 99), reference=ref)
        assert iv["fidelity"].low <= iv["fidelity"].estimate <= iv["fidelity"].high
        widths.append(iv["fidelity"].width)
    # of order 1e-3, like a quoted +-0.003
    assert 1e-3 <= np.median(widths) <= 1e-2
