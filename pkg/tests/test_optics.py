import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sagnac_depol.errors import DegenerateInputError, ParameterError
from sagnac_depol.optics import (
    DepolarizerConfig,
    Imperfections,
    SagnacConfig,
    fiber_depolarize,
    full_apparatus,
    hwp,
    incoherent_combine,
    qwp,
    sagnac_operators,
    sagnac_split,
    sagnac_split_jones,
    sagnac_split_pure,
    splitting_parameter,
    theta_for_p,
)
from sagnac_depol.qstate import (
    CANONICAL_LABELS,
    bloch_from_density,
    density_from_label,
    density_from_pure,
    maximally_mixed,
    pure_from_label,
    purity,
    random_density,
    random_pure,
    state_fidelity,
)

from .strategies import density_matrices

S = 1 / math.sqrt(2)
ANGLES = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def kron_sagnac(psi, theta, eps=0.0, offsets=(0.0, 0.0)):
    """Oracle: the interferometer on (spatial mode x polarization) with Kronecker products.

    Spatial index 0 is the input port / clockwise path / output A,
    index 1 the counter-clockwise path / output B.
    """
    t = np.diag([math.sqrt(1 - eps), math.sqrt(eps)])
    r = 1j * np.diag([math.sqrt(eps), math.sqrt(1 - eps)])
    swap = np.array([[0, 1], [1, 0]])
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])

    def plate(angle):
        c, s = math.cos(2 * angle), math.sin(2 * angle)
        return np.array([[c, s], [s, -c]])

    pbs = np.kron(np.eye(2), t) + np.kron(swap, r)
    plates = np.kron(p0, plate(theta + offsets[0])) + np.kron(p1, plate(theta + offsets[1]))
    fixed = np.kron(p0, np.eye(2)) + np.kron(p1, plate(math.pi / 4))
    out = fixed @ pbs @ plates @ pbs @ np.kron([1, 0], psi)
    return out[:2], out[2:]


def test_hwp_examples():
    np.testing.assert_allclose(hwp(0), np.diag([1, -1]), atol=1e-15)
    np.testing.assert_allclose(hwp(math.pi / 4), [[0, 1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(hwp(math.pi / 8) @ [1, 0], [S, S], atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(ANGLES)
def test_waveplates_unitary(theta):
    for m in (hwp(theta), qwp(theta)):
        np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(hwp(theta) @ hwp(theta), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(qwp(theta), 4), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(qwp(theta) @ qwp(theta), hwp(theta), atol=1e-12)


def test_qwp_examples():
    h = np.array([1, 0])
    out = qwp(0) @ h
    assert abs(np.vdot(h, out)) == pytest.approx(1, abs=1e-15)
    # fast axis at 45 deg: H -> R = (H - iV)/sqrt(2) up to a global phase
    out = qwp(math.pi / 4) @ h
    assert abs(np.vdot(pure_from_label("R").vector, out)) ** 2 == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("theta, p", [(0, 0), (math.pi / 8, 0.5), (math.pi / 4, 1)])
def test_splitting_parameter(theta, p):
    assert splitting_parameter(theta) == pytest.approx(p, abs=1e-15)


def test_theta_for_p_inverts_splitting_law():
    for p in np.linspace(0, 1, 21):
        assert splitting_parameter(theta_for_p(p)) == pytest.approx(p, abs=1e-14)
    with pytest.raises(ParameterError):
        theta_for_p(1.5)


def test_split_passes_through_at_zero(rng):
    rho = random_density(rng)
    out = sagnac_split(rho, SagnacConfig(0.0))
    assert out.weight_a == pytest.approx(1, abs=1e-15)
    assert out.weight_b == pytest.approx(0, abs=1e-15)
    np.testing.assert_allclose(out.state_a.matrix, rho.matrix, atol=1e-15)


def test_split_diagonal_at_half():
    d = density_from_label("D")
    out = sagnac_split(d, SagnacConfig(math.pi / 8))
    assert (out.weight_a, out.weight_b) == pytest.approx((0.5, 0.5), abs=1e-15)
    np.testing.assert_allclose(out.state_a.matrix, d.matrix, atol=1e-15)
    np.testing.assert_allclose(out.state_b.matrix, d.matrix, atol=1e-15)


def test_jones_examples():
    a, b = sagnac_split_jones(pure_from_label("H"), SagnacConfig(0.0))
    assert a.weight == pytest.approx(1, abs=1e-15) and b.weight == pytest.approx(0, abs=1e-15)
    np.testing.assert_allclose(a.state.vector, [1, 0], atol=1e-15)

    a, b = sagnac_split_jones(pure_from_label("V"), SagnacConfig(math.pi / 4))
    assert a.weight == pytest.approx(0, abs=1e-15) and b.weight == pytest.approx(1, abs=1e-15)
    assert abs(np.vdot([0, 1], b.state.vector)) == pytest.approx(1, abs=1e-15)

    a, b = sagnac_split_jones(pure_from_label("R"), SagnacConfig(math.pi / 8))
    assert (a.weight, b.weight) == pytest.approx((0.5, 0.5), abs=1e-15)
    r = pure_from_label("R").vector
    assert abs(np.vdot(r, a.state.vector)) == pytest.approx(1, abs=1e-15)
    assert abs(np.vdot(r, b.state.vector)) == pytest.approx(1, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(ANGLES, st.floats(0, 0.2), st.floats(-0.05, 0.05), st.floats(-0.05, 0.05))
def test_jones_path_matches_kron_oracle(theta, eps, off1, off2):
    rng = np.random.default_rng(abs(hash((theta, eps))) % 2**32)
    psi = random_pure(rng)
    cfg = SagnacConfig(theta, eps, (off1, off2))
    exp_a, exp_b = kron_sagnac(psi.vector, theta, eps, (off1, off2))
    a, b = sagnac_split_jones(psi, cfg)
    m_a, m_b = sagnac_operators(cfg)
    np.testing.assert_allclose(m_a @ psi.vector, exp_a, atol=1e-12)
    np.testing.assert_allclose(m_b @ psi.vector, exp_b, atol=1e-12)
    assert a.weight == pytest.approx(np.vdot(exp_a, exp_a).real, abs=1e-12)
    assert b.weight == pytest.approx(np.vdot(exp_b, exp_b).real, abs=1e-12)
    assert a.weight + b.weight == pytest.approx(1, abs=1e-12)


def test_ideal_operators_closed_form():
    # hand derivation: A = cos(2t) psi, B = i sin(2t) psi
    for theta in np.linspace(0, math.pi, 13):
        m_a, m_b = sagnac_operators(SagnacConfig(theta))
        np.testing.assert_allclose(m_a, math.cos(2 * theta) * np.eye(2), atol=1e-15)
        np.testing.assert_allclose(m_b, 1j * math.sin(2 * theta) * np.eye(2), atol=1e-15)


def test_leaky_pbs_closed_form():
    # hand derivation with e = sqrt(eps (1 - eps)):
    # A = (1 - 2 eps) cos(2t) I, B = i [[s, -2 e c], [2 e c, s]]
    eps = 0.01
    e = math.sqrt(eps * (1 - eps))
    for theta in np.linspace(0, math.pi / 2, 7):
        c, s = math.cos(2 * theta), math.sin(2 * theta)
        m_a, m_b = sagnac_operators(SagnacConfig(theta, eps))
        np.testing.assert_allclose(m_a, (1 - 2 * eps) * c * np.eye(2), atol=1e-15)
        np.testing.assert_allclose(m_b, 1j * np.array([[s, -2 * e * c], [2 * e * c, s]]), atol=1e-15)


@pytest.mark.parametrize("label", CANONICAL_LABELS)
def test_ideal_split_identity_for_canonical_inputs(label):
    psi = pure_from_label(label)
    for theta in np.linspace(0, math.pi, 37):
        a, b = sagnac_split_jones(psi, SagnacConfig(theta))
        p = math.sin(2 * theta) ** 2
        assert a.weight == pytest.approx(1 - p, abs=1e-12)
        assert b.weight == pytest.approx(p, abs=1e-12)
        for mode in (a, b):
            if mode.state is not None and mode.weight > 1e-12:
                assert abs(np.vdot(psi.vector, mode.state.vector)) ** 2 == pytest.approx(1, abs=1e-12)


def test_density_split_agrees_with_jones_split(rng):
    for _ in range(50):
        psi = random_pure(rng)
        cfg = SagnacConfig(rng.uniform(0, math.pi), rng.uniform(0, 0.1), tuple(rng.normal(0, 0.01, 2)))
        lifted = sagnac_split_pure(psi, cfg)
        direct = sagnac_split(density_from_pure(psi), cfg)
        assert lifted.weight_a == pytest.approx(direct.weight_a, abs=1e-12)
        np.testing.assert_allclose(lifted.state_a.matrix, direct.state_a.matrix, atol=1e-12)
        np.testing.assert_allclose(lifted.state_b.matrix, direct.state_b.matrix, atol=1e-12)


def test_weight_a_is_input_independent():
    for theta in np.linspace(0, math.pi / 4, 19):
        weights = [sagnac_split(density_from_label(lab), SagnacConfig(theta)).weight_a for lab in CANONICAL_LABELS]
        mean = np.mean(weights)
        assert max(abs(w - mean) for w in weights) <= 1e-12


def test_imperfect_split_reports_fidelity():
    out = sagnac_split(density_from_label("D"), SagnacConfig(math.pi / 8, 0.01))
    assert out.fidelity_a == pytest.approx(1, abs=1e-12)
    assert 0.9 < out.fidelity_b < 1
    assert out.fidelity_b == pytest.approx(state_fidelity(density_from_label("D"), out.state_b), abs=1e-15)


def test_fiber_depolarize_examples(rng):
    np.testing.assert_allclose(fiber_depolarize(density_from_label("H"), DepolarizerConfig(1.0)).matrix, np.eye(2) / 2, atol=1e-15)
    rho = random_density(rng)
    np.testing.assert_allclose(fiber_depolarize(rho, DepolarizerConfig(0.0)).matrix, rho.matrix, atol=1e-15)
    out = fiber_depolarize(density_from_label("D"), 0.5)
    np.testing.assert_allclose(bloch_from_density(out).array, (0.5, 0, 0), atol=1e-15)
    with pytest.raises(ParameterError):
        DepolarizerConfig(1.2)


def test_incoherent_combine_examples(rng):
    rho = random_density(rng)
    p = 0.3
    out = incoherent_combine(rho, 1 - p, maximally_mixed(), p)
    np.testing.assert_allclose(out.matrix, p * np.eye(2) / 2 + (1 - p) * rho.matrix, atol=1e-15)
    np.testing.assert_allclose(incoherent_combine(rho, 1, maximally_mixed(), 0).matrix, rho.matrix, atol=1e-15)
    out = incoherent_combine(density_from_label("H"), 0.5, density_from_label("V"), 0.5)
    np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-15)
    with pytest.raises(DegenerateInputError):
        incoherent_combine(rho, 0, rho, 0)


def test_incoherent_combine_is_not_a_superposition():
    # coherent addition of H and V amplitudes would give D; the mixture is I/2
    out = incoherent_combine(density_from_label("H"), 1, density_from_label("V"), 1)
    assert purity(out) == pytest.approx(0.5, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(density_matrices(), st.floats(0, 1), st.floats(0, 1))
def test_stages_preserve_physicality(rho, d, w):
    for out in (fiber_depolarize(rho, d), incoherent_combine(rho, w, maximally_mixed(), 1 - w + 1e-3)):
        m = out.matrix
        np.testing.assert_allclose(m, m.conj().T, atol=1e-12)
        assert np.trace(m).real == pytest.approx(1, abs=1e-12)
        assert np.linalg.eigvalsh(m).min() >= -1e-12


def test_full_apparatus_examples(rng):
    rho = random_density(rng)
    np.testing.assert_allclose(full_apparatus(rho, 0.0).matrix, rho.matrix, atol=1e-15)
    np.testing.assert_allclose(full_apparatus(rho, math.pi / 4).matrix, np.eye(2) / 2, atol=1e-15)
    for lab in CANONICAL_LABELS:
        pure = density_from_label(lab)
        r_in = bloch_from_density(pure).array
        r_out = bloch_from_density(full_apparatus(pure, math.pi / 8)).array
        np.testing.assert_allclose(r_out, r_in / 2, atol=1e-12)


def test_full_apparatus_equals_depolarizing_channel(rng):
    for _ in range(10):
        rho = random_density(rng)
        for theta in rng.uniform(-math.pi, math.pi, 100):
            p = math.sin(2 * theta) ** 2
            expected = p * np.eye(2) / 2 + (1 - p) * rho.matrix
            np.testing.assert_allclose(full_apparatus(rho, theta).matrix, expected, atol=1e-12)


def test_full_apparatus_with_partial_fiber():
    rho = density_from_label("D")
    out = full_apparatus(rho, math.pi / 8, Imperfections(fiber_depolarization=0.5))
    # mode B keeps half its polarization: r = 0.5 * 1 + 0.5 * 0.5
    np.testing.assert_allclose(bloch_from_density(out).array, (0.75, 0, 0), atol=1e-12)


def test_config_json_uses_degrees():
    cfg = SagnacConfig(math.pi / 8, 0.01, (math.radians(0.2), 0.0))
    data = cfg.to_json()
    assert data["theta_deg"] == pytest.approx(22.5)
    assert data["plate_offsets_deg"][0] == pytest.approx(0.2)
    back = SagnacConfig.from_json(data)
    assert back.theta == pytest.approx(cfg.theta, abs=1e-15)
    assert back.plate_offsets[0] == pytest.approx(cfg.plate_offsets[0], abs=1e-15)
    assert DepolarizerConfig.from_json({"d": 0.9}) == DepolarizerConfig(0.9)
    with pytest.raises(ParameterError):
        SagnacConfig(0.1, pbs_extinction=-0.1)
