import numpy as np
import pytest

from cfomimo import (CfoPrior, CorrelationModel, ModelError, build_stats,
                     custom_pilot, expand_block, generate_td_pilot, make_model,
                     sample_ar1_trajectory, synthesize_rx)
from cfomimo.channel import complex_gaussian, _psd_factor


def scalar_model(rho_h, var=1.0, mean=0.0):
    return CorrelationModel(l_t=1, l_r=1, rho_h=rho_h,
                            spatial_cov=np.array([[var]], dtype=complex),
                            mean=np.array([mean], dtype=complex))


def test_build_stats_fully_correlated():
    stats = build_stats(scalar_model(1.0), 3)
    np.testing.assert_allclose(stats.sigma_h, np.ones((3, 3)), atol=1e-15)
    np.testing.assert_array_equal(stats.mu_h, np.zeros(3))


def test_build_stats_iid_over_time():
    stats = build_stats(scalar_model(0.0), 3)
    np.testing.assert_allclose(stats.sigma_h, np.eye(3), atol=1e-15)


def test_build_stats_geometric_decay():
    stats = build_stats(scalar_model(0.5), 3)
    expected = np.array([
        [1.0, 0.5, 0.25],
        [0.5, 1.0, 0.5],
        [0.25, 0.5, 1.0],
    ])
    np.testing.assert_allclose(stats.sigma_h, expected, atol=1e-15)


def test_build_stats_separability_entrywise():
    model = make_model(2, 2, 0.7, spatial="exponential", mean="rician")
    n = 4
    stats = build_stats(model, n)
    c4 = model.spatial_cov.reshape(2, 2, 2, 2)
    sig6 = stats.sigma_h.reshape(2, n, 2, 2, n, 2)
    for r1 in range(2):
        for t1 in range(2):
            for k1 in range(n):
                for r2 in range(2):
                    for t2 in range(2):
                        for k2 in range(n):
                            expected = 0.7 ** abs(k1 - k2) * c4[r1, t1, r2, t2]
                            assert sig6[r1, k1, t1, r2, k2, t2] == pytest.approx(expected)


@pytest.mark.parametrize("rho_h", [0.0, 0.3, 0.7, 1.0])
@pytest.mark.parametrize("spatial", ["iid", "exponential"])
def test_build_stats_always_hermitian_psd(rho_h, spatial):
    model = make_model(2, 2, rho_h, spatial=spatial, mean="rician", rician_k=0.5)
    stats = build_stats(model, 5)
    sigma = stats.sigma_h
    assert np.max(np.abs(sigma - sigma.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(sigma)[0] > -1e-10


def test_time_replicated_mean():
    model = make_model(2, 2, 0.5, mean="rician", rician_k=1.0)
    stats = build_stats(model, 3)
    mu3 = stats.mu_h.reshape(2, 3, 2)
    for k in range(3):
        np.testing.assert_allclose(mu3[:, k, :].ravel(), model.mean)


def test_rician_split_keeps_unit_power():
    model = make_model(2, 2, 0.5, mean="rician", rician_k=1.0)
    assert model.per_coefficient_power() == pytest.approx(1.0)
    np.testing.assert_allclose(np.diag(model.spatial_cov), 0.5)
    np.testing.assert_allclose(model.mean, np.sqrt(0.5))


def test_non_psd_spatial_rejected():
    bad = np.array([[1.0, 2.0], [2.0, 1.0]], dtype=complex)  # eigenvalue -1
    with pytest.raises(ModelError):
        CorrelationModel(l_t=2, l_r=1, rho_h=0.5, spatial_cov=bad,
                         mean=np.zeros(2, dtype=complex))


def test_rho_h_range_checked():
    with pytest.raises(ModelError):
        scalar_model(1.5)
    with pytest.raises(ModelError):
        scalar_model(-0.1)


def test_ar1_frozen_channel_is_constant(rng):
    model = make_model(2, 2, 1.0)
    h = sample_ar1_trajectory(model, 6, rng).reshape(2, 6, 2)
    for k in range(1, 6):
        np.testing.assert_allclose(h[:, k, :], h[:, 0, :], atol=1e-12)


def test_ar1_iid_matches_spatial_covariance(rng):
    # rho_h = 0: every symbol is a fresh draw, so pooling times gives many samples
    model = make_model(2, 1, 0.0, spatial="exponential", spatial_a=0.4, spatial_b=0.4)
    n, trials = 5, 20000
    pool = np.empty((trials * n, 2), dtype=complex)
    for i in range(trials):
        h = sample_ar1_trajectory(model, n, rng).reshape(1, n, 2)
        pool[i * n:(i + 1) * n] = h[0]
    count = pool.shape[0]
    emp = (pool.conj().T @ pool / count).T  # E[h h^H]
    band = 3.0 / np.sqrt(count)
    assert np.max(np.abs(emp - model.spatial_cov)) < band


def test_ar1_lag_one_autocorrelation(rng):
    rho = 0.9
    model = scalar_model(rho)
    n, trials = 6, 100000
    acc = 0.0
    var = 0.0
    for _ in range(trials):
        h = sample_ar1_trajectory(model, n, rng)
        acc += np.sum(h[1:] * np.conj(h[:-1])).real
        var += np.sum(np.abs(h) ** 2).real
    lag1 = acc / trials / (n - 1)
    marginal = var / trials / n
    assert lag1 / marginal == pytest.approx(rho, abs=0.01)


def test_ar1_mean_is_constant(rng):
    model = make_model(1, 1, 0.6, mean="rician", rician_k=2.0)
    trials, n = 20000, 4
    total = np.zeros((n,), dtype=complex)
    for _ in range(trials):
        total += sample_ar1_trajectory(model, n, rng)
    avg = total / trials
    np.testing.assert_allclose(avg, model.mean[0] * np.ones(n), atol=0.02)


def test_psd_factor_handles_singular():
    cov = np.ones((3, 3), dtype=complex)  # rank one
    factor = _psd_factor(cov)
    np.testing.assert_allclose(factor @ factor.conj().T, cov, atol=1e-12)


def test_complex_gaussian_unit_variance_split(rng):
    factor = np.array([[1.0]], dtype=complex)
    draws = complex_gaussian(rng, factor, 1000000)[:, 0]
    assert np.var(draws.real) == pytest.approx(0.5, rel=0.01)
    assert np.var(draws.imag) == pytest.approx(0.5, rel=0.01)
    assert np.mean(np.abs(draws) ** 2) == pytest.approx(1.0, rel=0.01)


def test_synthesize_constant_channel_no_offset():
    pilot = custom_pilot(np.ones((4, 1), dtype=complex))
    h = np.full(4, 2.0 - 1.0j)
    y = synthesize_rx(pilot, 1, 0.0, h, None)
    np.testing.assert_allclose(y, np.full(4, 2.0 - 1.0j), atol=1e-15)


def test_synthesize_quarter_cycle_rotation():
    pilot = custom_pilot(np.ones((4, 1), dtype=complex))
    y = synthesize_rx(pilot, 1, 0.25, np.ones(4, dtype=complex), None)
    np.testing.assert_allclose(y, np.array([1.0, 1j, -1.0, -1j]), atol=1e-12)


def test_synthesize_matches_matrix_form(rng):
    model = make_model(2, 2, 0.5, spatial="exponential", mean="rician")
    n = 6
    pilot = generate_td_pilot(2, 3, rho=1.4)
    h = sample_ar1_trajectory(model, n, rng)
    f = 0.07
    y = synthesize_rx(pilot, 2, f, h, None)
    phases = np.tile(np.exp(2j * np.pi * f * np.arange(n)), 2)
    oracle = phases * (expand_block(pilot, 2) @ h)
    np.testing.assert_allclose(y, oracle, atol=1e-12)


def test_synthesize_per_antenna_offsets(rng):
    model = make_model(1, 2, 1.0)
    pilot = custom_pilot(np.ones((3, 1), dtype=complex))
    h = np.ones(6, dtype=complex)
    y = synthesize_rx(pilot, 2, np.array([0.25, -0.25]), h, None).reshape(2, 3)
    np.testing.assert_allclose(y[0], np.array([1.0, 1j, -1.0]), atol=1e-12)
    np.testing.assert_allclose(y[1], np.array([1.0, -1j, -1.0]), atol=1e-12)


def test_synthesize_linear_and_phase_equivariant(rng):
    model = make_model(2, 2, 0.8)
    pilot = generate_td_pilot(2, 3)
    h1 = sample_ar1_trajectory(model, 6, rng)
    h2 = sample_ar1_trajectory(model, 6, rng)
    f = 0.11
    y1 = synthesize_rx(pilot, 2, f, h1, None)
    y2 = synthesize_rx(pilot, 2, f, h2, None)
    y12 = synthesize_rx(pilot, 2, f, 2.0 * h1 + 3.0 * h2, None)
    np.testing.assert_allclose(y12, 2.0 * y1 + 3.0 * y2, atol=1e-12)
    phase = np.exp(0.73j)
    np.testing.assert_allclose(synthesize_rx(pilot, 2, f, phase * h1, None),
                               phase * y1, atol=1e-12)


def test_synthesize_noise_variance(rng):
    pilot = custom_pilot(np.ones((1000, 1), dtype=complex))
    h = np.zeros(1000, dtype=complex)
    samples = np.concatenate([synthesize_rx(pilot, 1, 0.0, h, rng)
                              for _ in range(100)])
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(1.0, rel=0.01)
    assert np.var(samples.real) == pytest.approx(0.5, rel=0.02)


def test_prior_modes():
    ml = CfoPrior.ml(0.1)
    assert ml.is_ml and ml.inv_var == 0.0
    gauss = CfoPrior(0.1, 1e-5)
    assert not gauss.is_ml
    assert gauss.inv_var == pytest.approx(1e5)
    with pytest.raises(ModelError):
        CfoPrior(0.0, 0.0)
    with pytest.raises(ModelError):
        ml.sample(np.random.default_rng(0))
