import numpy as np
import pytest

from triellipse import (
    AnalyticSignal3,
    bandwidth_decompose,
    edge_mask,
    effective_precession,
    ellipse_extract,
    ellipse_rates,
    ellipse_synthesize,
    EllipseSeries,
    global_moments_spectral,
    global_moments_time,
    instantaneous_moments,
    joint_analytic_spectrum,
    joint_bandwidth_sq,
    joint_bandwidth_sq_alt,
    joint_instantaneous_frequency,
    joint_second_central,
    make_random_modulated,
    make_smooth_path,
)

from conftest import circular_signal, demo_series


def test_omega_constant_for_fixed_ellipse():
    # slow orbital rate keeps the central4 truncation (rate^4/30 relative)
    # below the 1e-8 contract
    rate = 0.02
    xp = ellipse_synthesize(demo_series(n=1024, phi_rate=rate))
    omega = joint_instantaneous_frequency(xp)
    i = ~edge_mask(1024)
    assert np.abs(omega[i] - rate).max() < 1e-8 * rate


def test_sigma2_zero_at_true_mean():
    # exact-bin periodic signal: the spectral derivative is exact there
    xp, omega0 = circular_signal(n=256, k=16)
    s2 = joint_second_central(xp, mean_freq=omega0, scheme="spectral")
    assert np.abs(s2).max() < 1e-10


def test_sigma2_is_delta_squared_for_shifted_mean():
    xp, omega0 = circular_signal(n=256, k=16)
    delta = 0.05
    s2 = joint_second_central(xp, mean_freq=omega0 + delta, scheme="spectral")
    assert np.abs(s2 - delta**2).max() < 1e-10


def test_bandwidth_zero_for_constant_geometry():
    xp = ellipse_synthesize(demo_series(n=512))
    u2 = joint_bandwidth_sq(xp)
    i = ~edge_mask(512)
    assert np.abs(u2[i]).max() < 1e-10


def test_bandwidth_forms_agree():
    for seed in range(5):
        xp = make_random_modulated(1024, seed)
        diff = np.abs(joint_bandwidth_sq(xp) - joint_bandwidth_sq_alt(xp))
        assert diff.max() < 1e-10


def test_second_moment_identity_pointwise():
    # sigma2 - (omega - wbar)^2 == upsilon2 with shared scheme and wbar
    xp = make_random_modulated(1024, 42)
    m = instantaneous_moments(xp)
    lhs = m.sigma2 - (m.omega - m.mean_freq) ** 2
    assert np.abs(lhs - m.upsilon2).max() < 1e-10


def test_sigma2_nonnegative_everywhere():
    for seed in range(5):
        m = instantaneous_moments(make_random_modulated(1024, seed))
        assert m.sigma2.min() >= 0.0
        assert m.upsilon2.min() >= 0.0


def test_zero_signal_rejected():
    xp = AnalyticSignal3(np.zeros((64, 3), dtype=complex))
    with pytest.raises(ValueError):
        joint_instantaneous_frequency(xp)
    with pytest.raises(ValueError):
        instantaneous_moments(xp)
    with pytest.raises(ValueError):
        joint_analytic_spectrum(xp)


def _full_decomposition(xp, mean_freq=None):
    m = instantaneous_moments(xp, mean_freq=mean_freq)
    ext = ellipse_extract(xp)
    rates = ellipse_rates(ext.ellipse)
    d = bandwidth_decompose(
        xp, ext.ellipse, rates, ext.normal, ext.planar, omega=m.omega
    )
    return m, ext, rates, d


def test_decomposition_zero_for_constant_geometry():
    xp = ellipse_synthesize(demo_series(n=512, phi_rate=0.02))
    m, _, _, d = _full_decomposition(xp, mean_freq=0.02)
    i = ~edge_mask(512)
    for term in (d.term_amplitude, d.term_deformation, d.term_precession, d.term_normal):
        assert np.abs(term[i]).max() < 1e-10


def test_decomposition_reconstructs_bandwidth():
    series, _ = make_smooth_path(2048, 2048.0)
    xp = ellipse_synthesize(series)
    m, _, _, d = _full_decomposition(xp, mean_freq=0.025)
    i = ~edge_mask(2048)
    resid = np.abs(d.total[i] - m.upsilon2[i]).max() / m.upsilon2[i].max()
    assert resid < 1e-4


def test_bounds_hold_on_random_signals():
    for seed in range(5):
        xp = make_random_modulated(1024, seed)
        m, _, _, d = _full_decomposition(xp)
        i = ~edge_mask(1024)
        assert np.max(d.total[i] - d.bound[i]) < 1e-8
        assert np.max(d.term_normal[i] - d.bound_normal[i]) < 1e-8
        for term in (d.term_amplitude, d.term_deformation,
                     d.term_precession, d.term_normal):
            assert term.min() >= 0.0


def test_effective_precession_planar_reduces_to_theta_rate():
    # fixed plane: alpha, beta constant; effective precession equals theta'
    n = 512
    w_t = 2e-3
    series = EllipseSeries.from_paths(
        a=3.0, b=2.0, theta=w_t * np.arange(n), phi=0.03 * np.arange(n),
        alpha=0.3, beta=1.0,
    )
    xp = ellipse_synthesize(series)
    m, ext, rates, _ = _full_decomposition(xp, mean_freq=0.03)
    ep = effective_precession(ext.ellipse, rates, m.omega)
    i = ~edge_mask(n)
    assert np.abs(ep.value[i] - w_t).max() < 1e-6
    assert np.abs(ep.residual[i]).max() < 1e-6


def test_effective_precession_residual_smooth_path():
    series, _ = make_smooth_path(4096, 4096.0)
    xp = ellipse_synthesize(series)
    m, ext, rates, _ = _full_decomposition(xp, mean_freq=0.025)
    ep = effective_precession(ext.ellipse, rates, m.omega)
    i = ~edge_mask(4096)
    assert np.abs(ep.residual[i]).max() < 1e-6
    assert not ep.unreliable[i].any()


def test_bivariate_reduction_constant_plane():
    # with the ellipse plane fixed, the out-of-plane term vanishes and the
    # planar forms of frequency and bandwidth hold
    n = 1024
    t = np.arange(n)
    series = EllipseSeries.from_paths(
        a=1.0 + 0.2 * np.sin(2 * np.pi * 3 * t / n),
        b=0.5 * np.ones(n),
        theta=0.4 * np.sin(2 * np.pi * 2 * t / n),
        phi=0.03 * t, alpha=0.7, beta=1.1,
    )
    xp = ellipse_synthesize(series)
    m, ext, rates, d = _full_decomposition(xp, mean_freq=0.03)
    i = ~edge_mask(n)
    assert d.term_normal[i].max() < 1e-10
    e = ext.ellipse
    omega_planar = rates.omega_phi + np.sqrt(1.0 - e.lam**2) * rates.omega_theta
    ups_planar = (
        rates.dkappa_rel**2
        + 0.25 * rates.dlambda**2 / (1.0 - e.lam**2)
        + e.lam**2 * rates.omega_theta**2
    )
    assert np.abs(m.omega[i] - omega_planar[i]).max() < 1e-6
    assert np.abs(m.upsilon2[i] - ups_planar[i]).max() < 1e-6 * m.upsilon2[i].max()


def test_global_time_exact_bin():
    xp, omega0 = circular_signal(n=256, k=16)
    m = instantaneous_moments(xp, mean_freq=omega0, scheme="spectral")
    g = global_moments_time(xp, m)
    assert abs(g.mean_freq - omega0) < 1e-10


def test_global_spectral_exact_bin_unpadded_is_exact():
    xp, omega0 = circular_signal(n=256, k=16)
    g = global_moments_spectral(xp, pad_factor=1)
    assert abs(g.mean_freq - omega0) < 1e-12
    assert abs(g.second_central) < 1e-12


def test_global_spectral_exact_bin_padded_default():
    # padding samples the rectangular-window kernel between the exact-bin
    # zeros, so the mean wanders at the kernel-tail level (well under a bin)
    xp, omega0 = circular_signal(n=256, k=16)
    g = global_moments_spectral(xp)
    assert abs(g.mean_freq - omega0) < 2.0 * np.pi / 256


def test_spectrum_normalization():
    xp = make_random_modulated(1024, 7)
    freqs, values = joint_analytic_spectrum(xp)
    assert abs(np.trapezoid(values, freqs) / (2 * np.pi) - 1.0) < 1e-12


def test_energy_matches_time_integral():
    xp = make_random_modulated(1024, 3)
    g = global_moments_spectral(xp)
    assert abs(g.energy - np.trapezoid(xp.power)) < 1e-9 * g.energy


def test_time_vs_spectral_identity_windowed():
    xp = make_random_modulated(2048, 11)
    gs = global_moments_spectral(xp)
    m = instantaneous_moments(xp, mean_freq=gs.mean_freq)
    k = 205
    gt = global_moments_time(xp, m, slice(k, 2048 - k))
    assert abs(gt.mean_freq - gs.mean_freq) / gs.mean_freq < 1e-3
    assert abs(gt.second_central - gs.second_central) / gs.second_central < 1e-3


def test_unreliable_flags_low_power():
    xp, _ = circular_signal(n=256, k=16)
    scaled = xp.samples.copy()
    scaled[100:110] *= 1e-9
    m = instantaneous_moments(AnalyticSignal3(scaled), eps_pow=1e-8)
    assert m.unreliable[100:110].all()
    assert not m.unreliable[:100].any()
