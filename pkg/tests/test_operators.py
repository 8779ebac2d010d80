import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as quad

from spherecs.grids import build_grid, node_count, ring_quadrature_weights
from spherecs.operators import (
    GradientField,
    MeasurementSet,
    add_noise,
    adjoint_gradient,
    adjoint_measurement,
    apply_measurement,
    draw_mask,
    epsilon_bound,
    noise_sigma,
    snr_db,
    spherical_gradient,
    standard_normal,
    tv_norm,
)

SCHEMES = ["DH", "MW"]


@pytest.mark.parametrize("scheme", SCHEMES)
def test_gradient_of_constant_is_zero(scheme):
    grid = build_grid(scheme, 8)
    g = spherical_gradient(np.full(grid.shape, 3.2), grid)
    assert np.all(g.dtheta == 0) and np.all(g.dphi_scaled == 0)


def test_gradient_of_cos_theta():
    grid = build_grid("MW", 16)
    th, _ = grid.nodes()
    g = spherical_gradient(np.cos(th), grid)
    mid = 0.5 * (grid.thetas[1:] + grid.thetas[:-1])
    dev = np.abs(g.dtheta[:-1] - (-np.sin(mid))[:, None])
    # |d^2/dtheta^2 cos| <= 1
    assert dev.max() < 0.5 * grid.dtheta * 1.0
    assert np.all(g.dtheta[-1] == 0)


def test_gradient_of_azimuthally_symmetric_signal(rng):
    grid = build_grid("DH", 8)
    x = np.repeat(rng.standard_normal((grid.ntheta, 1)), grid.nphi, axis=1)
    assert np.all(spherical_gradient(x, grid).dphi_scaled == 0)


def test_gradient_ignores_longitude_on_pole_ring(rng):
    grid = build_grid("MW", 8)
    x = rng.standard_normal(grid.shape)
    g = spherical_gradient(x, grid)
    assert np.all(g.dphi_scaled[-1] == 0)
    assert np.all(np.isfinite(g.dphi_scaled))


@pytest.mark.parametrize("scheme", SCHEMES)
def test_gradient_adjoint_identity(scheme, rng):
    grid = build_grid(scheme, 12)
    for _ in range(20):
        x = rng.standard_normal(grid.shape)
        g = GradientField(rng.standard_normal(grid.shape), rng.standard_normal(grid.shape))
        gx = spherical_gradient(x, grid)
        lhs = np.sum(gx.dtheta * g.dtheta) + np.sum(gx.dphi_scaled * g.dphi_scaled)
        rhs = np.sum(x * adjoint_gradient(g, grid))
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_gradient_adjoint_examples():
    grid = build_grid("DH", 4)
    z = np.zeros(grid.shape)
    assert np.all(adjoint_gradient(GradientField(z, z), grid) == 0)
    gt = z.copy()
    gt[2, 3] = 1
    out = adjoint_gradient(GradientField(gt, z), grid)
    expected = np.zeros(grid.shape)
    expected[2, 3] = -1 / grid.dtheta
    expected[3, 3] = 1 / grid.dtheta
    np.testing.assert_allclose(out, expected, rtol=1e-15)


def test_tv_examples(rng):
    grid = build_grid("MW", 32)
    assert tv_norm(np.ones(grid.shape), grid) == 0
    x = rng.standard_normal(grid.shape)
    assert tv_norm(-3.5 * x, grid) == pytest.approx(3.5 * tv_norm(x, grid), rel=1e-12)
    with pytest.raises(TypeError):
        tv_norm(x + 0j, grid)


def test_tv_of_dipole_matches_continuous_integral():
    grid = build_grid("MW", 32)
    th, _ = grid.nodes()
    c = np.sqrt(3 / (4 * np.pi))
    # int |grad x| dOmega = c int_0^2pi int_0^pi sin(theta)^2 dtheta dphi
    exact, _ = quad.dblquad(lambda t, p: c * np.sin(t) ** 2, 0, 2 * np.pi, 0, np.pi)
    assert exact == pytest.approx(c * np.pi ** 2, rel=1e-10)
    assert tv_norm(c * np.cos(th), grid) == pytest.approx(exact, rel=0.03)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), scheme=st.sampled_from(SCHEMES))
def test_tv_is_a_seminorm(seed, scheme):
    grid = build_grid(scheme, 8)
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal((2,) + grid.shape)
    ta, tb, tab = tv_norm(a, grid), tv_norm(b, grid), tv_norm(a + b, grid)
    assert ta >= 0 and tb >= 0
    assert tab <= ta + tb + 1e-10


def test_ring_weights_positive():
    # the weighted l21 norm is convex only with non-negative area elements
    for L in range(1, 65):
        for scheme in SCHEMES:
            assert np.all(ring_quadrature_weights(build_grid(scheme, L)) > 0)


def test_mask_examples():
    assert np.array_equal(draw_mask(10, 10, 123), np.arange(10))
    a = draw_mask(4096, 512, 99)
    assert np.array_equal(a, draw_mask(4096, 512, 99))
    assert not np.array_equal(a, draw_mask(4096, 512, 100))
    for seed in range(100):
        m = draw_mask(2016, 512, seed)
        assert m.size == 512 and np.unique(m).size == 512
        assert m.min() >= 0 and m.max() < 2016
    with pytest.raises(ValueError):
        draw_mask(10, 11, 0)
    with pytest.raises(ValueError):
        draw_mask(10, 0, 0)


def test_mask_is_roughly_uniform():
    counts = np.zeros(20)
    for seed in range(2000):
        counts[draw_mask(20, 5, seed)] += 1
    # each node is picked with probability 1/4
    assert np.all(np.abs(counts / 2000 - 0.25) < 0.05)


def test_measurement_operator(rng):
    grid = build_grid("DH", 4)
    x = rng.standard_normal(grid.shape)
    full = np.arange(grid.size)
    assert np.array_equal(apply_measurement(full, x), x.ravel())
    idx = draw_mask(grid.size, 20, 5)
    v = rng.standard_normal(20)
    assert np.array_equal(apply_measurement(idx, adjoint_measurement(idx, v, grid.size)), v)
    for _ in range(20):
        x = rng.standard_normal(grid.shape)
        v = rng.standard_normal(20)
        lhs = np.dot(apply_measurement(idx, x), v)
        rhs = np.sum(x * adjoint_measurement(idx, v, grid.shape))
        assert abs(lhs - rhs) <= 1e-14 * abs(lhs)
    with pytest.raises(IndexError):
        apply_measurement([grid.size], x)
    with pytest.raises(IndexError):
        adjoint_measurement([grid.size], [1.0], grid.size)


def test_noise():
    v = np.linspace(0, 1, 7)
    assert np.array_equal(add_noise(v, 0.0, 1), v)
    assert np.array_equal(add_noise(v, 0.3, 1), add_noise(v, 0.3, 1))
    sigma = 2.5
    z = add_noise(np.zeros(10**6), sigma, 42)
    assert abs(z.mean()) < 4 * sigma / 1e3
    assert z.var() == pytest.approx(sigma ** 2, rel=0.01)
    with pytest.raises(ValueError):
        add_noise(v, -1.0, 0)


def test_box_muller_draws_are_normal():
    from scipy import stats
    z = standard_normal(20001, seed=3)
    assert z.size == 20001
    assert stats.kstest(z, "norm").pvalue > 1e-3


def test_epsilon_bound():
    assert epsilon_bound(10, 0.0) == 0
    assert epsilon_bound(512, 1.0) == pytest.approx(24.0, abs=1e-12)
    eps = epsilon_bound(512, 1.0)
    hits = sum(np.linalg.norm(standard_normal(512, seed)) <= eps for seed in range(10**4))
    assert hits >= 9500


def test_noise_sigma():
    assert noise_sigma(np.full(50, 2.0), 20.0) == pytest.approx(0.2)


def test_snr_examples(rng):
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert snr_db(x, x) == np.inf
    assert snr_db(x, np.zeros(64)) == pytest.approx(0.0, abs=1e-12)
    e = rng.standard_normal(64)
    e *= np.linalg.norm(x) / 10 / np.linalg.norm(e)
    assert snr_db(x, x + e) == pytest.approx(20.0, abs=1e-9)


def test_measurement_set_validation():
    m = MeasurementSet([3, 1], [0.5, 0.2], 0.1, 0.2)
    assert m.M == 2
    with pytest.raises(ValueError):
        MeasurementSet([1, 1], [0.5, 0.2], 0.1, 0.2)
    with pytest.raises(ValueError):
        MeasurementSet([1, 2], [0.5], 0.1, 0.2)
    with pytest.raises(ValueError):
        MeasurementSet([1, 2], [0.5, 0.1], 0.1, -1)


def test_mw_has_fewer_samples_than_dh():
    for L in range(2, 65):
        assert node_count("MW", L) < node_count("DH", L)
    assert (node_count("MW", 32), node_count("DH", 32)) == (2016, 4096)
