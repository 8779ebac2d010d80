import numpy as np
import pytest
from scipy.special import eval_legendre, sph_harm_y

from spherecs.grids import Scheme, build_grid, integrate, node_count, ring_quadrature_weights

from conftest import dense_synthesis


@pytest.mark.parametrize("scheme,L,expected", [("MW", 32, 2016), ("DH", 32, 4096), ("MW", 1, 1)])
def test_node_count_examples(scheme, L, expected):
    assert node_count(scheme, L) == expected
    assert build_grid(scheme, L).size == expected


@pytest.mark.parametrize("L", range(1, 65))
def test_node_count_matches_enumeration(L):
    for scheme in Scheme:
        grid = build_grid(scheme, L)
        th, ph = grid.nodes()
        nodes = {(a, b) for a, b in zip(th.ravel(), ph.ravel())}
        assert len(nodes) == node_count(scheme, L)
    assert node_count("MW", L) == L * (2 * L - 1)
    assert node_count("DH", L) == 4 * L * L


def test_single_node_mw_grid():
    grid = build_grid("MW", 1)
    assert grid.shape == (1, 1)
    assert grid.thetas[0] == pytest.approx(np.pi)
    assert grid.phis[0] == 0.0


@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_rejects_bad_band_limit(bad):
    with pytest.raises(ValueError):
        build_grid("MW", bad)
    with pytest.raises(ValueError):
        node_count("DH", bad)


def test_rejects_unknown_scheme():
    with pytest.raises(ValueError):
        build_grid("HEALPIX", 4)


@pytest.mark.parametrize("scheme", ["DH", "MW"])
@pytest.mark.parametrize("L", [2, 7, 16])
def test_grid_structure(scheme, L):
    grid = build_grid(scheme, L)
    assert np.all(np.diff(grid.thetas) > 0)
    assert grid.thetas[0] > 0 and grid.thetas[-1] <= np.pi
    dphi = np.diff(grid.phis)
    np.testing.assert_allclose(dphi, grid.dphi, rtol=1e-13)
    assert grid.phis[0] == 0 and grid.phis[-1] < 2 * np.pi
    np.testing.assert_allclose(np.diff(grid.thetas), grid.dtheta, rtol=1e-12)


def test_grid_is_hashable_and_immutable():
    a, b = build_grid("mw", 8), build_grid(Scheme.MW, 8)
    assert a == b and hash(a) == hash(b)
    with pytest.raises(Exception):
        a.L = 4
    with pytest.raises(ValueError):
        a.thetas[0] = 1.0


def test_dh_unit_area_example():
    grid = build_grid("DH", 4)
    w = ring_quadrature_weights(grid)
    assert np.sum(w) * 2 * grid.L * (2 * np.pi / (2 * grid.L)) == pytest.approx(4 * np.pi, abs=1e-9)


@pytest.mark.parametrize("L", [4, 8, 16, 32])
def test_dh_weights_integrate_legendre_polynomials(L):
    grid = build_grid("DH", L)
    w = ring_quadrature_weights(grid)
    z = np.cos(grid.thetas)
    for ell in range(2 * L):
        expected = 2.0 if ell == 0 else 0.0
        assert np.dot(w, eval_legendre(ell, z)) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("L", range(1, 65))
def test_total_area(L):
    for scheme in Scheme:
        grid = build_grid(scheme, L)
        w = ring_quadrature_weights(grid)
        assert integrate(grid, w, np.ones(grid.shape)) == pytest.approx(4 * np.pi, abs=1e-9)


def test_mw_weights_integrate_squared_harmonic():
    grid = build_grid("MW", 8)
    th, ph = grid.nodes()
    y = sph_harm_y(3, 2, th, ph)
    assert integrate(grid, ring_quadrature_weights(grid), np.abs(y) ** 2) == pytest.approx(1, abs=1e-6)


def test_integrate_examples():
    grid = build_grid("DH", 8)
    w = ring_quadrature_weights(grid)
    th, ph = grid.nodes()
    assert integrate(grid, w, np.full(grid.shape, 1 / np.sqrt(4 * np.pi))) == pytest.approx(
        np.sqrt(4 * np.pi), abs=1e-9)
    assert abs(integrate(grid, w, sph_harm_y(2, 1, th, ph))) < 1e-9


def test_integrate_dimension_mismatch():
    grid = build_grid("DH", 4)
    with pytest.raises(ValueError):
        integrate(grid, ring_quadrature_weights(grid), np.ones(10))
    with pytest.raises(ValueError):
        integrate(grid, np.ones(3), np.ones(grid.shape))


def test_dh_orthonormality_of_products():
    L = 6
    grid = build_grid("DH", L)
    w = ring_quadrature_weights(grid)
    Y = dense_synthesis(grid)
    gram = (Y.conj() * np.repeat(w * grid.dphi, grid.nphi)[:, None]).T @ Y
    ell = np.floor(np.sqrt(np.arange(L * L))).astype(int)
    mask = (ell[:, None] + ell[None, :]) < L
    np.testing.assert_allclose(gram[mask], np.eye(L * L)[mask], atol=1e-8)


def test_mw_weights_exact_below_band_limit():
    grid = build_grid("MW", 12)
    w = ring_quadrature_weights(grid)
    z = np.cos(grid.thetas)
    for ell in range(grid.L):
        assert np.dot(w, eval_legendre(ell, z)) == pytest.approx(2.0 if ell == 0 else 0.0, abs=1e-9)
