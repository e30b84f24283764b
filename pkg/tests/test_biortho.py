"""Gram matrices, dual families, frame bounds."""

import numpy as np
import pytest

from dispctl import (IllConditionedGramError, biorthogonality_residual,
                     biorthogonalize, cluster_spectrum, frame_bounds,
                     gram_matrix, kdv, smith)
from dispctl.quadrature import oscillation_nodes


def quad_integral(f_vals, w):
    return np.sum(f_vals * w)


def test_gram_diagonal_and_periodic_zeros():
    lam = np.array([0.0, 2.0 * np.pi, -4.0 * np.pi])
    g = gram_matrix(lam, 1.0)
    np.testing.assert_allclose(np.diag(g).real, 1.0, atol=1e-15)
    off = g - np.diag(np.diag(g))
    assert np.max(np.abs(off)) <= 1e-13


def test_gram_against_quadrature():
    rng = np.random.default_rng(8)
    lam = np.sort(rng.uniform(-20.0, 20.0, size=5))
    T = 0.7
    g = gram_matrix(lam, T)
    t, w = oscillation_nodes(np.max(np.abs(lam)), T)
    for a in range(5):
        for b in range(5):
            direct = quad_integral(np.exp(1j * (lam[b] - lam[a]) * t), w)
            assert abs(direct - g[a, b]) <= 1e-10


def test_gram_rejects_duplicates_and_bad_horizon():
    with pytest.raises(ValueError):
        gram_matrix([1.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        gram_matrix([0.0, 1.0], 0.0)


def test_single_frequency_inverse():
    fam = biorthogonalize(np.array([3.0]), horizon=2.0)
    np.testing.assert_allclose(fam.coeffs, [[0.5]], atol=1e-15)
    assert fam.frame_lower == pytest.approx(2.0)
    assert fam.frame_upper == pytest.approx(2.0)


def test_orthogonal_exponentials_identity():
    fam = biorthogonalize(np.array([0.0, 2.0 * np.pi]), horizon=1.0)
    np.testing.assert_allclose(fam.coeffs, np.eye(2), atol=1e-12)
    a, b = frame_bounds(fam.gram)
    assert a == pytest.approx(1.0, abs=1e-13)
    assert b == pytest.approx(1.0, abs=1e-13)


def test_kdv_residual_by_quadrature():
    an = cluster_spectrum(kdv(), 8)
    fam = biorthogonalize(an.rep_lambdas, horizon=1.0)
    assert biorthogonality_residual(fam) <= 1e-8


def test_frame_sandwich_randomized():
    an = cluster_spectrum(smith(), 16)
    fam = biorthogonalize(an.rep_lambdas, horizon=1.0)
    assert fam.frame_lower > 0.0
    lam = fam.rep_lambdas
    t, w = oscillation_nodes(np.max(np.abs(lam)), 1.0)
    phases = np.exp(-1j * np.outer(t, lam))
    rng = np.random.default_rng(17)
    coeffs = rng.standard_normal((lam.size, 1000)) + 1j * rng.standard_normal(
        (lam.size, 1000))
    f_vals = phases @ coeffs
    energies = np.sum(np.abs(f_vals) ** 2 * w[:, None], axis=0)
    masses = np.sum(np.abs(coeffs) ** 2, axis=0)
    slack = 1e-8
    assert np.all(energies >= fam.frame_lower * masses * (1.0 - slack))
    assert np.all(energies <= fam.frame_upper * masses * (1.0 + slack))


def test_frame_bounds_tighten_with_horizon():
    an = cluster_spectrum(kdv(), 8)
    lower_gap = []
    upper_gap = []
    for T in (1.0, 10.0, 100.0):
        fam = biorthogonalize(an.rep_lambdas, horizon=T)
        lower_gap.append(abs(1.0 - fam.frame_lower / T))
        upper_gap.append(abs(fam.frame_upper / T - 1.0))
    assert lower_gap[0] >= lower_gap[1] >= lower_gap[2]
    assert upper_gap[0] >= upper_gap[1] >= upper_gap[2]


def test_ill_conditioned_refusal():
    lam = np.array([0.0, 1e-9, 10.0])
    with pytest.raises(IllConditionedGramError) as info:
        biorthogonalize(lam, horizon=1.0)
    assert "horizon" in str(info.value)


def test_solve_residual_recorded():
    an = cluster_spectrum(smith(), 12)
    fam = biorthogonalize(an.rep_lambdas, horizon=1.0)
    assert fam.solve_residual <= 1e-10
    assert fam.condition < 1e3
