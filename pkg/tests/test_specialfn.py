"""Spherical-function oracle tests: recurrence vs explicit sum."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oddsphere.specialfn import (
    CornerGuardError,
    coeffs_to_csv,
    get_coeffs,
    phi,
    phi_explicit,
    phi_matrix,
    phi_recurrence,
    phi_series,
)


def s3_closed_form(n, theta):
    theta = np.asarray(theta, dtype=float)
    return np.sin((n + 1) * theta) / ((n + 1) * np.sin(theta))


def test_recurrence_base_cases():
    assert phi_recurrence(3, 0, 0.7) == 1.0
    for lam in (1, 2, 4):
        assert_allclose(phi_recurrence(lam, 1, 0.9), math.cos(0.9), rtol=1e-15)


def test_recurrence_normalization_exact_at_zero():
    for lam in range(1, 7):
        for n in (0, 1, 2, 10, 100, 500):
            assert phi_recurrence(lam, n, 0.0) == 1.0


def test_recurrence_s3_values():
    assert_allclose(phi_recurrence(1, 2, math.pi / 2), -1.0 / 3.0, atol=1e-15)
    theta = np.linspace(0.05, math.pi - 0.05, 301)
    for n in (1, 5, 40, 100):
        assert_allclose(phi_recurrence(1, n, theta), s3_closed_form(n, theta), atol=1e-12)


def test_boundedness_on_grid():
    theta = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
    x = np.cos(theta)
    for lam in range(1, 7):
        prev = np.ones_like(x)
        cur = x.copy()
        worst = 1.0
        for k in range(2, 501):
            prev, cur = cur, (2 * (k + lam - 1) * x * cur - (k - 1) * prev) / (
                k + 2 * lam - 1
            )
            worst = max(worst, float(np.max(np.abs(cur))))
        assert worst <= 1.0 + 1e-12


def test_weyl_symmetry():
    theta = np.linspace(0.1, math.pi - 0.1, 57)
    for lam in (1, 2, 3):
        for n in (3, 17, 64):
            assert_allclose(
                phi(lam, n, 2 * math.pi - theta), phi(lam, n, theta), atol=1e-12
            )


def test_corner_translation_identity():
    theta = np.linspace(0.0, math.pi, 41)
    for lam in (1, 2, 3, 4):
        for n in (1, 2, 9, 50, 201):
            lhs = phi_recurrence(lam, n, theta + math.pi)
            rhs = (-1.0) ** n * phi_recurrence(lam, n, theta)
            assert_allclose(lhs, rhs, atol=1e-10)


def test_explicit_matches_s3_closed_form():
    val = phi_explicit(1, 5, 1.0)
    assert_allclose(val, math.sin(6.0) / (6.0 * math.sin(1.0)), rtol=1e-13)


def test_explicit_matches_recurrence():
    assert_allclose(phi_explicit(2, 7, 2.0), phi_recurrence(2, 7, 2.0), rtol=1e-10)
    theta = np.linspace(0.02, math.pi - 0.02, 97)
    for lam in (1, 2, 3, 4, 5):
        for n in (0, 1, 2, 3, 11, 47, 150):
            a = phi_explicit(lam, n, theta)
            b = phi_recurrence(lam, n, theta)
            assert_allclose(a, b, atol=1e-10)


def test_explicit_guard():
    with pytest.raises(CornerGuardError):
        phi_explicit(1, 3, 1e-6)
    with pytest.raises(CornerGuardError):
        phi_explicit(2, 3, math.pi - 1e-5)
    # custom guard widens the forbidden band
    with pytest.raises(CornerGuardError):
        phi_explicit(1, 3, 0.05, guard=0.1)


def test_hybrid_dispatch_and_overlap():
    assert phi(3, 0, 0.02) == pytest.approx(1.0, abs=1e-11)
    # recurrence branch near the corner stays finite
    val = phi(2, 50, math.pi - 0.0005)
    assert np.isfinite(val) and abs(val) <= 1.0 + 1e-12
    # overlap band: both branches agree
    assert_allclose(phi_explicit(1, 4, math.pi / 3), phi_recurrence(1, 4, math.pi / 3), atol=1e-10)
    # dispatch output is continuous across the guard boundary
    guard = 1e-3
    eps = 1e-9
    below = phi(2, 30, guard - eps)
    above = phi(2, 30, guard + eps)
    assert abs(below - above) < 1e-6


def test_orthogonality_under_torus_density():
    # int_0^pi phi_m phi_n sin^{2 lam} = 0 for m != n; full-circle trapezoid
    # is exact for these trigonometric polynomials
    M = 4096
    theta = 2.0 * math.pi * np.arange(M) / M
    for lam in (1, 2, 3):
        dens = np.abs(np.sin(theta)) ** (2 * lam)
        rows = phi_matrix(lam, [3, 4, 10, 25], theta)
        gram = (rows * dens) @ rows.T * (2 * math.pi / M)
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) < 1e-8
        assert np.all(np.diag(gram) > 0)


def test_phi_series_matches_direct_sum():
    rng = np.random.default_rng(3)
    w = rng.standard_normal(40) + 1j * rng.standard_normal(40)
    theta = np.array([0.0, 0.4, math.pi / 2, math.pi, 5.0])
    got = phi_series(2, w, theta)
    want = sum(w[n] * phi_recurrence(2, n, theta) for n in range(40))
    assert_allclose(got, want, atol=1e-11)


def test_phi_matrix_hybrid_agrees_with_recurrence():
    theta = np.concatenate([[0.0, 1e-5, math.pi], np.linspace(0.01, 6.2, 50)])
    rows = phi_matrix(3, [0, 2, 5, 33], theta)
    for i, n in enumerate([0, 2, 5, 33]):
        assert_allclose(rows[i], phi_recurrence(3, n, theta), atol=1e-10)


def test_coeff_table_invariants():
    for lam in (1, 2, 3, 4):
        coeffs = get_coeffs(lam, 50)
        assert coeffs.alpha[0] == 1.0
        assert np.all(np.isfinite(coeffs.cnv))
        # lam = 1 collapses to the single Dirichlet-type term 1/(n+1)
        if lam == 1:
            assert_allclose(coeffs.cnv[:51, 0], 1.0 / (np.arange(51) + 1.0), rtol=1e-15)


def test_coeffs_csv_dump(tmp_path):
    path = tmp_path / "coeffs.csv"
    coeffs_to_csv(2, 5, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "lam,n,nu,C_num,C_den"
    assert len(lines) == 1 + 6 * 2  # header + (nmax+1) * lam rows
    # first data row: lam=2, n=0, nu=0, C = 1/1... C_{0,0} = 1/binom(3,0) = 1
    assert lines[1] == "2,0,0,1,1"


def test_input_validation():
    with pytest.raises(ValueError):
        phi_recurrence(0, 3, 0.5)
    with pytest.raises(ValueError):
        phi_recurrence(1, -1, 0.5)
    with pytest.raises(ValueError):
        phi_explicit(1, -2, 0.5)
