import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from pdext import CATALOG_IDS, GridSpec, Interval, Kernel, PdFunction, catalog_measure
from pdext.bochner import verify_ext
from pdext.mercer import (NumericError, cosine_similarity, discretize, eigensystem,
                          ext_membership_shannon, lattice_sum, mercer, projection_bound,
                          rank_one_split, rkhs_onb, sha_shift, shannon_functions)


def exp_kernel_eigenvalues(L, count):
    """Eigenvalues 2/(1+w^2) of e^{-|x-y|} on an interval of length L.

    Even modes solve w tan(w L/2) = 1, odd modes w cot(w L/2) = -1.
    """
    T = L / 2
    roots = []
    for k in range(count):
        lo, hi = k * np.pi / T + 1e-12, (k + 0.5) * np.pi / T - 1e-12
        roots.append(brentq(lambda w: w * np.sin(w * T) - np.cos(w * T), lo, hi))
        lo, hi = (k + 0.5) * np.pi / T + 1e-12, (k + 1) * np.pi / T - 1e-12
        roots.append(brentq(lambda w: w * np.cos(w * T) + np.sin(w * T), lo, hi))
    lam = np.sort(2 / (1 + np.array(roots) ** 2))[::-1]
    return lam[:count]


def brownian_decomposition(n):
    grid = GridSpec.on(0.5, n)
    return eigensystem(discretize(Kernel.minimum(), grid), grid)


def test_brownian_kernel_spectrum():
    D = brownian_decomposition(2000)
    k = np.arange(1, 6)
    exact = 1 / ((2 * k - 1) * np.pi) ** 2
    assert np.max(np.abs(D.eigenvalues[:5] / exact - 1)) < 1e-3
    x = D.grid.nodes
    for j in range(5):
        sim = cosine_similarity(D.eigenvectors[:, j], np.sin((2 * j + 1) * np.pi * x), D.grid.weights)
        assert sim > 0.999
    assert abs(D.trace - 1 / 8) < 1e-3


def test_brownian_eigenvalues_second_order():
    k = np.arange(1, 4)
    exact = 1 / ((2 * k - 1) * np.pi) ** 2
    e1 = np.abs(brownian_decomposition(200).eigenvalues[:3] - exact)
    e2 = np.abs(brownian_decomposition(400).eigenvalues[:3] - exact)
    assert np.all(e1 / e2 > 3.5) and np.all(e1 / e2 < 4.5)


def test_exponential_kernel_transcendental_oracle():
    D = mercer(PdFunction.catalog("F3"), 1.0, 512)
    exact = exp_kernel_eigenvalues(1.0, 4)
    assert exact[0] == pytest.approx(0.7388, abs=1e-4)
    assert np.max(np.abs(D.eigenvalues[:4] - exact) / exact) < 1e-4


def test_orthonormal_eigenfunctions():
    D = mercer(PdFunction.catalog("F5"), 1.0, 256)
    G = D.l2_gram(6)
    assert np.max(np.abs(G - np.eye(6))) < 1e-10


def test_sign_convention_first_extremum_positive():
    D = brownian_decomposition(400)
    for j in range(4):
        v = D.eigenvectors[:, j]
        first = v[np.argmax(np.abs(v) > 0.5 * np.max(np.abs(v)))]
        assert first > 0


@pytest.mark.parametrize("ident", CATALOG_IDS)
def test_trace_identity(ident):
    F = PdFunction.catalog(ident)
    a = F.a
    D = mercer(F, a, 1024)
    assert abs(D.trace - a * np.real(F(0.0))) < 2e-3
    assert abs(D.trace - a * np.real(F(0.0))) <= 2 * a / 1024


def test_tent_trace():
    assert abs(mercer(PdFunction.catalog("F2"), 0.5, 1024).trace - 0.5) < 1e-3


def test_reconstruction_monotone():
    F = PdFunction.catalog("F3")
    D = mercer(F, 1.0, 200)
    x = D.grid.nodes
    target = F(x[:, None] - x[None, :])
    errs = [np.max(np.abs(target - D.reconstruct(N))) for N in (1, 2, 4, 8, 16, 64, 200)]
    assert all(b <= a + 1e-14 for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_discretize_rejects_coarse_grids():
    with pytest.raises(ValueError):
        discretize(PdFunction.catalog("F3"), 1.0, 8)


def test_eigensystem_rejects_non_hermitian():
    grid = GridSpec.on(1.0, 16)
    M = np.triu(np.ones((16, 16)))
    with pytest.raises(ValueError):
        eigensystem(M, grid)


def test_complex_kernel_eigenvalues_real_and_positive():
    D = mercer(PdFunction.catalog("F7", p=2.0), 1.0, 256)
    assert np.iscomplexobj(D.eigenvectors)
    assert D.eigenvalues[-1] > -1e-10
    assert abs(D.trace - 1.0) < 2 / 256


def test_rank_one_split_residual():
    r = rank_one_split(512)
    assert r.residual < 1e-12
    # L(x,y) = 1 - x - y on (0,1/2) restricted to span{1, x}: 1/8 +- sqrt(3)/12
    assert r.L_eigenvalue == pytest.approx(1 / 8 + math.sqrt(3) / 12, abs=1e-12)
    assert r.L_eigenvalues[1] == pytest.approx(1 / 8 - math.sqrt(3) / 12, abs=1e-12)
    # the Nystrom matrix of L has the same two nonzero eigenvalues to O(h^2)
    assert r.nystrom_eigenvalues[0] == pytest.approx(r.L_eigenvalue, abs=1e-5)


def test_rkhs_onb_exponential():
    D = mercer(PdFunction.catalog("F3"), 1.0, 400)
    rep = rkhs_onb(D, catalog_measure("F3"), modes=4)
    assert rep.max_error < 5e-3


def test_rkhs_onb_brownian():
    D = brownian_decomposition(400)
    rep = rkhs_onb(D, modes=4, kernel="min")
    assert rep.max_error < 5e-3


def test_projection_bound():
    D = mercer(PdFunction.catalog("F3"), 1.0, 128)
    assert all(projection_bound(D, N) for N in (1, 3, 10))


# Shannon sampling ---------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5, allow_nan=False), st.integers(-6, 6))
def test_sha_shift_definition(t, n):
    z = np.pi * (n - t)
    expected = 1.0 if abs(z) < 1e-12 else np.exp(1j * z) * np.sin(z) / z
    assert abs(sha_shift(t, n) - expected) < 1e-10


def test_lattice_sum_limit():
    # sum_n (-1)^n sinc(t - n) = cos(pi t), so the full sum is (1 + e^{-2 pi i t}) / 2
    t = np.linspace(-0.45, 0.45, 7)
    approx = lattice_sum(t, 4000)
    assert np.max(np.abs(approx - 0.5 * (1 + np.exp(-2j * np.pi * t)))) < 1e-3


def test_shannon_functions_exponential_closed_form():
    x = np.linspace(0.05, 0.95, 10)
    mu = catalog_measure("F3")
    for n in (0, 1, -2):
        w = 2 * np.pi * n
        re = (2 * np.cos(w * x) - np.exp(-x) - np.exp(x - 1)) / (1 + w * w)
        im = (2 * np.sin(w * x) + w * (np.exp(-x) - np.exp(x - 1))) / (1 + w * w)
        got = shannon_functions(mu, n, x)
        assert np.max(np.abs(got - (re + 1j * im))) < 1e-6


def test_shannon_mismatched_pair_fails():
    x = np.linspace(-0.5, 0.5, 11)
    F = PdFunction.from_callable(lambda t: 1 - np.abs(t), 1.0, real=True, label="tent-form")
    assert not ext_membership_shannon(F, catalog_measure("F3"), x=x, N_max=8).passed


@pytest.mark.parametrize("ident", CATALOG_IDS)
def test_shannon_agrees_with_verify_ext(ident):
    F, mu = PdFunction.catalog(ident), catalog_measure(ident)
    assert ext_membership_shannon(F, mu).passed == verify_ext(F, mu).passed
