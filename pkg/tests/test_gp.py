import math

import numpy as np
import pytest

from pdext import PdFunction
from pdext.gp import (CovKernel, PathEnsemble, cholesky_with_jitter, cov_matrix,
                      ito_isometry_check, ou_from_bm, random_power_series_charfn, sample_paths, splitting_example)
from pdext.mercer import NumericError
from pdext.pdcheck import kernel_pd

M = 10_000
TOL = 5 / math.sqrt(M)
UNIT = np.linspace(0.05, 1.0, 20)


def test_bm_matrix():
    assert np.array_equal(cov_matrix(CovKernel("bm"), [0.2, 0.5]), [[0.2, 0.2], [0.2, 0.5]])


def test_bridge_variance_at_half():
    assert CovKernel("bridge")(0.5, 0.5) == 0.25


def test_fbm_half_is_minimum_for_same_signs():
    k = CovKernel("fbm", hurst=0.5)
    assert float(k(0.3, 0.7)) == pytest.approx(0.3, abs=1e-15)
    assert float(k(-0.3, -0.7)) == pytest.approx(0.3, abs=1e-15)


def test_parameter_errors():
    with pytest.raises(ValueError):
        CovKernel("fbm", hurst=1.2)
    with pytest.raises(ValueError):
        CovKernel("ou", alpha=-1.0)
    with pytest.raises(ValueError):
        cov_matrix(CovKernel("bm"), [0.5, 0.2])


KERNELS = [CovKernel("bm"), CovKernel("bridge"), CovKernel("ou", alpha=1.0),
           CovKernel("fbm", hurst=0.3), CovKernel("fbm", hurst=0.8),
           CovKernel("from_pd", F=PdFunction.catalog("F3"))]


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.label)
def test_cov_matrix_psd_random_grids(k):
    for seed in range(100):
        rng = np.random.default_rng(seed)
        t = np.sort(rng.uniform(0.01, 1.0, 12))
        if np.any(np.diff(t) <= 0):
            continue
        assert kernel_pd(k.kernel(), t).psd


def test_jitter_ladder_and_failure():
    t = np.linspace(0.0, 1.0, 11)
    L, eps = cholesky_with_jitter(cov_matrix(CovKernel("bridge"), t))
    assert eps > 0 and np.all(np.isfinite(L))
    with pytest.raises(NumericError):
        cholesky_with_jitter(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_reproducible_and_seed_dependent():
    k = CovKernel("ou", alpha=1.0)
    a = sample_paths(k, UNIT, 50, seed=3)
    b = sample_paths(k, UNIT, 50, seed=3)
    assert a.paths.tobytes() == b.paths.tobytes()
    assert not np.array_equal(a.paths, sample_paths(k, UNIT, 50, seed=4).paths)
    # path i depends only on (seed, i), not on how many paths are drawn
    assert np.array_equal(sample_paths(k, UNIT, 10, seed=3).paths, a.paths[:10])


@pytest.mark.parametrize("k", [CovKernel("bm"), CovKernel("ou", alpha=1.0),
                               CovKernel("fbm", hurst=0.7)], ids=lambda k: k.label)
def test_empirical_covariance(k):
    ens = sample_paths(k, UNIT, M, seed=11)
    assert np.max(np.abs(ens.empirical_cov() - cov_matrix(k, UNIT))) < TOL


def test_bridge_pinning_and_covariance():
    h = 1 / 64
    t = np.linspace(h, 1 - h, 20)
    k = CovKernel("bridge")
    ens = sample_paths(k, t, M, seed=5)
    assert np.max(np.abs(ens.empirical_cov() - cov_matrix(k, t))) < TOL
    assert np.max(np.abs(ens.paths.mean(axis=0) - t)) < TOL
    std = ens.paths.std(axis=0)
    assert std[0] < std[10] and std[-1] < std[10]
    tight = np.array([1e-4, 0.5, 1 - 1e-4])
    s = sample_paths(k, tight, M, seed=5).paths.std(axis=0)
    assert s[0] < 2 / math.sqrt(M) and s[-1] < 2 / math.sqrt(M)


def test_ou_lag_one_correlation():
    ens = sample_paths(CovKernel("ou", alpha=1.0), np.array([0.0, 1.0]), M, seed=2)
    C = ens.empirical_cov()
    assert C[0, 1] / math.sqrt(C[0, 0] * C[1, 1]) == pytest.approx(math.exp(-0.5), abs=0.03)


def test_ou_from_bm_unit():
    x = np.linspace(0.0, 1.0, 20)
    bm = sample_paths(CovKernel("bm"), np.exp(2 * x), M, seed=9)
    ou = ou_from_bm(bm)
    assert np.allclose(ou.times, x)
    exact = np.exp(-np.abs(x[:, None] - x[None, :]))
    assert np.max(np.abs(ou.empirical_cov() - exact)) < TOL


def test_ou_from_bm_general_alpha():
    x = np.array([0.0, 0.5, 1.0])
    bm = sample_paths(CovKernel("bm"), np.exp(2 * x), M, seed=1)
    ou = ou_from_bm(bm, alpha=2.0, unit_variance=False)
    exact = 0.5 * np.exp(-np.abs(x[:, None] - x[None, :]))
    assert np.max(np.abs(ou.empirical_cov() - exact)) < TOL
    with pytest.raises(ValueError):
        ou_from_bm(sample_paths(CovKernel("bridge"), [0.2, 0.4], 5, 0))


def test_ito_isometry():
    p = np.linspace(0, 1, 65)
    ens = sample_paths(CovKernel("bm"), p[1:], M, seed=0)
    # prepend the deterministic start B_0 = 0
    full = PathEnsemble(p, np.hstack([np.zeros((M, 1)), ens.paths]), 0, "bm")
    one = ito_isometry_check(lambda t: np.ones_like(t), p, full)
    assert one.rhs == pytest.approx(1.0) and abs(one.z_score) < 3
    lin = ito_isometry_check(lambda t: t, p, full)
    assert lin.rhs == pytest.approx(np.sum(p[1:] ** 2) / 64) and abs(lin.z_score) < 3
    zero = ito_isometry_check(lambda t: np.zeros_like(t), p, full)
    assert zero.lhs == 0 and zero.rhs == 0


def test_ito_z_scores_over_seeds():
    p = np.linspace(0.0, 1.0, 17)
    k = CovKernel("bm")
    for seed in range(50):
        ens = sample_paths(k, p[1:], 2000, seed)
        full = PathEnsemble(p, np.hstack([np.zeros((2000, 1)), ens.paths]), seed, "bm")
        assert abs(ito_isometry_check(np.sin, p, full).z_score) < 4


def test_power_series_charfn():
    at0 = random_power_series_charfn(1 / 3, 100, [0.0])
    assert at0.empirical[0] == 1 and at0.model[0] == 1
    chk = random_power_series_charfn(1 / 3, 100_000, np.linspace(-10, 10, 81), seed=4)
    assert chk.sup_error < 0.02


def test_splitting_example_normalized():
    assert complex(splitting_example(np.array(0.0))) == pytest.approx(1.0, abs=1e-15)
    assert np.all(np.abs(splitting_example(np.linspace(-20, 20, 101))) <= 1 + 1e-12)
