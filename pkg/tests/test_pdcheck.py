import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdext import CATALOG_IDS, DataError, DomainError, Kernel, PdFunction
from pdext.pdcheck import (completely_monotone, domination, gram_matrix, is_pd_grid, kernel_pd,
                           polya_criterion)

from conftest import uniform_points


def inverse_one_minus_square():
    x = np.linspace(-0.99, 0.99, 199)
    return PdFunction.sampled(x, 1 / (1 - x ** 2))


def test_two_point_gram_closed_form():
    # [[1, 4/3], [4/3, 1]] has eigenvalues 1 -+ 4/3
    F = PdFunction.from_callable(lambda x: 1 / (1 - x ** 2), 1.0, real=True)
    rep = is_pd_grid(F, [0.0, 0.5])
    assert rep.min_eigenvalue == pytest.approx(-1 / 3, abs=1e-12)
    assert rep.verdict == "indefinite"


@pytest.mark.parametrize("ident", CATALOG_IDS)
def test_catalog_grams_psd(ident):
    F = PdFunction.catalog(ident)
    for n in (4, 16, 64):
        assert is_pd_grid(F, uniform_points(F.a, n)).psd


def test_domain_violation():
    F = PdFunction.catalog("F2")
    with pytest.raises(DomainError):
        gram_matrix(inverse_one_minus_square(), [0.0, 1.5])
    # catalog closed forms evaluate anywhere, sampled tables do not
    assert is_pd_grid(F, [0.0, 0.2]).psd


def test_cosine_rank_two():
    F = PdFunction.catalog("F6")
    rep = is_pd_grid(F, uniform_points(F.a, 12))
    assert rep.numerical_rank() == 2


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.0, 0.49), min_size=2, max_size=10, unique=True),
       st.lists(st.floats(0.0, 0.49), min_size=1, max_size=5))
def test_refutation_monotone_under_supersets(base, extra):
    F = inverse_one_minus_square()
    pts = np.array(base)
    if is_pd_grid(F, pts).verdict == "indefinite":
        assert is_pd_grid(F, np.concatenate([pts, extra])).verdict == "indefinite"
    # interlacing: adding points never raises the smallest eigenvalue
    lo = is_pd_grid(F, pts).min_eigenvalue
    assert is_pd_grid(F, np.concatenate([pts, extra])).min_eigenvalue <= lo + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.0, 0.49), min_size=2, max_size=8, unique=True), st.randoms())
def test_kernel_pd_agrees_with_grid(pts, rnd):
    F = PdFunction.catalog(rnd.choice(CATALOG_IDS))
    pts = np.array(pts) * F.a / 0.5
    K = Kernel.from_function(F)
    a, b = kernel_pd(K, pts), is_pd_grid(F, pts)
    assert a.verdict == b.verdict
    assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.permutations(list(range(8))))
def test_minimal_A_permutation_invariant(perm):
    pts = np.linspace(0.05, 0.95, 8)
    K = Kernel.from_function(PdFunction.catalog("F5"))
    F = PdFunction.catalog("F3")
    ref = domination(K, F, pts).minimal_A
    got = domination(K, F, pts[list(perm)]).minimal_A
    assert got == pytest.approx(ref, rel=1e-8)


def test_domination_explicit_A():
    pts = np.linspace(0.0, 0.9, 6)
    F = PdFunction.catalog("F3")
    K = Kernel.from_function(F)
    d = domination(K, F, pts, A=1.0)
    assert d.holds is True
    assert d.minimal_A == pytest.approx(1.0, rel=1e-9)
    assert domination(K, F, pts, A=0.5).holds is False


def test_domination_leak_detected():
    # a rank-two Gram cannot dominate a generic kernel
    pts = np.linspace(0.0, 0.7, 6)
    F = PdFunction.catalog("F6")
    K = Kernel.from_function(PdFunction.catalog("F3"))
    d = domination(K, F, pts)
    assert math.isinf(d.minimal_A) and d.holds is False


def test_polya_criterion_accepts_tent_and_exponential_like():
    x = np.linspace(0, 1, 101)
    assert polya_criterion(1 - x, x).passed
    assert polya_criterion((1 - x) ** 2, x).passed


def test_polya_criterion_failures():
    x = np.linspace(0, 1, 101)
    res = polya_criterion(np.cos(np.pi * x / 2), x)
    kinds = {f[0] for f in res.failures}
    assert not res.passed and "convexity" in kinds
    res = polya_criterion(np.exp(-x), x)
    assert {f[0] for f in res.failures} == {"decay"}
    with pytest.raises(DataError):
        polya_criterion([1, 0.5, 0])
    with pytest.raises(DataError):
        polya_criterion([1, 0.7, 0.4, 0.1, 0], x=[0, 0.1, 0.3, 0.4, 0.5])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5), st.integers(0, 1000))
def test_polya_pass_implies_psd(slopes, seed):
    # convex decreasing piecewise-linear profiles from sorted (decreasing) slopes
    s = np.sort(np.array(slopes))[::-1]
    s = s / s.sum()
    knots = np.concatenate([[0.0], np.cumsum(np.full(s.size, 1.0))])
    vals = np.concatenate([[1.0], 1.0 - np.cumsum(s)])
    vals[-1] = 0.0
    x = np.linspace(0, knots[-1], 401)
    f = np.interp(x, knots, vals)
    assert polya_criterion(f, x).passed
    G = PdFunction.from_callable(lambda t: np.interp(np.abs(t), knots, vals, right=0.0),
                                 np.inf, real=True)
    pts = np.random.default_rng(seed).uniform(0, 2 * knots[-1], 12)
    assert is_pd_grid(G, pts).psd


def test_completely_monotone():
    x = np.linspace(0, 3, 31)
    assert completely_monotone(np.exp(-x)).passed
    assert completely_monotone(1 / (1 + x)).passed
    res = completely_monotone(np.exp(-x ** 2))
    assert not res.passed and res.worst[2] < 0
    with pytest.raises(DataError):
        completely_monotone([1.0, 0.5], max_order=2)
