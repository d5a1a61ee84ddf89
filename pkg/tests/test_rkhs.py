import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import dblquad, quad

from pdext import DomainError, Interval, PdFunction, catalog_measure
from pdext.bochner import QuadratureSpec
from pdext.rkhs import (TestFunction, adjoint_apply, boundary_reproducing, deficiency_integral,
                        greens_residual, hf_inner, hf_norm2, isometry_check, membership_test,
                        rayleigh_quotient)

F2, F3 = PdFunction.catalog("F2"), PdFunction.catalog("F3")


def test_hf_inner_against_dblquad():
    phi = TestFunction.gaussian(0.4, 0.05)
    psi = TestFunction.gaussian(0.6, 0.07)
    got = hf_inner(F3, phi, psi)
    exact = dblquad(lambda y, x: float(np.real(phi(x) * psi(y))) * math.exp(-abs(x - y)),
                    0.0, 1.0, 0.0, 1.0, epsabs=1e-12)[0]
    assert got == pytest.approx(exact, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 0.8), st.floats(0.2, 0.8), st.floats(0.03, 0.15), st.floats(0.03, 0.15),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_hf_inner_hermitian(c1, c2, r1, r2, z):
    phi = TestFunction.bump(c1, min(r1, c1 - 0.01, 0.99 - c1))
    psi = TestFunction.bump(c2, min(r2, c2 - 0.01, 0.99 - c2)).scaled(z)
    F7 = PdFunction.catalog("F7", p=1.5)
    # the symmetry is structural, so a coarse rule suffices
    assert abs(hf_inner(F7, phi, psi, 16) - np.conj(hf_inner(F7, psi, phi, 16))) < 1e-12
    assert np.real(hf_inner(F7, phi, phi, 16)) >= -1e-10


@pytest.mark.parametrize("F", [F2, F3], ids=["F2", "F3"])
def test_reproducing_limit(F):
    a = F.a
    x0 = 0.45 * a
    psi = TestFunction.bump(0.6 * a, 0.25 * a)
    target = quad(lambda y: float(np.real(psi(y))) * float(F(x0 - y)), psi.support.lo,
                  psi.support.hi, points=[x0], epsabs=1e-13)[0]
    errs = []
    for eps in (0.04 * a, 0.02 * a, 0.01 * a):
        phi = TestFunction.bump(x0, eps, normalized=True)
        errs.append(abs(hf_inner(F, phi, psi) - target))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


@pytest.mark.parametrize("ident", ["F1", "F2", "F3", "F5", "F6"])
def test_isometry_refines(ident):
    F, mu = PdFunction.catalog(ident), catalog_measure(ident)
    phi = TestFunction.bump(0.5 * F.a, 0.3 * F.a)
    coarse = isometry_check(F, mu, phi, QuadratureSpec(R=50.0, nodes_per_unit=8))
    fine = isometry_check(F, mu, phi, QuadratureSpec(R=400.0, nodes_per_unit=16))
    assert fine.abs_error <= coarse.abs_error + 1e-12
    assert fine.abs_error < 1e-6 * max(1.0, fine.lhs)


def test_adjoint_apply_cauchy():
    # integral exp(i lam x) / (1 + i lam) dmu3 has the closed form computed below by quad
    f = lambda lam: 1 / (1 + 1j * lam)
    v = adjoint_apply(catalog_measure("F3"), f, Interval(0, 1), x=np.array([0.0, 0.5]))
    for xi, val in zip((0.0, 0.5), v.values):
        re = quad(lambda l: math.cos(l * xi) / (1 + l * l) ** 2 / math.pi
                  + l * math.sin(l * xi) / (1 + l * l) ** 2 / math.pi, -np.inf, np.inf,
                 limit=400)[0]
        assert val.real == pytest.approx(re, abs=1e-5)


def test_adjoint_apply_rejects_non_l2():
    with pytest.raises(DomainError):
        adjoint_apply(catalog_measure("F3"), lambda lam: np.abs(lam) ** 1.0 + 0j, Interval(0, 1),
                      x=np.array([0.1]))


def test_rayleigh_quotient_of_a_kernel_section():
    # xi = F(. - x0) has norm^2 F(0) = 1 exactly
    pts = np.linspace(0, 1, 21)
    A, leak = rayleigh_quotient(F3, F3(pts - pts[7]), pts)
    assert A == pytest.approx(1.0, abs=1e-9) and leak < 1e-9


def test_membership_exponential_under_f3():
    res = membership_test(F3, lambda x: np.exp(-x), Interval(0, 1))
    assert res.verdict == "member-evidence"
    assert res.A == pytest.approx(1.0, abs=5e-2)


def test_membership_monotone_under_refinement():
    cases = [(F3, lambda x: np.exp(-x)), (F3, lambda x: np.ones_like(x)),
             (F2, lambda x: 1 - x)]
    for F, xi in cases:
        omega = Interval(0, F.a)
        short = membership_test(F, xi, omega, schedule=(16, 32, 64))
        full = membership_test(F, xi, omega)
        if short.verdict == "member-evidence":
            assert full.verdict != "diverging"


def test_membership_detects_leak():
    # a step is not in the space of the Gaussian kernel: part of it stays
    # outside the numerical range of every Gram matrix
    F5 = PdFunction.catalog("F5")
    res = membership_test(F5, lambda x: (x > 0.5).astype(float), Interval(0, 1),
                          schedule=(8, 16, 32))
    assert res.verdict == "diverging" and res.leak[-1] > 0.1
    # cos spans a two-dimensional space that e^{-x} is not in
    F6 = PdFunction.catalog("F6")
    assert membership_test(F6, lambda x: np.exp(-x), Interval(0, F6.a)).verdict == "diverging"
    assert membership_test(F6, lambda x: np.cos(x - 0.2), Interval(0, F6.a)).verdict == "member-evidence"


def test_membership_detects_growth():
    # for e^{-|x|} the quotient of a step is a discrete H^1 seminorm, so it scales like 1/h
    step = lambda x: (x > 0.5).astype(float)
    res = membership_test(F3, step, Interval(0, 1), schedule=(32, 64, 128))
    ratios = np.array(res.history[1:]) / np.array(res.history[:-1])
    assert np.all((ratios > 1.9) & (ratios < 2.05))
    tight = membership_test(F3, step, Interval(0, 1), schedule=(32, 64, 128), growth=1.9)
    assert tight.verdict == "diverging"


def test_deficiency_integral_closed_forms():
    d3 = deficiency_integral(1.0, catalog_measure("F3"))
    assert d3.value == pytest.approx((math.e ** 2 - 3) / 2, abs=1e-6)
    d2 = deficiency_integral(1.0, catalog_measure("F2"))
    assert d2.value == pytest.approx(2.0, abs=1e-5)


@pytest.mark.parametrize("ident", ["F2", "F3"])
def test_deficiency_agrees_with_second_moment(ident):
    d = deficiency_integral(catalog_measure(ident) and PdFunction.catalog(ident).a,
                            catalog_measure(ident))
    assert d.finite and d.second_moment_indices == (1, 1) and d.agrees


@pytest.mark.parametrize("which", ["F2", "F3"])
def test_greens_residual(which):
    a = 0.5 if which == "F2" else 1.0
    phi = TestFunction.bump(a / 2, 0.3 * a)
    assert greens_residual(which, phi, 1024) < 1e-4


def test_greens_residual_needs_interior_support():
    with pytest.raises(ValueError):
        greens_residual("F3", TestFunction.bump(0.1, 0.2), 256)


@pytest.mark.parametrize("which,x", [("F2", 0.2), ("F3", 0.3), ("F3", 0.8)])
@pytest.mark.parametrize("coeffs", [[1.0], [0.5, -1.0], [0.0, 0.3, 2.0, -1.0]])
def test_boundary_polynomials(which, x, coeffs):
    p = np.polynomial.Polynomial(coeffs)
    assert boundary_reproducing(which, x, p, p.deriv()).error < 1e-8


def test_boundary_from_samples():
    t = np.linspace(0, 1, 401)
    r = boundary_reproducing("F3", 0.4, (t, np.cos(t)))
    assert r.error < 1e-6
