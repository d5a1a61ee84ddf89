"""Inner products in the RKHS of F and the identities tied to it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import interpolate, linalg

from .bochner import (QuadratureSpec, growth_probe, integrate, second_moment_index_diagnostic)
from .model import DataError, DomainError, Interval, SpectralMeasure


def _gl_panels(lo: float, hi: float, panels: int, order: int = 16):
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * t).ravel(), (half[:, None] * w).ravel()


class TestFunction:
    """A test function with compact (or numerically compact) support inside Omega."""

    __test__ = False  # keep pytest from collecting this class

    def __init__(self, func: Callable, support: Interval, label: str = "phi"):
        self._func = func
        self.support = support
        self.label = label

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        inside = (x > self.support.lo) & (x < self.support.hi)
        if np.any(inside):
            out[inside] = self._func(x[inside])
        return out

    def nodes(self, panels: int = 64, order: int = 16):
        return _gl_panels(self.support.lo, self.support.hi, panels, order)

    def transform(self, lam, panels: int = 64) -> np.ndarray:
        """Integral of phi(y) exp(-i lam y) dy."""
        lam = np.asarray(lam, dtype=float)
        y, w = self.nodes(panels)
        fw = self(y) * w
        flat = lam.ravel()
        out = np.empty(flat.size, dtype=complex)
        step = max(1, (1 << 22) // y.size)
        for i in range(0, flat.size, step):
            out[i:i + step] = np.exp(-1j * np.outer(flat[i:i + step], y)) @ fw
        return out.reshape(lam.shape)

    def scaled(self, c: complex) -> "TestFunction":
        return TestFunction(lambda x: c * self._func(x), self.support, self.label)

    @classmethod
    def bump(cls, center: float, radius: float, normalized: bool = False) -> "TestFunction":
        """exp(-1 / (1 - r^2)) with r = (x - center)/radius; smooth with compact support."""
        def f(x):
            r2 = ((x - center) / radius) ** 2
            with np.errstate(divide="ignore", over="ignore"):
                return np.where(r2 < 1, np.exp(-1.0 / (1.0 - r2)), 0.0)

        phi = cls(f, Interval(center - radius, center + radius), "bump")
        if normalized:
            y, w = phi.nodes()
            phi = phi.scaled(1.0 / float(np.real(np.sum(phi(y) * w))))
        return phi

    @classmethod
    def gaussian(cls, center: float, width: float, cut: float = 9.0) -> "TestFunction":
        """exp(-(x - center)^2 / (2 width^2)), cut at ``cut`` widths (relative size e^{-40})."""
        return cls(lambda x: np.exp(-0.5 * ((x - center) / width) ** 2),
                   Interval(center - cut * width, center + cut * width), "gaussian")

    @classmethod
    def zero(cls, support: Interval) -> "TestFunction":
        return cls(lambda x: np.zeros_like(x), support, "zero")


def _convolve_kernel(F, psi: TestFunction, x, panels: int = 64, order: int = 16):
    """(F_psi)(x) = integral psi(y) F(x - y) dy, split at y = x to respect kinks."""
    x = np.asarray(x, dtype=float)
    lo, hi = psi.support.lo, psi.support.hi
    # reference composite rule on [0, 1], mapped onto [lo, c] and [c, hi]
    s, ws = _gl_panels(0.0, 1.0, panels, order)
    flat = x.ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, (1 << 20) // s.size)
    for i in range(0, flat.size, step):
        xi = flat[i:i + step, None]
        c = np.clip(xi, lo, hi)
        total = 0.0
        for a, b in ((lo, c), (c, hi)):
            y = a + (b - a) * s
            total = total + np.sum(psi(y) * np.asarray(F(xi - y)) * ((b - a) * ws), axis=1)
        out[i:i + step] = total
    return out.reshape(x.shape)


def hf_inner(F, phi: TestFunction, psi: TestFunction, panels: int = 64) -> complex:
    """<F_phi, F_psi> = double integral of conj(phi(x)) psi(y) F(x - y).

    The inner integral is split at the diagonal; averaging the two orders of
    integration makes the result exactly Hermitian.
    """
    def one_way(a, b):
        x, wx = a.nodes(panels)
        return complex(np.sum(np.conj(a(x)) * wx * _convolve_kernel(F, b, x, panels)))

    forward = one_way(phi, psi)
    backward = one_way(psi, phi)
    return 0.5 * (forward + np.conj(backward))


def hf_norm2(F, phi: TestFunction, panels: int = 64) -> float:
    return float(np.real(hf_inner(F, phi, phi, panels)))


@dataclass(frozen=True)
class IsometryCheck:
    lhs: float
    rhs: float
    abs_error: float
    tail_bound: float


def isometry_check(F, mu: SpectralMeasure, phi: TestFunction,
                   q: QuadratureSpec | None = None) -> IsometryCheck:
    """Compare the RKHS norm of F_phi with the L2(mu) norm of the transform of phi."""
    q = q or QuadratureSpec(R=400.0, nodes_per_unit=16)
    lhs = hf_norm2(F, phi)
    y, w = phi.nodes()
    bound = float(np.sum(np.abs(phi(y)) * w)) ** 2
    rhs, tail = integrate(mu, lambda lam: np.abs(phi.transform(lam)) ** 2, q, g_bound=bound)
    return IsometryCheck(lhs, float(rhs.real), abs(lhs - float(rhs.real)), tail)


@dataclass(frozen=True, eq=False)
class HFVector:
    """Element of the RKHS held either as F_phi or as samples on a grid over the closure of Omega."""

    kind: str
    values: np.ndarray | None = None
    grid: np.ndarray | None = None
    phi: TestFunction | None = None
    F: Callable | None = None

    def __call__(self, x):
        if self.kind == "convolved":
            return _convolve_kernel(self.F, self.phi, x)
        return np.interp(x, self.grid, self.values.real) + 1j * np.interp(x, self.grid, self.values.imag)


def adjoint_apply(mu: SpectralMeasure, f: Callable, omega: Interval, x=None,
                  q: QuadratureSpec | None = None) -> HFVector:
    """Samples of x -> integral exp(i lam x) f(lam) dmu(lam) on the closure of Omega."""
    q = q or QuadratureSpec(R=2000.0, nodes_per_unit=16)
    probe = growth_probe(_weighted(mu, f), 0, QuadratureSpec(R=256.0, nodes_per_unit=8))
    if probe.verdict == "divergent":
        raise DomainError("f is not square integrable against mu")
    if x is None:
        x = np.linspace(omega.lo, omega.hi, 101)
    x = np.asarray(x, dtype=float)
    vals = np.empty(x.size, dtype=complex)
    for i, xi in enumerate(x):
        vals[i] = integrate(mu, lambda lam: np.exp(1j * lam * xi) * f(lam), q)[0]
    return HFVector("sampled", vals, x)


def _weighted(mu: SpectralMeasure, f: Callable) -> SpectralMeasure:
    # |f|^2 dmu as a measure, for the square-integrability probe
    from .model import Density

    atoms = tuple((l, w * abs(complex(np.asarray(f(np.array([l])))[0])) ** 2) for l, w in mu.atoms)
    atoms = tuple(a for a in atoms if a[1] > 0)
    dens = tuple((w, Density(d.kind, (lambda lam, d=d: d.pdf(lam) * np.abs(f(lam)) ** 2),
                             support=d.support, breakpoints=d.breakpoints,
                             singular_exponent=d.singular_exponent, mass=np.nan))
                 for w, d in mu.densities)
    return SpectralMeasure(atoms, dens)


@dataclass(frozen=True)
class Membership:
    verdict: str  # "member-evidence", "diverging" or "inconclusive"
    A: float
    history: tuple
    leak: tuple


def rayleigh_quotient(F, xi_values, points, cutoff: float = 1e-12):
    """xi^H G^+ xi with G = F(x_i - x_j) truncated at ``cutoff`` * lambda_max."""
    p = np.asarray(points, dtype=float)
    G = np.asarray(F(p[:, None] - p[None, :]))
    G = 0.5 * (G + G.conj().T)
    lam, V = linalg.eigh(G)
    top = float(np.max(np.abs(lam)))
    if top == 0:
        raise DataError("Gram matrix vanishes")
    keep = lam > cutoff * top
    xi = np.asarray(xi_values, dtype=complex)
    c = V[:, keep].conj().T @ xi
    A = float(np.sum(np.abs(c) ** 2 / lam[keep]))
    # part of xi outside the retained eigenspaces
    leak = float(np.linalg.norm(xi - V[:, keep] @ c)) / max(float(np.linalg.norm(xi)), 1e-300)
    return A, leak


def membership_test(F, xi: Callable, omega: Interval, schedule=(16, 32, 64, 128, 256),
                    cutoff: float = 1e-12, stable: float = 1e-2,
                    growth: float = 2.0, leak_tol: float = 1e-3) -> Membership:
    """Sup of |<psi, xi>|^2 / ||F_psi||^2 over point-mass combinations on refined grids of Omega-bar.

    Diverging when the quotient more than doubles over the last refinement, or
    when xi keeps a visible component (``leak_tol``) outside the retained
    range of the Gram matrix, which makes the supremum unbounded.
    """
    history, leaks = [], []
    for n in schedule:
        pts = np.linspace(omega.lo, omega.hi, n + 1)
        A, leak = rayleigh_quotient(F, xi(pts), pts, cutoff)
        history.append(A)
        leaks.append(leak)
    last, prev = history[-1], history[-2]
    if (prev > 0 and last / prev > growth) or leaks[-1] > leak_tol:
        verdict = "diverging"
    elif abs(last - prev) <= stable * max(abs(last), 1e-300):
        verdict = "member-evidence"
    else:
        verdict = "inconclusive"
    return Membership(verdict, last, tuple(history), tuple(leaks))


@dataclass(frozen=True)
class Deficiency:
    value: float
    finite: bool
    tail_bound: float
    second_moment_indices: tuple | None

    @property
    def agrees(self) -> bool:
        """Finite integral and (1,1) indices point the same way."""
        return self.finite == (self.second_moment_indices == (1, 1))


def deficiency_integral(a: float, mu: SpectralMeasure,
                        q: QuadratureSpec | None = None) -> Deficiency:
    """Integral of (e^{2a} + 1 - 2 e^a cos(lam a)) / (1 + lam^2) against mu.

    The integrand is bounded by (e^a + 1)^2, so the value is finite for every
    finite mu; the second-moment diagnostic is reported alongside.
    """
    q = q or QuadratureSpec(R=4000.0, nodes_per_unit=16)
    ea = math.exp(a)
    g = lambda lam: (ea * ea + 1 - 2 * ea * np.cos(lam * a)) / (1 + lam * lam)
    R = q.R or 4000.0
    val, tail = integrate(mu, g, q, g_bound=(ea + 1) ** 2 / (1 + R * R))
    idx = second_moment_index_diagnostic(mu).indices
    return Deficiency(float(val.real), math.isfinite(val.real), tail, idx)


_GREEN = {"F2": (0.5, lambda x: 1.0 - np.abs(x)), "F3": (1.0, lambda x: np.exp(-np.abs(x)))}


def greens_residual(which: str, phi: TestFunction, n: int = 1024) -> float:
    """Max interior residual of phi = -u''/2 (F2) or phi = (u - u'')/2 (F3), u = T_F phi."""
    if which not in _GREEN:
        raise ValueError("which is 'F2' or 'F3'")
    a, F = _GREEN[which]
    if not (phi.support.lo > 0 and phi.support.hi < a):
        raise ValueError("test function support must lie strictly inside the domain")
    h = a / n
    x = h * np.arange(n + 1)
    u = _convolve_kernel(F, phi, x, panels=32, order=24)
    upp = (u[2:] - 2 * u[1:-1] + u[:-2]) / h ** 2
    xi, p = x[1:-1], phi(x[1:-1])
    if which == "F2":
        res = p + 0.5 * upp
    else:
        res = p - 0.5 * (u[1:-1] - upp)
    return float(np.max(np.abs(res)))


@dataclass(frozen=True)
class BoundaryCheck:
    lhs: float
    rhs: float
    error: float


def _as_c1(g, gprime, a):
    if isinstance(g, tuple):
        spline = interpolate.CubicSpline(*g)
        return spline, spline.derivative()
    if gprime is not None:
        return g, gprime
    t = np.linspace(0.0, a, 2049)
    spline = interpolate.CubicSpline(t, g(t))
    return g, spline.derivative()


def boundary_reproducing(which: str, x: float, g, gprime: Callable | None = None,
                         order: int = 48) -> BoundaryCheck:
    """Energy form of F_x against g versus its boundary-corrected value.

    ``g`` is a callable (derivative from ``gprime`` or a fine cubic spline) or
    a ``(nodes, values)`` tuple of samples.
    """
    if which not in _GREEN:
        raise ValueError("which is 'F2' or 'F3'")
    a, _ = _GREEN[which]
    if not 0 < x < a:
        raise ValueError(f"x must lie in (0, {a})")
    g, dg = _as_c1(g, gprime, a)
    t, w = np.polynomial.legendre.leggauss(order)
    lhs = 0.0
    for lo, hi in ((0.0, x), (x, a)):
        m = 8
        y, wy = _gl_panels(lo, hi, m, order)
        sign = np.where(y < x, 1.0, -1.0)
        if which == "F3":
            Fx = np.exp(-np.abs(x - y))
            lhs += 0.5 * np.sum(wy * (sign * Fx * dg(y) + Fx * g(y)))
        else:
            lhs += 0.5 * np.sum(wy * sign * dg(y))
    if which == "F3":
        rhs = g(x) - (math.exp(-x) * g(0.0) + math.exp(-(1 - x)) * g(1.0)) / 2
    else:
        rhs = g(x) - (g(0.0) + g(0.5)) / 2
    lhs, rhs = float(np.real(lhs)), float(np.real(rhs))
    return BoundaryCheck(lhs, rhs, abs(lhs - rhs))
