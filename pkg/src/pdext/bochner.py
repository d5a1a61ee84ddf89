"""Fourier transforms of measures and the numerics around them.

Truncated integrals over unbounded densities are controlled by each
density's tail descriptor. Two-sided densities with an algebraic tail
``c / lam**2`` get that tail added back in closed form, so a modest cutoff
still gives transforms accurate far beyond the naive truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import signal, special

from .model import (ConfigurationError, DataError, Density, DomainError, PdFunction,
                    SpectralMeasure, catalog_measure, table)

_CHUNK = 1 << 22


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation radius (None: chosen from tail bounds), density of nodes and rule."""

    R: float | None = None
    nodes_per_unit: int = 64
    rule: str = "simpson"
    tol: float = 1e-9

    def __post_init__(self):
        if self.R is not None and not self.R > 0:
            raise ValueError("truncation radius must be positive")
        if self.nodes_per_unit < 8:
            raise ValueError("need at least 8 nodes per unit")
        if self.rule not in ("simpson", "trapezoid"):
            raise ValueError(f"unknown rule {self.rule!r}")


DEFAULT_QUADRATURE = QuadratureSpec()


# --------------------------------------------------------------------------
# quadrature on densities


def _composite(lo: float, hi: float, npu: int, rule: str):
    m = max(2, int(math.ceil((hi - lo) * npu)))
    if rule == "simpson" and m % 2:
        m += 1
    x = np.linspace(lo, hi, m + 1)
    h = (hi - lo) / m
    if rule == "simpson":
        w = np.full(m + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        w *= h / 3
    else:
        w = np.full(m + 1, h)
        w[0] = w[-1] = h / 2
    return x, w


def _singular_panel(lo: float, length: float, exponent: float, n: int = 64):
    # lam = lo + length * t**k removes the (lam - lo)**exponent singularity
    k = 1.0 / (1.0 + exponent)
    t, w = np.polynomial.legendre.leggauss(n)
    t = 0.5 * (t + 1.0)
    w = 0.5 * w
    return lo + length * t ** k, w * length * k * t ** (k - 1.0)


def choose_radius(d: Density, tol: float, start: float = 8.0, corrected: bool = True) -> float:
    bound = d.tail_bound if corrected else d.tail_mass
    if bound is None:
        raise ConfigurationError(f"density {d.kind!r} has no tail descriptor")
    R = start
    while bound(R) > tol / 10:
        R *= 2
        if R > 1e7:
            raise ConfigurationError(f"tail of {d.kind!r} decays too slowly for tol={tol}")
    return R


def density_rule(d: Density, q: QuadratureSpec = DEFAULT_QUADRATURE, R: float | None = None,
                 corrected: bool = True):
    """Nodes and weights (density already multiplied in) for a truncated density.

    Returns ``(nodes, weights, R, tail)`` where ``tail`` bounds what the
    truncation leaves out. With ``corrected`` the bound assumes the caller adds
    the closed-form algebraic tail back (only ``bochner_transform`` does).
    """
    lo, hi = d.support
    if R is None:
        R = q.R
    if R is None:
        R = (max(abs(lo), abs(hi)) if d.bounded_support
             else choose_radius(d, q.tol, corrected=corrected))
    L, U = max(lo, -R), min(hi, R)
    if corrected or (lo >= -R and hi <= R):
        tail = d.tail_bound(R)
    elif d.tail_mass is not None:
        tail = float(d.tail_mass(R))
    else:
        tail = math.inf
    if not L < U:
        return np.zeros(0), np.zeros(0), R, tail
    cuts = [L] + [b for b in d.breakpoints if L < b < U] + [U]
    xs, ws = [], []
    for i, (a, b) in enumerate(zip(cuts[:-1], cuts[1:])):
        if i == 0 and d.singular_exponent < 0 and a == lo:
            span = min(1.0, b - a)
            x, w = _singular_panel(a, span, d.singular_exponent)
            xs.append(x)
            ws.append(w * d(x))
            a += span
            if not a < b:
                continue
        x, w = _composite(a, b, q.nodes_per_unit, q.rule)
        xs.append(x)
        ws.append(w * d(x))
    return np.concatenate(xs), np.concatenate(ws), R, tail


def _algebraic_tail(x, R: float, asymptote) -> np.ndarray:
    """Integral over |lam| > R of exp(i lam x) * sum c cos(w lam) / lam**2."""
    x = np.asarray(x, dtype=float)

    def one_sided(s):
        s = np.abs(s)
        si, _ = special.sici(s * R)
        return np.cos(s * R) / R - s * (np.pi / 2 - si)

    out = np.zeros(x.shape)
    for c, w in asymptote:
        out = out + c * (one_sided(x + w) + one_sided(x - w))
    return out


def _fourier_sum(nodes, weights, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, _CHUNK // max(1, nodes.size))
    for i in range(0, flat.size, step):
        out[i:i + step] = np.exp(1j * np.outer(flat[i:i + step], nodes)) @ weights
    return out.reshape(x.shape)


@dataclass(frozen=True, eq=False)
class Transform:
    values: np.ndarray
    tail_bound: float
    radius: float | None


def bochner_transform(mu: SpectralMeasure, x, q: QuadratureSpec | None = None,
                      full_output: bool = False):
    """x -> integral of exp(i lam x) dmu(lam)."""
    q = q or DEFAULT_QUADRATURE
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape, dtype=complex)
    for lam, w in mu.atoms:
        out += w * np.exp(1j * lam * xa)
    tail, radius = 0.0, None
    for wd, d in mu.densities:
        nodes, weights, R, t = density_rule(d, q)
        radius = R if radius is None else max(radius, R)
        out += wd * _fourier_sum(nodes, weights, xa)
        two_sided = not (math.isfinite(d.support[0]) or math.isfinite(d.support[1]))
        if d.asymptote and two_sided and (d.support[0] < -R or d.support[1] > R):
            out += wd * _algebraic_tail(xa, R, d.asymptote)
        tail += wd * t
    if full_output:
        return Transform(out[()] if out.ndim == 0 else out, tail, radius)
    return out[()] if out.ndim == 0 else out


def integrate(mu: SpectralMeasure, g: Callable, q: QuadratureSpec | None = None,
              g_bound: float = 1.0):
    """Integral of g against mu, with a tail bound assuming |g| <= g_bound."""
    q = q or DEFAULT_QUADRATURE
    total = 0.0 + 0.0j
    for lam, w in mu.atoms:
        total += w * complex(np.asarray(g(np.array([lam])))[0])
    tail = 0.0
    for wd, d in mu.densities:
        nodes, weights, _, t = density_rule(d, q, corrected=False)
        if nodes.size:
            total += wd * complex(np.sum(weights * np.asarray(g(nodes))))
        tail += wd * t * g_bound
    return total, tail


@dataclass(frozen=True)
class ExtCheck:
    passed: bool
    sup_error: float
    tail_bound: float

    def to_json(self):
        return {"op": "verify_ext", "sup_error": self.sup_error, "pass": self.passed,
                "tail_bound": self.tail_bound}


def default_points(F, count: int = 201) -> np.ndarray:
    a = F.a
    if not math.isfinite(a):
        a = 1.0
    return np.linspace(-a, a, count)


def verify_ext(F, mu: SpectralMeasure, grid=None, tol: float = 1e-4,
               q: QuadratureSpec | None = None) -> ExtCheck:
    """Does mu's transform reproduce F on the grid?"""
    x = default_points(F) if grid is None else np.asarray(grid, dtype=float)
    res = bochner_transform(mu, x, q, full_output=True)
    err = float(np.max(np.abs(res.values - np.asarray(F(x), dtype=complex))))
    return ExtCheck(err <= tol, err, res.tail_bound)


# --------------------------------------------------------------------------
# moments and growth probes


@dataclass(frozen=True)
class GrowthProbe:
    radii: tuple
    values: tuple
    verdict: str  # "convergent", "divergent" or "inconclusive"


def growth_probe(mu: SpectralMeasure, power: int, q: QuadratureSpec | None = None,
                 start: float = 64.0, rel_tol: float = 1e-6) -> GrowthProbe:
    """Truncated integrals of |lam|**power at R, 2R, 4R, 8R."""
    q = q or DEFAULT_QUADRATURE
    R0 = q.R or start
    radii = tuple(R0 * 2 ** k for k in range(4))
    vals = []
    for R in radii:
        v = sum(w * abs(l) ** power for l, w in mu.atoms if abs(l) <= R)
        for wd, d in mu.densities:
            nodes, weights, _, _ = density_rule(d, q, R=R, corrected=False)
            v += wd * float(np.sum(weights * np.abs(nodes) ** power))
        vals.append(v)
    last, prev = vals[-1], vals[-2]
    if prev > 0 and last / prev > 1.5:
        verdict = "divergent"
    elif abs(last - prev) <= rel_tol * max(1.0, abs(last)):
        verdict = "convergent"
    else:
        verdict = "inconclusive"
    return GrowthProbe(radii, tuple(vals), verdict)


def moment(mu: SpectralMeasure, n: int, q: QuadratureSpec | None = None,
           method: str = "auto") -> float:
    """n-th moment of mu.

    ``inf`` flags an absolutely divergent moment and ``nan`` an inconclusive
    probe. ``method="auto"`` uses closed forms when every component has one;
    ``"quadrature"`` always integrates numerically.
    """
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    atoms = sum(w * l ** n for l, w in mu.atoms)
    if method == "auto":
        vals = [d.moment(n) for _, d in mu.densities]
        if all(v is not None for v in vals):
            if any(math.isinf(v) for v in vals):
                return math.inf
            return atoms + sum(w * v for (w, _), v in zip(mu.densities, vals))
    elif method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    probe = growth_probe(mu, n, q)
    if probe.verdict == "divergent":
        return math.inf
    if probe.verdict == "inconclusive":
        return math.nan
    q = q or DEFAULT_QUADRATURE
    R = probe.radii[-1]
    total = sum(w * l ** n for l, w in mu.atoms if abs(l) <= R)
    for wd, d in mu.densities:
        nodes, weights, _, _ = density_rule(d, q, R=R, corrected=False)
        total += wd * float(np.sum(weights * nodes ** n))
    return total


@dataclass(frozen=True)
class IndexDiagnostic:
    indices: tuple | None
    probe: GrowthProbe

    @property
    def verdict(self) -> str:
        return "inconclusive" if self.indices is None else str(self.indices)


def second_moment_index_diagnostic(mu: SpectralMeasure, q: QuadratureSpec | None = None):
    """(1,1) when the second moment diverges, (0,0) when finite."""
    probe = growth_probe(mu, 2, q)
    idx = {"divergent": (1, 1), "convergent": (0, 0)}.get(probe.verdict)
    return IndexDiagnostic(idx, probe)


class MomentSequence:
    """Moments m_0..m_N, stored as logarithms so factorial growth never overflows."""

    def __init__(self, values=None, label: str = "", *, log_values=None, signs=None):
        if (values is None) == (log_values is None):
            raise ValueError("give either values or log_values")
        if values is not None:
            vals = list(values)
            self.signs = np.array([0 if v == 0 else (1 if v > 0 else -1) for v in vals])
            self.log_values = np.array([math.log(abs(v)) if v != 0 else -math.inf for v in vals])
        else:
            self.log_values = np.asarray(log_values, dtype=float)
            self.signs = np.ones(self.log_values.size, dtype=int) if signs is None else np.asarray(signs)
        self.label = label

    @classmethod
    def from_log(cls, log_values, label: str = "") -> "MomentSequence":
        return cls(log_values=log_values, label=label)

    @property
    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return self.signs * np.exp(self.log_values)

    def __len__(self):
        return self.log_values.size


@dataclass(frozen=True)
class CarlemanReport:
    divergent_partial_sum: float
    terms: tuple
    verdict: str


def carleman_diagnostic(moments: MomentSequence, window: int = 5,
                        ratio: float = 0.9) -> CarlemanReport:
    """Partial Carleman sum over m_{2k}^(-1/2k), k = 1..K.

    Terms that shrink geometrically (successive ratio below ``ratio`` over the
    last ``window`` terms) leave the test inconclusive.
    """
    K = (len(moments) - 1) // 2
    if K < 5:
        raise DataError("need even moments up to order 10")
    logs = moments.log_values[2:2 * K + 1:2]
    signs = moments.signs[2:2 * K + 1:2]
    if np.any(signs <= 0):
        raise DataError("even moments must be positive")
    k = np.arange(1, K + 1)
    terms = np.exp(-logs / (2 * k))
    ratios = terms[1:] / terms[:-1]
    tail = ratios[-(window - 1):]
    verdict = "inconclusive" if np.all(tail < ratio) else "determinate-evidence"
    return CarlemanReport(float(np.sum(terms)), tuple(terms.tolist()), verdict)


def moment_sequence(mu: SpectralMeasure, order: int, q: QuadratureSpec | None = None,
                    label: str = "") -> MomentSequence:
    return MomentSequence([moment(mu, n, q) for n in range(order + 1)], label or mu.label)


# --------------------------------------------------------------------------
# convolution and periodization


@dataclass(frozen=True)
class DiracComb:
    """Sum of unit point masses at the multiples of ``period``."""

    period: float = 1.0


def _sample_for_convolution(d: Density, q: QuadratureSpec, R: float):
    if d.singular_exponent < 0:
        raise ConfigurationError("cannot tabulate a density with an integrable singularity")
    lo, hi = max(d.support[0], -R), min(d.support[1], R)
    h = 1.0 / q.nodes_per_unit
    i0, i1 = math.floor(lo / h), math.ceil(hi / h)
    grid = h * np.arange(i0, i1 + 1)
    return grid, d(grid)


def _convolution_asymptote(d1: Density, d2: Density, q: QuadratureSpec) -> tuple:
    """Leading c cos(w lam)/lam^2 tail of d1 * d2.

    A tail term of one factor passes through the convolution multiplied by the
    other factor's transform at the same frequency (real for even factors).
    """
    terms = {}
    for da, db in ((d1, d2), (d2, d1)):
        for c, w in da.asymptote:
            if w == 0:
                factor = db.total_mass()
            else:
                val = complex(bochner_transform(SpectralMeasure.from_density(db), w, q))
                if abs(val.imag) > 1e-8:
                    raise ConfigurationError("oscillating tails need an even partner density")
                factor = val.real
            terms[w] = terms.get(w, 0.0) + c * factor
    return tuple((c, w) for w, c in sorted(terms.items()) if c != 0.0)


def _convolve_densities(d1: Density, d2: Density, q: QuadratureSpec) -> Density:
    radii = []
    for d in (d1, d2):
        if d.bounded_support:
            radii.append(max(abs(d.support[0]), abs(d.support[1])))
        elif q.R is not None:
            radii.append(q.R)
        else:
            if d.tail_mass is None:
                raise ConfigurationError(f"density {d.kind!r} has no tail descriptor")
            radii.append(256.0)
    g1, v1 = _sample_for_convolution(d1, q, radii[0])
    g2, v2 = _sample_for_convolution(d2, q, radii[1])
    h = 1.0 / q.nodes_per_unit
    # trapezoid weights on each factor
    w1 = v1.copy()
    w1[[0, -1]] *= 0.5
    conv = signal.fftconvolve(w1, v2) * h
    grid = g1[0] + g2[0] + h * np.arange(conv.size)
    m1, m2 = d1.total_mass(), d2.total_mass()
    unbounded = not (d1.bounded_support and d2.bounded_support)
    if not unbounded:
        return table(grid, np.maximum(conv, 0.0))
    keep_r = 0.5 * min(r for r, d in zip(radii, (d1, d2)) if not d.bounded_support)
    keep = np.abs(grid) <= keep_r + 1e-12
    grid, conv = grid[keep], np.maximum(conv[keep], 0.0)
    cells = 0.5 * (conv[1:] + conv[:-1]) * np.diff(grid)
    kept_mass = float(np.sum(cells))
    # mass of the table outside [-R, R], read off cumulative sums at cell edges
    cum = np.concatenate(([0.0], np.cumsum(cells)))
    asym = _convolution_asymptote(d1, d2, q)
    missing = max(0.0, m1 * m2 - kept_mass)
    lo_g, hi_g = grid[0], grid[-1]

    def leading(lam):
        return sum(c * np.cos(w * lam) for c, w in asym) / lam ** 2

    # next tail term K/lam^4, fitted on the outer half of the table
    outer = (np.abs(grid) >= 0.5 * keep_r) & (grid != 0)
    K4 = float(np.max(np.abs(conv[outer] - leading(grid[outer])) * grid[outer] ** 4)) if asym else 0.0
    model_error = 2 * K4 / (3 * keep_r ** 3)

    def pdf(lam):
        lam = np.asarray(lam, dtype=float)
        inside = np.interp(lam, grid, conv)
        if not asym:
            return np.where((lam >= lo_g) & (lam <= hi_g), inside, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            outside = leading(lam)
        return np.where((lam >= lo_g) & (lam <= hi_g), inside, outside)

    return Density(
        "convolution", pdf, support=(-math.inf, math.inf),
        params={"kept_radius": keep_r, "missing_mass": missing, "model_error": model_error},
        tail_mass=lambda R: (max(0.0, kept_mass - float(np.interp(R, grid, cum) - np.interp(-R, grid, cum)))
                             + (missing if R <= keep_r else missing * keep_r / R)),
        asymptote=asym,
        # past keep_r the model density is exactly c/lam^2, which the caller adds back
        remainder=(lambda R: 0.0 if R >= keep_r else 2 * K4 / (3 * R ** 3)) if asym else None,
        breakpoints=tuple(b1 + b2 for b1 in d1.breakpoints for b2 in d2.breakpoints),
        mass=m1 * m2)


def _periodize_density(d: Density, period: float, q: QuadratureSpec, tol: float = 1e-10):
    """Density of the periodization on [0, period), summed pointwise on demand."""
    P = float(period)
    lo, hi = d.support
    algebraic = bool(d.asymptote) and all(w == 0 for _, w in d.asymptote)
    if d.bounded_support:
        n_lo, n_hi = math.floor((0 - hi) / P) - 1, math.ceil((P - lo) / P) + 1
    else:
        M = 64
        while True:
            bound = d.remainder(M * P) if algebraic else d.tail_mass(M * P)
            if bound < tol or M >= 1 << 20:
                break
            M *= 2
        n_lo, n_hi = -M, M
    c = sum(c for c, _ in d.asymptote) if algebraic else 0.0

    def summed(t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        vals = np.zeros(flat.size)
        for start in range(n_lo, n_hi + 1, 4096):
            ns = np.arange(start, min(start + 4096, n_hi + 1))
            vals += d(flat[None, :] - P * ns[:, None]).sum(axis=0)
        if algebraic:
            # c/(t - nP)^2 beyond the summed window, via trigamma
            vals += c / P ** 2 * (special.polygamma(1, n_hi + 1 - flat / P)
                                  + special.polygamma(1, -n_lo + 1 + flat / P))
        return vals.reshape(t.shape)

    def pdf(lam):
        lam = np.asarray(lam, dtype=float)
        inside = (lam >= 0) & (lam <= P)
        out = np.zeros(lam.shape)
        if np.any(inside):
            out[inside] = np.maximum(summed(lam[inside]), 0.0)
        return out

    t = np.linspace(0.0, P, int(math.ceil(P * q.nodes_per_unit)) + 1)
    v = pdf(t)
    mass = float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(t)))
    kinks = sorted({float(b - P * math.floor(b / P)) for b in d.breakpoints} - {0.0})
    return Density("periodized", pdf, support=(0.0, P),
                   params={"period": P, "base": d.kind, "terms": [n_lo, n_hi]},
                   tail_mass=lambda R: 0.0, breakpoints=tuple(kinks), mass=mass)


def convolve(mu1, mu2, q: QuadratureSpec | None = None) -> SpectralMeasure:
    """Convolution of two finite measures, or periodization by a Dirac comb."""
    q = q or QuadratureSpec(nodes_per_unit=64)
    if isinstance(mu1, DiracComb) or isinstance(mu2, DiracComb):
        comb, mu = (mu1, mu2) if isinstance(mu1, DiracComb) else (mu2, mu1)
        if isinstance(mu, DiracComb):
            raise ConfigurationError("two Dirac combs have no finite convolution")
        if mu.atoms:
            raise ConfigurationError("periodizing point masses is not supported")
        dens = tuple((w, _periodize_density(d, comb.period, q)) for w, d in mu.densities)
        return SpectralMeasure((), dens, period=comb.period, label=f"{mu.label} periodized")
    atoms = []
    for l1, w1 in mu1.atoms:
        for l2, w2 in mu2.atoms:
            atoms.append((l1 + l2, w1 * w2))
    dens = []
    for l, w in mu1.atoms:
        dens += [(1.0, d.shift(l, w * wd)) for wd, d in mu2.densities]
    for l, w in mu2.atoms:
        dens += [(1.0, d.shift(l, w * wd)) for wd, d in mu1.densities]
    for w1, d1 in mu1.densities:
        for w2, d2 in mu2.densities:
            dens.append((w1 * w2, _convolve_densities(d1, d2, q)))
    merged = {}
    for l, w in atoms:
        merged[l] = merged.get(l, 0.0) + w
    return SpectralMeasure(tuple(merged.items()), tuple(dens),
                           label=f"{mu1.label}*{mu2.label}")


@dataclass(frozen=True, eq=False)
class CircleWeights:
    """Weights w_n, |n| <= N, of sum w_n exp(i 2 pi n x)."""

    n: np.ndarray
    weights: np.ndarray
    window: str
    convention: str = "exp(i*2*pi*n*x)"

    @property
    def positive(self) -> bool:
        w = self.weights
        scale = max(1.0, float(np.max(np.abs(w))))
        return bool(np.all(np.abs(np.imag(w)) <= 1e-12 * scale)
                    and np.all(np.real(w) >= -1e-14 * scale))

    @property
    def total(self) -> complex:
        return complex(np.sum(self.weights))

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(2j * np.pi * np.multiply.outer(x, self.n)) @ self.weights


def _gauss_panels(lo: float, hi: float, panel: float, order: int = 16):
    m = max(1, int(math.ceil((hi - lo) / panel)))
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, m + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * t).ravel(), (half[:, None] * w).ravel()


def _oscillatory_integral(f: Callable, lo: float, hi: float, freqs, splits=(0.0,)):
    """Integral over (lo, hi) of f(x) exp(-i freq x) for every freq."""
    freqs = np.asarray(freqs, dtype=float)
    fmax = float(np.max(np.abs(freqs))) if freqs.size else 0.0
    panel = min(0.25, 4.0 / (fmax + 1.0)) if fmax else 0.25
    cuts = [lo] + [s for s in splits if lo < s < hi] + [hi]
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        x, w = _gauss_panels(a, b, panel)
        xs.append(x)
        ws.append(w)
    x, w = np.concatenate(xs), np.concatenate(ws)
    fw = np.asarray(f(x), dtype=complex) * w
    out = np.empty(freqs.size, dtype=complex)
    step = max(1, _CHUNK // x.size)
    for i in range(0, freqs.size, step):
        out[i:i + step] = np.exp(-1j * np.outer(freqs[i:i + step], x)) @ fw
    return out


def _exp_window(xi, half_width: float):
    # integral over |x| <= b of exp(-|x|) exp(-i 2 pi xi x)
    w = 2 * np.pi * np.asarray(xi, dtype=float)
    b = half_width
    return 2 * (1 - math.exp(-b) * (np.cos(w * b) - w * np.sin(w * b))) / (1 + w * w)


def _linear_interp_transform(nodes, values, freqs):
    # exact transform of a piecewise-linear table (zero outside)
    freqs = np.asarray(freqs, dtype=float)
    x0, h = nodes[:-1], np.diff(nodes)
    f0, s = values[:-1], np.diff(values) / h
    out = np.zeros(freqs.size, dtype=complex)
    for i, w in enumerate(freqs):
        z = w * h
        small = np.abs(z) < 1e-3
        e = np.exp(-1j * z)
        with np.errstate(divide="ignore", invalid="ignore"):
            E0 = np.where(small, h - 1j * w * h ** 2 / 2 - w ** 2 * h ** 3 / 6, (1 - e) / (1j * w))
            E1 = np.where(small, h ** 2 / 2 - 1j * w * h ** 3 / 3 - w ** 2 * h ** 4 / 8,
                          e * (1j * h / w + 1 / w ** 2) - 1 / w ** 2)
        out[i] = np.sum(np.exp(-1j * w * x0) * (f0 * E0 + s * E1))
    return out


def _whole_line_transform(F, ns: np.ndarray) -> np.ndarray:
    from .polya import SplineExtension, extension_density

    if isinstance(F, SplineExtension):
        return 2 * np.pi * extension_density(F, 2 * np.pi * ns).values
    if F.label in ("F1", "F2", "F3", "F4", "F5", "F7") and not F.strict:
        mu = catalog_measure(F.label, getattr(F, "params", {}).get("p", 1.0))
        if F.label == "F7" and mu.densities[0][1].params["p"] <= 1:
            raise DomainError("(1 - ix)^(-p) is not integrable for p <= 1")
        return F.scale * 2 * np.pi * mu.density(2 * np.pi * ns)
    if F.label == "sampled":
        spec = F.to_json()
        vals = np.asarray(spec["re"]) + 1j * np.asarray(spec["im"])
        return F.scale * _linear_interp_transform(np.asarray(spec["nodes"]), vals, 2 * np.pi * ns)
    raise DomainError(f"{F.label}: transform over the line is unavailable or the function "
                      "is not integrable")


def periodize(F, window: str = "none", N: int = 100) -> CircleWeights:
    """Fourier weights of the 1-periodization of F (or of F times the unit box)."""
    ns = np.arange(-N, N + 1)
    if window == "none":
        w = _whole_line_transform(F, ns)
    elif window == "unit_box":
        if isinstance(F, PdFunction) and F.label == "F3" and not F.strict:
            w = F.scale * _exp_window(ns, 0.5).astype(complex)
        else:
            w = _oscillatory_integral(F, -0.5, 0.5, 2 * np.pi * ns)
    else:
        raise ValueError(f"unknown window {window!r}")
    w = np.asarray(w, dtype=complex)
    if np.all(np.abs(w.imag) <= 1e-14 * max(1.0, float(np.max(np.abs(w))))):
        w = w.real
    return CircleWeights(ns, w, window)


def circle_fourier_coefficients(F: Callable, N: int, period: float = 2 * np.pi) -> np.ndarray:
    """Haar-normalized coefficients (1/P) * integral of F(x) exp(-i 2 pi n x / P), |n| <= N."""
    ns = np.arange(-N, N + 1)
    c = _oscillatory_integral(F, -period / 2, period / 2, 2 * np.pi * ns / period) / period
    if np.all(np.abs(c.imag) <= 1e-14):
        c = c.real
    return c


@dataclass(frozen=True)
class InversionResult:
    value: float
    values: tuple
    schedule: tuple
    converged: bool


def invert(F: Callable, window: tuple, schedule: Sequence[float] = (10.0, 100.0, 1000.0),
           tol: float = 1e-2) -> InversionResult:
    """mu((a0, b0)) + half the boundary atoms, from F on growing [-T, T]."""
    a0, b0 = map(float, window)
    if not a0 < b0:
        raise ValueError("window must satisfy a0 < b0")
    centre, half = 0.5 * (a0 + b0), 0.5 * (b0 - a0)
    wmax = max(abs(a0), abs(b0)) + 1.0
    panel = min(0.5, 2.0 / wmax)
    values = []
    for T in schedule:
        xs, ws = [], []
        for lo, hi in ((-T, 0.0), (0.0, T)):
            x, w = _gauss_panels(lo, hi, panel)
            xs.append(x)
            ws.append(w)
        x, w = np.concatenate(xs), np.concatenate(ws)
        kern = (b0 - a0) * np.exp(-1j * x * centre) * np.sinc(x * half / np.pi)
        v = np.sum(w * kern * np.asarray(F(x), dtype=complex)) / (2 * np.pi)
        values.append(float(v.real))
    converged = len(values) < 2 or abs(values[-1] - values[-2]) <= tol
    return InversionResult(values[-1], tuple(values), tuple(schedule), converged)
