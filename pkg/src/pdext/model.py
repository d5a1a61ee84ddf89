"""Core types: intervals, quadrature grids, p.d. functions, kernels and measures.

Everything here is immutable after construction. Fourier conventions are
fixed globally: a measure mu corresponds to the function
``x -> integral of exp(i*lam*x) dmu(lam)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import special


class DomainError(ValueError):
    """Evaluation or construction outside the domain of definition."""


class ConfigurationError(ValueError):
    """Inconsistent numerical settings (for example no way to bound a tail)."""


class DataError(ValueError):
    """Input samples that cannot support the requested computation."""


# --------------------------------------------------------------------------
# intervals and grids


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); infinite endpoints are allowed."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @classmethod
    def symmetric(cls, a: float) -> "Interval":
        return cls(-float(a), float(a))

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def is_symmetric(self) -> bool:
        return math.isclose(self.lo, -self.hi, rel_tol=1e-12, abs_tol=1e-15)

    @property
    def half_width(self) -> float:
        return 0.5 * self.length

    def contains(self, x, closed: bool = True, slack: float = 1e-12) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        pad = slack * max(1.0, abs(self.lo) if math.isfinite(self.lo) else 1.0,
                          abs(self.hi) if math.isfinite(self.hi) else 1.0)
        if closed:
            return (x >= self.lo - pad) & (x <= self.hi + pad)
        return (x > self.lo) & (x < self.hi)

    def contains_interval(self, other: "Interval", slack: float = 1e-12) -> bool:
        return other.lo >= self.lo - slack and other.hi <= self.hi + slack

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if not lo < hi:
            raise ValueError("intervals do not overlap")
        return Interval(lo, hi)


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Quadrature nodes and weights on an interval."""

    interval: Interval
    nodes: np.ndarray
    weights: np.ndarray
    rule: str = "midpoint"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise ValueError("nodes and weights must be matching 1-d arrays")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def spacing(self) -> float:
        return self.interval.length / self.n

    @classmethod
    def midpoint(cls, interval: Interval, n: int) -> "GridSpec":
        """Composite midpoint rule with ``n`` cells."""
        if n < 1:
            raise ValueError("n must be positive")
        h = interval.length / n
        nodes = interval.lo + h * (np.arange(n) + 0.5)
        return cls(interval, nodes, np.full(n, h), "midpoint")

    @classmethod
    def gauss_legendre(cls, interval: Interval, n: int) -> "GridSpec":
        t, w = np.polynomial.legendre.leggauss(n)
        half = 0.5 * interval.length
        return cls(interval, interval.lo + half * (t + 1.0), half * w, "gauss-legendre")

    @classmethod
    def on(cls, a: float, n: int) -> "GridSpec":
        """Midpoint grid on (0, a)."""
        return cls.midpoint(Interval(0.0, float(a)), n)


# --------------------------------------------------------------------------
# positive definite functions


def _sinc_sq_half(x):
    # (sin(x/2)/(x/2))^2 with the removable singularity handled by numpy
    return np.sinc(np.asarray(x, dtype=float) / (2 * np.pi)) ** 2


_CATALOG = {
    "F1": (1.0, lambda x, p: 1.0 / (1.0 + x * x), True),
    "F2": (0.5, lambda x, p: 1.0 - np.abs(x), True),
    "F3": (1.0, lambda x, p: np.exp(-np.abs(x)), True),
    "F4": (0.5, lambda x, p: _sinc_sq_half(x), True),
    "F5": (1.0, lambda x, p: np.exp(-0.5 * x * x), True),
    "F6": (np.pi / 4, lambda x, p: np.cos(x), True),
    "F7": (1.0, lambda x, p: (1.0 - 1j * x) ** (-p), False),
}

CATALOG_IDS = tuple(_CATALOG)


class PdFunction:
    """A continuous function on a symmetric interval (-a, a).

    Instances are either catalog entries (closed forms, evaluable anywhere),
    sampled tables (linear interpolation, domain enforced) or wrappers of an
    arbitrary callable. ``F(x)`` evaluates; real-valued functions return
    float arrays, others complex.
    """

    def __init__(self, func: Callable, domain: Interval, *, real: bool = False,
                 strict: bool = True, label: str = "custom", spec: dict | None = None,
                 normalize: bool = True, scale: float | None = None):
        if not domain.is_symmetric:
            raise ValueError("a p.d. function lives on a symmetric interval (-a, a)")
        self._func = func
        self.domain = domain
        self.real = real
        self.strict = strict
        self.label = label
        self._spec = spec
        if scale is None:
            scale = 1.0
            if normalize:
                v0 = complex(np.asarray(func(np.zeros(1)))[0])
                if not v0.real > 0 or abs(v0.imag) > 1e-12 * abs(v0.real):
                    raise ValueError("F(0) must be real and positive")
                scale = 1.0 / v0.real
        self.scale = float(scale)
        if self._spec is not None and self.scale != 1.0:
            self._spec = dict(self._spec, scale=self.scale)

    # construction helpers ------------------------------------------------
    @classmethod
    def catalog(cls, ident: str, a: float | None = None, p: float = 1.0) -> "PdFunction":
        """Catalog entries F1..F7 (``p`` is the exponent of F7)."""
        if ident not in _CATALOG:
            raise KeyError(f"unknown catalog id {ident!r}")
        default_a, body, real = _CATALOG[ident]
        a = default_a if a is None else float(a)
        if a <= 0:
            raise ValueError("a must be positive")
        if ident == "F7" and p <= 0:
            raise ValueError("F7 needs p > 0")
        spec = {"kind": "catalog", "id": ident, "a": a}
        if ident == "F7":
            spec["p"] = float(p)
        fn = lambda x, _b=body, _p=float(p): _b(x, _p)
        obj = cls(fn, Interval.symmetric(a), real=real, strict=False,
                  label=ident, spec=spec, normalize=False)
        obj.params = {"p": float(p)} if ident == "F7" else {}
        return obj

    @classmethod
    def sampled(cls, nodes, values, normalize: bool = True) -> "PdFunction":
        """Linear interpolation of a table over (-a, a)."""
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=complex)
        if nodes.ndim != 1 or nodes.size < 2 or nodes.shape != values.shape:
            raise DataError("need matching 1-d node and value arrays")
        if np.any(np.diff(nodes) <= 0):
            raise DataError("nodes must be strictly increasing")
        a = nodes[-1]
        if a <= 0 or not math.isclose(nodes[0], -a, rel_tol=1e-9, abs_tol=1e-12):
            raise DataError("sampled table must span a symmetric interval")
        re, im = values.real.copy(), values.imag.copy()
        real = bool(np.all(im == 0))
        lo, hi = nodes[0], nodes[-1]

        def fn(x):
            x = np.asarray(x, dtype=float)
            if np.any((x < lo - 1e-12) | (x > hi + 1e-12)):
                raise DomainError("evaluation outside the sampled table")
            xr = np.interp(x, nodes, re)
            return xr if real else xr + 1j * np.interp(x, nodes, im)

        spec = {"kind": "sampled", "nodes": nodes.tolist(), "re": re.tolist(), "im": im.tolist()}
        return cls(fn, Interval(lo, hi), real=real, strict=True, label="sampled",
                   spec=spec, normalize=normalize)

    @classmethod
    def from_callable(cls, func: Callable, a: float, real: bool = False,
                      normalize: bool = True, label: str = "custom") -> "PdFunction":
        return cls(func, Interval.symmetric(a), real=real, strict=False,
                   label=label, normalize=normalize)

    @classmethod
    def constant(cls, a: float = math.inf) -> "PdFunction":
        return cls(lambda x: np.ones_like(np.asarray(x, dtype=float)),
                   Interval(-a, a), real=True, strict=False, label="one")

    # evaluation ----------------------------------------------------------
    @property
    def a(self) -> float:
        return self.domain.hi

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.strict and np.any(~self.domain.contains(x)):
            raise DomainError(f"{self.label}: argument outside {self.domain}")
        out = np.asarray(self._func(x))
        out = out.real.astype(float) if self.real else out.astype(complex)
        if self.scale != 1.0:
            out = out * self.scale
        return out[()] if out.ndim == 0 else out

    def __repr__(self):
        return f"PdFunction({self.label}, a={self.a:g})"

    def to_json(self) -> dict:
        if self._spec is None:
            raise ValueError(f"{self.label} has no serializable description")
        return dict(self._spec)


def evaluate(F: PdFunction, x):
    """F(x) as a complex number (or array)."""
    return np.asarray(F(x), dtype=complex)[()]


def restrict(F: PdFunction, sub: Interval) -> PdFunction:
    if not sub.is_symmetric:
        raise ValueError("restriction interval must be symmetric about 0")
    if not F.domain.contains_interval(sub):
        raise ValueError(f"{sub} is not contained in {F.domain}")
    spec = None
    if F._spec is not None and F._spec.get("kind") == "catalog":
        spec = dict(F._spec, a=sub.hi)
    out = PdFunction(F._func, sub, real=F.real, strict=F.strict, label=F.label,
                     spec=spec, normalize=False, scale=F.scale)
    if hasattr(F, "params"):
        out.params = F.params
    return out


def split_real_imag(F: PdFunction):
    """Return (K, L) with K = Re F (p.d., even) and L = Im F (odd, real)."""
    K = PdFunction(lambda x: np.real(F(x)), F.domain, real=True, strict=F.strict,
                   label=f"Re {F.label}", normalize=False)

    def L(x):
        return np.imag(np.asarray(F(x), dtype=complex))

    return K, L


def product(F1: PdFunction, F2: PdFunction) -> PdFunction:
    dom = F1.domain.intersect(F2.domain)
    return PdFunction(lambda x: np.asarray(F1(x)) * np.asarray(F2(x)), dom,
                      real=F1.real and F2.real, strict=F1.strict or F2.strict,
                      label=f"{F1.label}*{F2.label}", normalize=False)


def conjugate_reflect(F: PdFunction) -> PdFunction:
    """x -> conj(F(x)) = F(-x), the transform of the reflected measure."""
    if F.real:
        return F
    return PdFunction(lambda x: np.conj(F(x)), F.domain, real=False, strict=F.strict,
                      label=f"conj {F.label}", normalize=False)


# --------------------------------------------------------------------------
# kernels


class Kernel:
    """Hermitian kernel K(x, y) on a product of intervals."""

    def __init__(self, func: Callable, domain: Interval, label: str = "kernel"):
        self._func = func
        self.domain = domain
        self.label = label

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return np.asarray(self._func(x, y))

    def matrix(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return self(p[:, None], p[None, :])

    @classmethod
    def minimum(cls, domain: Interval = Interval(0.0, math.inf)) -> "Kernel":
        return cls(np.minimum, domain, "min")

    @classmethod
    def from_function(cls, F: PdFunction, domain: Interval | None = None) -> "Kernel":
        if domain is None:
            domain = Interval(0.0, F.a)
        return cls(lambda x, y: F(x - y), domain, f"{F.label}(x-y)")

    @classmethod
    def exponential_sum(cls) -> "Kernel":
        return cls(lambda x, y: np.exp(-(x + y)), Interval(0.0, math.inf), "exp(-(x+y))")

    @classmethod
    def fbm(cls, hurst: float) -> "Kernel":
        if not 0 < hurst < 1:
            raise ValueError("Hurst index must lie in (0, 1)")
        h2 = 2 * hurst
        return cls(lambda x, y: 0.5 * (np.abs(x) ** h2 + np.abs(y) ** h2 - np.abs(x - y) ** h2),
                   Interval(-math.inf, math.inf), f"fbm({hurst:g})")


# --------------------------------------------------------------------------
# spectral measures


@dataclass(frozen=True, eq=False)
class Density:
    """A nonnegative density with the information needed to truncate it.

    ``tail_mass(R)`` bounds the mass outside [-R, R]. Two-sided densities may
    carry an asymptotic expansion ``sum c * cos(w * lam) / lam**2`` (pairs
    ``(c, w)`` in ``asymptote``) together with ``remainder(R)``, a bound on
    the mass of the density minus that expansion outside [-R, R].
    """

    kind: str
    pdf: Callable
    support: tuple = (-math.inf, math.inf)
    params: dict = field(default_factory=dict)
    tail_mass: Callable | None = None
    asymptote: tuple = ()
    remainder: Callable | None = None
    moment_fn: Callable | None = None
    singular_exponent: float = 0.0
    breakpoints: tuple = ()
    mass: float | None = None

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        lo, hi = self.support
        out = np.zeros(lam.shape)
        inside = (lam >= lo) & (lam <= hi)
        if np.any(inside):
            out[inside] = self.pdf(lam[inside])
        return out[()] if out.ndim == 0 else out

    @property
    def bounded_support(self) -> bool:
        return math.isfinite(self.support[0]) and math.isfinite(self.support[1])

    def tail_bound(self, R: float) -> float:
        """Mass outside [-R, R] after the asymptotic correction (if any)."""
        lo, hi = self.support
        if lo >= -R and hi <= R:
            return 0.0
        if self.asymptote and self.remainder is not None:
            return float(self.remainder(R))
        if self.tail_mass is not None:
            return float(self.tail_mass(R))
        raise ConfigurationError(f"density {self.kind!r} has no tail descriptor")

    def moment(self, n: int) -> float | None:
        return None if self.moment_fn is None else self.moment_fn(n)

    def dilate(self, c: float) -> "Density":
        """Pushforward under lam -> c*lam (c != 0)."""
        if c == 0:
            raise ValueError("dilation factor must be nonzero")
        ac = abs(c)
        lo, hi = sorted((self.support[0] * c, self.support[1] * c))
        base = self
        tail = None if base.tail_mass is None else (lambda R: base.tail_mass(R / ac))
        rem = None if base.remainder is None else (lambda R: base.remainder(R / ac))
        mom = None if base.moment_fn is None else (lambda n: base.moment_fn(n) * c ** n)
        return Density(
            kind=f"{base.kind}", pdf=lambda lam: base.pdf(lam / c) / ac, support=(lo, hi),
            params=dict(base.params, dilation=base.params.get("dilation", 1.0) * c),
            tail_mass=tail, asymptote=tuple((cj * ac, wj / ac) for cj, wj in base.asymptote),
            remainder=rem, moment_fn=mom, singular_exponent=base.singular_exponent,
            breakpoints=tuple(sorted(b * c for b in base.breakpoints)), mass=base.mass)

    def shift(self, s: float, weight: float = 1.0) -> "Density":
        """weight * density(lam - s)."""
        base = self
        tail = None
        if base.tail_mass is not None:
            tail = lambda R: weight * (base.tail_mass(R - abs(s)) if R > abs(s) else base.total_mass())
        mom = None
        if base.moment_fn is not None:
            mom = lambda n: weight * sum(math.comb(n, k) * s ** (n - k) * base.moment_fn(k)
                                         for k in range(n + 1))
        return Density(
            kind=base.kind, pdf=lambda lam: weight * base.pdf(lam - s),
            support=(base.support[0] + s, base.support[1] + s),
            params=dict(base.params, shift=s, weight=weight), tail_mass=tail,
            moment_fn=mom, singular_exponent=base.singular_exponent,
            breakpoints=tuple(b + s for b in base.breakpoints),
            mass=None if base.mass is None else weight * base.mass)

    def total_mass(self) -> float:
        if self.mass is not None:
            return self.mass
        m = self.moment(0)
        if m is None:
            raise ConfigurationError("density mass unknown")
        return m

    def to_json(self) -> dict:
        if self.kind == "table":
            return {"id": "table", "nodes": self.params["nodes"], "values": self.params["values"]}
        out = {"id": self.kind}
        out.update({k: v for k, v in self.params.items() if k not in ("dilation",)})
        if "dilation" in self.params:
            out["dilation"] = self.params["dilation"]
        return out


def cauchy(scale: float = 1.0) -> Density:
    """s / (pi (s^2 + lam^2)); transform exp(-s|x|)."""
    s = float(scale)
    return Density(
        "cauchy", lambda lam: s / (np.pi * (s * s + lam * lam)), params={"scale": s},
        tail_mass=lambda R: 1.0 - 2.0 * math.atan(R / s) / math.pi,
        asymptote=((s / math.pi, 0.0),),
        remainder=lambda R: 2 * s ** 3 / (3 * math.pi * R ** 3),
        moment_fn=lambda n: 1.0 if n == 0 else math.inf, mass=1.0)


def fejer() -> Density:
    """(1/2pi)(sin(lam/2)/(lam/2))^2; transform (1-|x|)_+."""
    return Density(
        "fejer", lambda lam: _sinc_sq_half(lam) / (2 * np.pi),
        tail_mass=lambda R: 4.0 / (math.pi * R),
        asymptote=((1 / math.pi, 0.0), (-1 / math.pi, 1.0)),
        remainder=lambda R: 0.0,
        moment_fn=lambda n: 1.0 if n == 0 else math.inf, mass=1.0)


def gauss(sigma: float = 1.0) -> Density:
    s = float(sigma)

    def moment(n):
        if n % 2:
            return 0.0
        return s ** n * float(special.factorial2(n - 1, exact=True)) if n else 1.0

    return Density(
        "gauss", lambda lam: np.exp(-0.5 * (lam / s) ** 2) / (s * math.sqrt(2 * math.pi)),
        params={"sigma": s}, tail_mass=lambda R: math.erfc(R / (s * math.sqrt(2))),
        moment_fn=moment, mass=1.0)


def laplace(scale: float = 1.0) -> Density:
    """exp(-|lam|/s)/(2s); transform 1/(1 + s^2 x^2)."""
    s = float(scale)
    return Density(
        "laplace", lambda lam: np.exp(-np.abs(lam) / s) / (2 * s), params={"scale": s},
        tail_mass=lambda R: math.exp(-R / s), breakpoints=(0.0,),
        moment_fn=lambda n: 0.0 if n % 2 else s ** n * math.factorial(n), mass=1.0)


def triangle(width: float = 1.0) -> Density:
    """(1 - |lam|/w)_+ / w; transform (sin(wx/2)/(wx/2))^2."""
    w = float(width)

    def moment(n):
        return 0.0 if n % 2 else 2.0 * w ** n / ((n + 1) * (n + 2))

    return Density(
        "triangle", lambda lam: np.maximum(1.0 - np.abs(lam) / w, 0.0) / w, support=(-w, w),
        params={"width": w}, tail_mass=lambda R: max(0.0, 1.0 - R / w) ** 2,
        breakpoints=(0.0,), moment_fn=moment, mass=1.0)


def gamma(p: float) -> Density:
    """lam^(p-1) e^(-lam) / Gamma(p) on lam >= 0; transform (1 - ix)^(-p)."""
    p = float(p)
    if p <= 0:
        raise ValueError("gamma density needs p > 0")
    logg = special.gammaln(p)

    def pdf(lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp((p - 1) * np.log(lam) - lam - logg)
        return np.where(lam > 0, out, 1.0 if p == 1 else (0.0 if p > 1 else np.inf))

    def moment(n):
        # rising factorial p (p+1) ... (p+n-1)
        out = 1.0
        for k in range(n):
            out *= p + k
        return out

    return Density(
        "gamma", pdf, support=(0.0, math.inf), params={"p": p},
        tail_mass=lambda R: float(special.gammaincc(p, R)) if R > 0 else 1.0,
        moment_fn=moment, singular_exponent=min(p - 1.0, 0.0), mass=1.0)


def table(nodes, values) -> Density:
    """Piecewise-linear density on [nodes[0], nodes[-1]], zero outside."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
        raise DataError("table density needs matching node/value arrays")
    if np.any(np.diff(nodes) <= 0):
        raise DataError("table nodes must increase")
    if np.any(values < 0):
        raise DataError("density values must be nonnegative")
    mass = float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(nodes)))
    return Density(
        "table", lambda lam: np.interp(lam, nodes, values, left=0.0, right=0.0),
        support=(float(nodes[0]), float(nodes[-1])),
        params={"nodes": nodes.tolist(), "values": values.tolist()},
        tail_mass=lambda R: 0.0, mass=mass)


_DENSITY_FACTORIES = {
    "cauchy": lambda d: cauchy(d.get("scale", 1.0)),
    "fejer": lambda d: fejer(),
    "gauss": lambda d: gauss(d.get("sigma", 1.0)),
    "gamma": lambda d: gamma(d["p"]),
    "laplace": lambda d: laplace(d.get("scale", 1.0)),
    "triangle": lambda d: triangle(d.get("width", 1.0)),
    "table": lambda d: table(d["nodes"], d["values"]),
}


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Finite positive measure: point masses plus weighted densities.

    ``densities`` holds pairs (weight, Density). ``period`` is set when the
    measure lives on the circle R / period Z (used by periodization).
    """

    atoms: tuple = ()
    densities: tuple = ()
    period: float | None = None
    label: str = ""

    def __post_init__(self):
        atoms = tuple((float(l), float(w)) for l, w in self.atoms)
        if any(w <= 0 for _, w in atoms):
            raise ValueError("atom weights must be positive")
        dens = []
        for item in self.densities:
            w, d = (1.0, item) if isinstance(item, Density) else item
            if w <= 0:
                raise ValueError("density weights must be positive")
            dens.append((float(w), d))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "densities", tuple(dens))

    @property
    def total_mass(self) -> float:
        return sum(w for _, w in self.atoms) + sum(w * d.total_mass() for w, d in self.densities)

    def density(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        for w, d in self.densities:
            out = out + w * d(lam)
        return out

    def dilate(self, c: float) -> "SpectralMeasure":
        """Pushforward under lam -> c*lam."""
        return SpectralMeasure(tuple((l * c, w) for l, w in self.atoms),
                               tuple((w, d.dilate(c)) for w, d in self.densities),
                               label=self.label)

    def reflect(self) -> "SpectralMeasure":
        return self.dilate(-1.0)

    def to_json(self) -> dict:
        out = {"atoms": [[l, w] for l, w in self.atoms], "densities": []}
        for w, d in self.densities:
            item = d.to_json()
            if w != 1.0:
                item["weight"] = w
            out["densities"].append(item)
        return out

    @classmethod
    def point(cls, location: float = 0.0, weight: float = 1.0) -> "SpectralMeasure":
        return cls(atoms=((location, weight),))

    @classmethod
    def from_density(cls, d: Density, weight: float = 1.0, label: str = "") -> "SpectralMeasure":
        return cls(densities=((weight, d),), label=label or d.kind)


def catalog_measure(ident: str, p: float = 1.0) -> SpectralMeasure:
    """The measure whose transform extends catalog function ``ident``."""
    if ident == "F1":
        return SpectralMeasure.from_density(laplace(), label="mu1")
    if ident == "F2":
        return SpectralMeasure.from_density(fejer(), label="mu2")
    if ident == "F3":
        return SpectralMeasure.from_density(cauchy(), label="mu3")
    if ident == "F4":
        return SpectralMeasure.from_density(triangle(), label="mu4")
    if ident == "F5":
        return SpectralMeasure.from_density(gauss(), label="mu5")
    if ident == "F6":
        return SpectralMeasure(atoms=((1.0, 0.5), (-1.0, 0.5)), label="mu6")
    if ident == "F7":
        return SpectralMeasure.from_density(gamma(p), label="mu7")
    raise KeyError(ident)


# --------------------------------------------------------------------------
# JSON


def function_from_json(spec) -> PdFunction:
    """Build a PdFunction (or spline extension) from its JSON description."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec.get("kind")
    if kind == "catalog":
        return _scaled(PdFunction.catalog(spec["id"], spec.get("a"), spec.get("p", 1.0)),
                       spec.get("scale", 1.0))
    if kind == "sampled":
        values = np.asarray(spec["re"], dtype=float)
        if "im" in spec:
            values = values + 1j * np.asarray(spec["im"], dtype=float)
        return PdFunction.sampled(spec["nodes"], values, normalize=spec.get("normalize", True))
    if kind == "spline":
        from .polya import SplineExtension
        return SplineExtension.from_json(spec)
    raise ValueError(f"unknown function kind {kind!r}")


def _scaled(F: PdFunction, scale: float) -> PdFunction:
    if scale == 1.0:
        return F
    out = PdFunction(F._func, F.domain, real=F.real, strict=F.strict, label=F.label,
                     spec=F._spec, normalize=False, scale=scale)
    out.params = getattr(F, "params", {})
    return out


_MEASURE_KEYS = {"catalog", "p", "atoms", "densities", "label"}


def measure_from_json(spec) -> SpectralMeasure:
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict):
        raise ValueError("a measure is a JSON object")
    unknown = set(spec) - _MEASURE_KEYS
    if unknown or not set(spec) & {"catalog", "atoms", "densities"}:
        raise ValueError(f"measure needs 'atoms' and/or 'densities' (or 'catalog'); "
                         f"unexpected keys {sorted(unknown)}")
    if "catalog" in spec:
        return catalog_measure(spec["catalog"], spec.get("p", 1.0))
    atoms = tuple((float(l), float(w)) for l, w in spec.get("atoms", []))
    dens = []
    for d in spec.get("densities", []):
        ident = d.get("id")
        if ident not in _DENSITY_FACTORIES:
            raise ValueError(f"unknown density id {ident!r}")
        dd = _DENSITY_FACTORIES[ident](d)
        if "dilation" in d:
            dd = dd.dilate(float(d["dilation"]))
        dens.append((float(d.get("weight", 1.0)), dd))
    return SpectralMeasure(atoms, tuple(dens), label=spec.get("label", ""))
