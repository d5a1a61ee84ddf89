"""Gaussian processes from p.d. kernels: exact finite-dimensional path sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .model import Interval, Kernel, PdFunction
from .mercer import NumericError

JITTER_LADDER = (0.0, 1e-12, 1e-10, 1e-8)


class CovKernel:
    """Covariance kernels: bm, bridge, ou(alpha), fbm(H) or a p.d. function F(s - t)."""

    def __init__(self, ident: str, alpha: float | None = None, hurst: float | None = None,
                 F: PdFunction | None = None):
        self.ident = ident
        if ident == "bm":
            self._k = np.minimum
        elif ident == "bridge":
            self._k = lambda s, t: np.minimum(s, t) - s * t
        elif ident == "ou":
            alpha = 1.0 if alpha is None else float(alpha)
            if alpha <= 0:
                raise ValueError("alpha must be positive")
            self._k = lambda s, t: np.exp(-0.5 * alpha * np.abs(s - t)) / alpha
        elif ident == "fbm":
            if hurst is None or not 0 < hurst < 1:
                raise ValueError("fbm needs a Hurst index in (0, 1)")
            self._k = Kernel.fbm(hurst)
        elif ident == "from_pd":
            if F is None:
                raise ValueError("from_pd needs a p.d. function")
            self._k = lambda s, t: np.real(F(s - t))
        else:
            raise ValueError(f"unknown kernel {ident!r}")
        self.alpha, self.hurst, self.F = alpha, hurst, F

    @property
    def label(self) -> str:
        if self.ident == "ou":
            return f"ou({self.alpha:g})"
        if self.ident == "fbm":
            return f"fbm({self.hurst:g})"
        return self.ident

    def __call__(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        return np.asarray(self._k(s, t), dtype=float)

    def kernel(self) -> Kernel:
        return Kernel(self.__call__, Interval(-math.inf, math.inf), self.label)

    def mean(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        return times.copy() if self.ident == "bridge" else np.zeros_like(times)


def cov_matrix(k: CovKernel, times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    if k.ident in ("bm", "bridge") and t[0] < 0:
        raise ValueError("Brownian times must be nonnegative")
    return k(t[:, None], t[None, :])


def cholesky_with_jitter(C: np.ndarray):
    n = C.shape[0]
    scale = float(np.trace(C)) / n
    for eps in JITTER_LADDER:
        try:
            return linalg.cholesky(C + eps * scale * np.eye(n), lower=True), eps
        except linalg.LinAlgError:
            continue
    raise NumericError("covariance is not positive definite even after maximal jitter")


def path_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for one path, fixed by (seed, index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    times: np.ndarray
    paths: np.ndarray
    seed: int
    kernel: str
    jitter: float = 0.0

    @property
    def m(self) -> int:
        return self.paths.shape[0]

    def empirical_cov(self) -> np.ndarray:
        X = self.paths - self.paths.mean(axis=0)
        return X.T @ X / (self.m - 1)


def sample_paths(k: CovKernel, times, m: int, seed: int) -> PathEnsemble:
    """m paths with law N(mean, C); the noise of path i depends only on (seed, i)."""
    t = np.asarray(times, dtype=float)
    L, eps = cholesky_with_jitter(cov_matrix(k, t))
    Z = np.empty((m, t.size))
    for i in range(m):
        Z[i] = path_stream(seed, i).standard_normal(t.size)
    paths = k.mean(t)[None, :] + Z @ L.T
    return PathEnsemble(t, paths, seed, k.label, eps)


def ou_from_bm(ens: PathEnsemble, alpha: float = 2.0, unit_variance: bool = True) -> PathEnsemble:
    """X(x) = e^{-alpha x/2} B(e^{alpha x}) from Brownian paths sampled at e^{alpha x}.

    With ``unit_variance=False`` the paths carry the extra 1/sqrt(alpha), giving
    covariance (1/alpha) e^{-alpha |x - y| / 2}.
    """
    if ens.kernel != "bm":
        raise ValueError("need a Brownian ensemble")
    x = np.log(ens.times) / alpha
    X = np.exp(-0.5 * alpha * x)[None, :] * ens.paths
    if not unit_variance:
        X = X / math.sqrt(alpha)
    return PathEnsemble(x, X, ens.seed, f"ou-from-bm({alpha:g})", ens.jitter)


@dataclass(frozen=True)
class ItoCheck:
    lhs: float
    rhs: float
    z_score: float


def ito_isometry_check(f, partition, ens: PathEnsemble) -> ItoCheck:
    """Monte-Carlo E|sum f(t_i)(X_{t_i} - X_{t_{i-1}})|^2 against sum |f(t_i)|^2 (t_i - t_{i-1})."""
    p = np.asarray(partition, dtype=float)
    idx = np.searchsorted(ens.times, p)
    if np.any(idx >= ens.times.size) or not np.allclose(ens.times[idx], p, rtol=0, atol=1e-12):
        raise ValueError("partition points must be ensemble times")
    fv = np.asarray(f(p[1:]) if callable(f) else np.asarray(f)[1:], dtype=float)
    incr = np.diff(ens.paths[:, idx], axis=1)
    sq = (incr @ fv) ** 2
    lhs = float(sq.mean())
    rhs = float(np.sum(fv ** 2 * np.diff(p)))
    se = float(sq.std(ddof=1)) / math.sqrt(sq.size)
    z = 0.0 if se == 0 else (lhs - rhs) / se
    return ItoCheck(lhs, rhs, z)


@dataclass(frozen=True, eq=False)
class CharfnCheck:
    lam: np.ndarray
    empirical: np.ndarray
    model: np.ndarray

    @property
    def sup_error(self) -> float:
        return float(np.max(np.abs(self.empirical - self.model)))


def power_series_terms(a: float, cutoff: float = 1e-12) -> int:
    return int(math.ceil(math.log(cutoff) / math.log(a)))


def random_power_series_charfn(a: float, m: int, lam, seed: int = 0) -> CharfnCheck:
    """Empirical characteristic function of sum_k w_k a^k (fair signs) vs prod cos(a^k lam)."""
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    K = power_series_terms(a)
    lam = np.asarray(lam, dtype=float)
    rng = np.random.Generator(np.random.Philox(seed))
    signs = rng.integers(0, 2, size=(m, K), dtype=np.int8) * 2 - 1
    X = signs @ (a ** np.arange(1, K + 1))
    emp = np.array([np.mean(np.exp(1j * l * X)) for l in lam.ravel()]).reshape(lam.shape)
    model = np.prod(np.cos(np.multiply.outer(lam, a ** np.arange(1, K + 1))), axis=-1)
    return CharfnCheck(lam, emp, model)


def splitting_example(x, terms: int = 60) -> np.ndarray:
    """(1/3)(e^{-ix} + prod cos(2 pi x / 3^n) + e^{i3x/2} sin(x/2)/(x/2))."""
    x = np.asarray(x, dtype=float)
    prod = np.prod(np.cos(np.multiply.outer(x, 2 * np.pi / 3.0 ** np.arange(1, terms + 1))), axis=-1)
    return (np.exp(-1j * x) + prod + np.exp(1.5j * x) * np.sinc(x / (2 * np.pi))) / 3
