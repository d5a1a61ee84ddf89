"""Finite-sample tests of positive definiteness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .model import DataError, DomainError, Kernel, PdFunction

PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GramReport:
    points: np.ndarray
    matrix: np.ndarray
    eigenvalues: np.ndarray
    tol: float = PSD_TOL

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def verdict(self) -> str:
        scale = max(1.0, float(np.max(np.abs(self.eigenvalues))))
        return "psd" if self.min_eigenvalue >= -self.tol * scale else "indefinite"

    @property
    def psd(self) -> bool:
        return self.verdict == "psd"

    def numerical_rank(self, rel: float = 1e-10) -> int:
        top = float(np.max(np.abs(self.eigenvalues)))
        return int(np.sum(self.eigenvalues > rel * top)) if top > 0 else 0

    def to_json(self) -> dict:
        return {"op": "pd_check", "verdict": self.verdict, "min_eigenvalue": self.min_eigenvalue,
                "max_eigenvalue": self.max_eigenvalue, "n_points": int(self.points.size),
                "points": self.points.tolist()}


def gram_matrix(F, points) -> np.ndarray:
    """Matrix of F(x_i - x_j)."""
    p = np.asarray(points, dtype=float).ravel()
    diff = p[:, None] - p[None, :]
    dom = getattr(F, "domain", None)
    if dom is not None and np.any(~dom.contains(diff)):
        raise DomainError("some differences x_i - x_j fall outside the domain of F")
    M = np.asarray(F(diff))
    # F(-x) = conj F(x): average away interpolation round-off
    return 0.5 * (M + M.conj().T)


def _report(M, points, tol) -> GramReport:
    eig = linalg.eigvalsh(M)
    return GramReport(np.asarray(points, dtype=float), M, eig, tol)


def is_pd_grid(F, points, tol: float = PSD_TOL) -> GramReport:
    return _report(gram_matrix(F, points), points, tol)


def _kernel_matrix(K: Kernel, points) -> np.ndarray:
    M = K.matrix(np.asarray(points, dtype=float).ravel())
    if not np.allclose(M, M.conj().T, rtol=1e-12, atol=1e-14):
        raise ValueError("kernel matrix is not Hermitian")
    return 0.5 * (M + M.conj().T)


def kernel_pd(K: Kernel, points, tol: float = PSD_TOL) -> GramReport:
    return _report(_kernel_matrix(K, points), np.asarray(points, dtype=float).ravel(), tol)


@dataclass(frozen=True)
class Domination:
    holds: bool
    minimal_A: float
    A: float | None
    leak: float


def domination(K, F, points, A: float | str = "auto", cutoff: float = 1e-12,
               tol: float = PSD_TOL) -> Domination:
    """Is A * Gram(F) - Gram(K) positive semidefinite?

    ``minimal_A`` is the top generalized eigenvalue of the pencil restricted
    to the numerical range of Gram(F); it is infinite when Gram(K) has weight
    outside that range.
    """
    GK = _kernel_matrix(K, points) if isinstance(K, Kernel) else gram_matrix(K, points)
    GF = gram_matrix(F, points)
    lam, V = linalg.eigh(GF)
    top = float(np.max(np.abs(lam)))
    if top == 0:
        raise DataError("Gram(F) vanishes on these points")
    keep = lam > cutoff * top
    Vr, lr = V[:, keep], lam[keep]
    S = (Vr.conj().T @ GK @ Vr) / np.sqrt(np.outer(lr, lr))
    minimal = float(max(0.0, linalg.eigvalsh(0.5 * (S + S.conj().T))[-1]))
    P = np.eye(len(points)) - Vr @ Vr.conj().T
    leak_mat = P @ GK @ P
    leak = float(np.max(np.abs(leak_mat))) / max(1.0, float(np.max(np.abs(GK))))
    if leak > 1e-8:
        minimal = float("inf")
    if A == "auto":
        return Domination(bool(np.isfinite(minimal)), minimal, None, leak)
    D = float(A) * GF - GK
    ev = linalg.eigvalsh(0.5 * (D + D.conj().T))
    scale = max(1.0, float(np.max(np.abs(ev))))
    return Domination(bool(ev[0] >= -tol * scale), minimal, float(A), leak)


def _uniform_spacing(x) -> float:
    x = np.asarray(x, dtype=float)
    h = np.diff(x)
    if np.any(h <= 0) or not np.allclose(h, h[0], rtol=1e-8, atol=0):
        raise DataError("samples must sit on a uniform increasing grid")
    return float(h[0])


@dataclass(frozen=True)
class PolyaCheck:
    passed: bool
    failures: list = field(default_factory=list)


def polya_criterion(values, x=None, h: float | None = None, tol: float = 1e-9) -> PolyaCheck:
    """Pólya's sufficient condition on samples of f over [0, c]: f(0)=1,
    nonincreasing, convex and vanishing at c."""
    f = np.asarray(values, dtype=float)
    if f.size < 4:
        raise DataError("need at least 4 samples")
    if h is None:
        h = 1.0 if x is None else _uniform_spacing(x)
    failures = []
    if abs(f[0] - 1.0) > 1e-9:
        failures.append(("normalization", 0, float(f[0])))
    d1 = np.diff(f)
    for i in np.flatnonzero(d1 > 1e-12):
        failures.append(("monotonicity", int(i), float(d1[i])))
    d2 = np.diff(f, 2)
    for i in np.flatnonzero(d2 < -tol * h * h):
        failures.append(("convexity", int(i + 1), float(d2[i])))
    if abs(f[-1]) > 1e-8:
        failures.append(("decay", f.size - 1, float(f[-1])))
    if np.any(f < -1e-12):
        failures.append(("sign", int(np.argmin(f)), float(f.min())))
    return PolyaCheck(not failures, failures)


@dataclass(frozen=True)
class MonotoneCheck:
    passed: bool
    worst: dict


def completely_monotone(values, max_order: int = 4, tol: float = 1e-12) -> MonotoneCheck:
    """(-1)^k times the k-th forward difference must be >= 0 for k <= max_order."""
    q = np.asarray(values, dtype=float)
    if not 0 <= max_order <= 6:
        raise ValueError("max_order must be between 0 and 6")
    if q.size < max_order + 2:
        raise DataError(f"need at least {max_order + 2} samples for order {max_order}")
    scale = max(1.0, float(np.max(np.abs(q))))
    worst, ok = {}, True
    for k in range(max_order + 1):
        d = (-1) ** k * np.diff(q, k)
        worst[k] = float(d.min())
        if worst[k] < -tol * scale * 2 ** k:
            ok = False
    return MonotoneCheck(ok, worst)
