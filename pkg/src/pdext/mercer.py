"""Nyström discretization of the integral operator with kernel F(x - y) on (0, a)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .bochner import QuadratureSpec, density_rule
from .model import GridSpec, Interval, Kernel, SpectralMeasure


class NumericError(RuntimeError):
    pass


def _kernel_values(F, grid: GridSpec) -> np.ndarray:
    x = grid.nodes
    if isinstance(F, Kernel):
        return F.matrix(x)
    return np.asarray(F(x[:, None] - x[None, :]))


def discretize(F, grid: GridSpec | float, n: int | None = None) -> np.ndarray:
    """Symmetrized Nyström matrix D^(1/2) K D^(1/2) with D the quadrature weights.

    ``grid`` may be a GridSpec or the length ``a`` of (0, a) (then ``n`` cells).
    """
    if not isinstance(grid, GridSpec):
        if n is None:
            raise ValueError("give a GridSpec or both a and n")
        grid = GridSpec.on(grid, n)
    if grid.n < 16:
        raise ValueError("use at least 16 nodes")
    K = _kernel_values(F, grid)
    s = np.sqrt(grid.weights)
    M = s[:, None] * K * s[None, :]
    return 0.5 * (M + M.conj().T)


def _orient(v: np.ndarray) -> np.ndarray:
    # first significant extremum gets a positive (real) value
    mag = np.abs(v)
    peak = mag.max()
    if peak == 0:
        return v
    left = np.concatenate(([0.0], mag[:-1]))
    right = np.concatenate((mag[1:], [0.0]))
    cand = np.flatnonzero((mag >= 0.5 * peak) & (mag >= left) & (mag >= right))
    i = int(cand[0]) if cand.size else int(np.argmax(mag))
    return v * (np.conj(v[i]) / mag[i])


@dataclass(frozen=True, eq=False)
class MercerDecomposition:
    """Descending eigenvalues and eigenfunction values (columns) on the grid."""

    grid: GridSpec
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.sum(self.eigenvalues))

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigenvalues > 1e-12 * self.eigenvalues[0]))

    @property
    def orthonormal(self) -> np.ndarray:
        """Eigenvectors in the symmetrized coordinates (Euclidean orthonormal)."""
        return np.sqrt(self.grid.weights)[:, None] * self.eigenvectors

    def l2_gram(self, k: int | None = None) -> np.ndarray:
        V = self.eigenvectors[:, :k]
        return V.conj().T @ (self.grid.weights[:, None] * V)

    def coefficients(self, f) -> np.ndarray:
        """L2(0,a) inner products <xi_k, f> for grid values f."""
        f = np.asarray(f)
        return self.eigenvectors.conj().T @ (self.grid.weights * f.T).T

    def reconstruct(self, N: int) -> np.ndarray:
        V = self.eigenvectors[:, :N]
        return (V * self.eigenvalues[:N]) @ V.conj().T


def eigensystem(M: np.ndarray, grid: GridSpec) -> MercerDecomposition:
    if M.shape != (grid.n, grid.n):
        raise ValueError("matrix and grid sizes differ")
    if not np.allclose(M, M.conj().T, rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(M))))):
        raise ValueError("matrix is not Hermitian")
    try:
        lam, U = linalg.eigh(M)
    except linalg.LinAlgError as exc:
        raise NumericError(str(exc)) from exc
    lam, U = lam[::-1], U[:, ::-1]
    V = U / np.sqrt(grid.weights)[:, None]
    V = np.column_stack([_orient(V[:, k]) for k in range(V.shape[1])])
    if np.isrealobj(M):
        V = V.real
    return MercerDecomposition(grid, lam, V)


def mercer(F, a: float, n: int) -> MercerDecomposition:
    grid = GridSpec.on(a, n)
    return eigensystem(discretize(F, grid), grid)


def cosine_similarity(u, v, weights=None) -> float:
    u, v = np.asarray(u), np.asarray(v)
    w = np.ones(u.shape) if weights is None else np.asarray(weights)
    num = abs(np.sum(w * np.conj(u) * v))
    return float(num / math.sqrt(np.sum(w * abs(u) ** 2) * np.sum(w * abs(v) ** 2)))


# --------------------------------------------------------------------------
# tent = 2 * min + (1 - x - y) on (0, 1/2)


@dataclass(frozen=True)
class RankOneSplit:
    residual: float
    L_eigenvalue: float
    L_eigenvalues: tuple
    slope_ratio: float
    nystrom_eigenvalues: tuple


def rank_one_split(n: int = 512) -> RankOneSplit:
    """Split the tent kernel on (0,1/2) into 2*min(x,y) plus L(x,y) = 1 - x - y.

    The L eigenvalues come from L restricted to its range span{1, x}, with the
    moments integrated exactly (two-point Gauss-Legendre).
    """
    grid = GridSpec.on(0.5, n)
    tent = Kernel(lambda x, y: 1.0 - np.abs(x - y), grid.interval)
    Lk = Kernel(lambda x, y: 1.0 - x - y, grid.interval)
    Mt = discretize(tent, grid)
    Me = discretize(Kernel.minimum(), grid)
    Ml = discretize(Lk, grid)
    residual = float(np.max(np.abs(Mt - 2 * Me - Ml)))
    gl = GridSpec.gauss_legendre(Interval(0.0, 0.5), 2)
    y, w = gl.nodes, gl.weights
    basis = np.vstack([np.ones_like(y), y])  # phi(y) = alpha + beta y
    m0 = basis @ w                          # integral of phi for alpha=1 / beta=1
    m1 = basis @ (w * y)
    # (L phi)(x) = (m0 - m1) - m0 x
    A = np.array([[m0[0] - m1[0], m0[1] - m1[1]], [-m0[0], -m0[1]]])
    ev, evec = np.linalg.eig(A)
    order = np.argsort(-ev.real)
    ev, evec = ev.real[order], evec.real[:, order]
    slope = float(evec[1, 0] / evec[0, 0])
    top = np.sort(linalg.eigvalsh(Ml))[::-1]
    return RankOneSplit(residual, float(ev[0]), tuple(ev.tolist()), slope,
                        (float(top[0]), float(top[-1])))


# --------------------------------------------------------------------------
# orthonormal basis of the RKHS through the spectral measure


def _cell_transform(D: MercerDecomposition, lam: np.ndarray, modes: int) -> np.ndarray:
    # transform of the piecewise-constant eigenfunctions: integral of xi(y) exp(-i lam y)
    x, w = D.grid.nodes, D.grid.weights
    V = D.eigenvectors[:, :modes]
    out = np.empty((lam.size, modes), dtype=complex)
    step = max(1, (1 << 22) // x.size)
    for i in range(0, lam.size, step):
        L = lam[i:i + step]
        E = np.exp(-1j * np.outer(L, x)) * (w * 1.0)
        out[i:i + step] = (E @ V) * np.sinc(np.outer(L, 0.5 * w[:1]) / np.pi)
    return out


@dataclass(frozen=True, eq=False)
class OnbReport:
    gram: np.ndarray

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.gram - np.eye(self.gram.shape[0]))))


def _panel_nodes(lo, hi, panel=0.5, order=16):
    m = max(1, int(math.ceil((hi - lo) / panel)))
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, m + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * t).ravel(), (half[:, None] * w).ravel()


def rkhs_onb(D: MercerDecomposition, mu: SpectralMeasure | None = None, modes: int = 5,
             q: QuadratureSpec | None = None, kernel: str = "difference",
             radius: float = 400.0) -> OnbReport:
    """Gram matrix of sqrt(lam_m) xi_m in the RKHS norm, computed in the spectral domain.

    ``kernel="difference"``: F = transform of ``mu`` and
    <sqrt(l_m) xi_m, sqrt(l_n) xi_n> = integral conj(xi_m^) xi_n^ dmu / sqrt(l_m l_n).
    ``kernel="min"``: min(x, y) = (1/2pi) integral (e^{i l x} - 1) conj(e^{i l y} - 1) / l^2 dl.
    """
    lam_m = D.eigenvalues[:modes]
    scale = 1.0 / np.sqrt(np.outer(lam_m, lam_m))
    if kernel == "difference":
        if mu is None:
            raise ValueError("difference kernels need their spectral measure")
        q = q or QuadratureSpec(R=radius, nodes_per_unit=16)
        G = np.zeros((modes, modes), dtype=complex)
        for loc, wt in mu.atoms:
            f = _cell_transform(D, np.array([loc]), modes)[0]
            G += wt * np.outer(f.conj(), f)
        for wd, d in mu.densities:
            nodes, weights, _, _ = density_rule(d, q, corrected=False)
            f = _cell_transform(D, nodes, modes)
            G += wd * (f.conj().T * weights) @ f
        return OnbReport(G * scale)
    if kernel == "min":
        R = radius
        xs, ws = [], []
        for lo, hi in ((-R, 0.0), (0.0, R)):
            x, w = _panel_nodes(lo, hi)
            xs.append(x)
            ws.append(w)
        lam, w = np.concatenate(xs), np.concatenate(ws)
        f = _cell_transform(D, lam, modes)
        S = (D.grid.weights[:, None] * D.eigenvectors[:, :modes]).sum(axis=0)
        f = f - S[None, :]
        G = (f.conj().T * (w / (2 * np.pi * lam ** 2))) @ f
        # the constant part of the feature leaves a 1/lam^2 tail beyond R
        G += np.outer(S.conj(), S) / (np.pi * R)
        return OnbReport(G * scale)
    raise ValueError(f"unknown kernel type {kernel!r}")


def projection_bound(D: MercerDecomposition, N: int, tol: float = 1e-10) -> bool:
    """Check Q_N >= P_N / lam_1 as quadratic forms on the discretized space."""
    if not 1 <= N <= D.rank:
        raise ValueError("N must lie between 1 and the numerical rank")
    U = D.orthonormal[:, :N]
    lam = D.eigenvalues[:N]
    Q = (U / lam) @ U.conj().T
    P = U @ U.conj().T
    diff = Q - P / lam[0]
    ev = linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return bool(ev[0] >= -tol * max(1.0, float(np.max(np.abs(ev)))))


# --------------------------------------------------------------------------
# Shannon sampling in the Fourier domain


def sha_shift(t, n):
    """Sha(pi (n - t)) with Sha(z) = e^{iz} sin(z)/z."""
    t = np.asarray(t, dtype=float)
    return np.exp(-1j * np.pi * t) * (-1.0) ** (n % 2) * np.sinc(t - n)


def _lattice_nodes(mu: SpectralMeasure, radius: float, npu: int):
    """Nodes/weights in the lattice variable t = lam / (2 pi)."""
    nu = mu.dilate(1.0 / (2 * np.pi))
    q = QuadratureSpec(R=radius, nodes_per_unit=npu)
    ts, ws = [np.array([l for l, _ in nu.atoms])], [np.array([w for _, w in nu.atoms])]
    for wd, d in nu.densities:
        nodes, weights, _, _ = density_rule(d, q, corrected=False)
        ts.append(nodes)
        ws.append(wd * weights)
    return np.concatenate(ts), np.concatenate(ws)


def _transform_rows(t, w, x, weights_t):
    x = np.asarray(x, dtype=float)
    out = np.empty(x.size, dtype=complex)
    step = max(1, (1 << 22) // max(1, t.size))
    for i in range(0, x.size, step):
        out[i:i + step] = np.exp(2j * np.pi * np.outer(x[i:i + step], t)) @ (w * weights_t)
    return out


def shannon_functions(mu: SpectralMeasure, n: int, x, radius: float = 2048.0,
                      nodes_per_unit: int = 64) -> np.ndarray:
    """f_n(x) = integral of exp(i 2 pi t x) Sha(pi (n - t)) dnu(t), nu = mu pushed to t = lam/2pi."""
    t, w = _lattice_nodes(mu, max(radius, 4.0 * (abs(n) + 8)), nodes_per_unit)
    return _transform_rows(t, w, x, sha_shift(t, n))


def lattice_sum(t, N: int) -> np.ndarray:
    """sum over |n| <= N of Sha(pi (n - t))."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for n in range(-N, N + 1):
        out += (-1.0) ** (n % 2) * np.sinc(t - n)
    return np.exp(-1j * np.pi * t) * out


@dataclass(frozen=True)
class ShannonVerdict:
    passed: bool
    sup_error: float
    N_used: int
    errors: tuple

    def to_json(self):
        return {"op": "ext_membership_shannon", "pass": self.passed, "sup_error": self.sup_error,
                "N_used": self.N_used, "errors": list(self.errors)}


def ext_membership_shannon(F, mu: SpectralMeasure, x=None, N_max: int = 64, tol: float = 1e-3,
                           nodes_per_unit: int = 64) -> ShannonVerdict:
    """Compare the partial lattice sums of Shannon functions with F on (-1, 1).

    A function on (-a, a) is rescaled to (-1, 1) together with its measure.
    """
    a = getattr(F, "a", 1.0)
    if not math.isfinite(a):
        a = 1.0
    if x is None:
        x = np.linspace(-1.0, 1.0, 101)[1:-1]
    x = np.asarray(x, dtype=float)
    target = np.asarray(F(a * x), dtype=complex)
    nu_mu = mu.dilate(a) if a != 1.0 else mu
    ladder = sorted({min(N_max, 2 ** k) for k in range(0, int(math.log2(max(1, N_max))) + 2)})
    errors = []
    for N in ladder:
        t, w = _lattice_nodes(nu_mu, max(256.0, 32.0 * (N + 1)), nodes_per_unit)
        approx = _transform_rows(t, w, x, lattice_sum(t, N))
        err = float(np.max(np.abs(approx - target)))
        errors.append((N, err))
        if err <= tol:
            return ShannonVerdict(True, err, N, tuple(errors))
    return ShannonVerdict(False, errors[-1][1], ladder[-1], tuple(errors))


@dataclass(frozen=True)
class BesselCheck:
    holds: bool
    lhs: tuple
    rhs: tuple


def bessel_frame_bound(D: MercerDecomposition, shannon_values: np.ndarray, tests,
                       tol: float = 1e-8) -> BesselCheck:
    """Check sum_n |<f_n, xi>_H|^2 <= lam_1 ||xi||_H^2.

    ``shannon_values`` holds f_n on the grid of ``D`` (one row per n); each
    test vector gives coefficients b_k of xi = sum b_k sqrt(lam_k) xi_k.
    """
    fv = np.atleast_2d(np.asarray(shannon_values, dtype=complex))
    lhs, rhs, ok = [], [], True
    for b in tests:
        b = np.asarray(b, dtype=complex)
        K = b.size
        c = D.coefficients(fv.T)[:K]          # (K, #n) L2 coefficients of f_n
        inner = (c.conj() * (b / np.sqrt(D.eigenvalues[:K]))[:, None]).sum(axis=0)
        left = float(np.sum(np.abs(inner) ** 2))
        right = float(D.eigenvalues[0] * np.sum(np.abs(b) ** 2))
        lhs.append(left)
        rhs.append(right)
        ok = ok and left <= right + tol
    return BesselCheck(ok, tuple(lhs), tuple(rhs))
