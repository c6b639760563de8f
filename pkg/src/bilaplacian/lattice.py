"""Position-space oracle: the operator truncated to the sites {-N, ..., N}.

The free part is the square of the second-difference stencil
(-1/2, 1, -1/2), i.e. the pentadiagonal stencil (1/4, -1, 3/2, -1, 1/4),
cut off at +-N (Dirichlet). The coupling subtracts ``mu`` at site 0.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, DomainError, ResolutionError
from .rootfind import newton_bisect
from .spectral import BAND_MAX, Region

LAPLACIAN_STENCIL = np.array([-0.5, 1.0, -0.5])
STENCIL = np.convolve(LAPLACIAN_STENCIL, LAPLACIAN_STENCIL)
MAX_DENSE_N = 64


@dataclass(frozen=True)
class LatticeModel:
    N: int
    mu: float
    stencil: tuple = tuple(STENCIL)

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @property
    def center(self) -> int:
        return self.N

    def bands(self, shift: float = 0.0):
        """(main, first, second) diagonals of H - shift."""
        n = self.size
        s = self.stencil
        main = np.full(n, s[2] - shift)
        main[self.center] -= self.mu
        return main, np.full(n - 1, s[3]), np.full(n - 2, s[4])

    def dense(self) -> np.ndarray:
        main, d1, d2 = self.bands()
        return np.diag(main) + np.diag(d1, 1) + np.diag(d1, -1) + np.diag(d2, 2) + np.diag(d2, -2)


def build_truncated(N: int, mu: float) -> LatticeModel:
    if N < 1:
        raise ValueError("N must be >= 1")
    return LatticeModel(int(N), float(mu))


def pentadiagonal_ldl(main, d1, d2):
    """LDL^T of a symmetric pentadiagonal matrix, no pivoting.

    Returns (D, p, r) with L[i, i-1] = p[i], L[i, i-2] = r[i].
    """
    n = len(main)
    D = np.empty(n)
    p = np.zeros(n)
    r = np.zeros(n)
    D0 = D1 = 0.0  # D[i-2], D[i-1]
    p1 = 0.0  # p[i-1]
    for i in range(n):
        ri = d2[i - 2] / D0 if i >= 2 else 0.0
        pi = (d1[i - 1] - ri * p1 * D0) / D1 if i >= 1 else 0.0
        di = main[i] - pi * pi * D1 - ri * ri * D0
        if di == 0.0 or not math.isfinite(di):
            raise DomainError(f"LDL^T breakdown at row {i}")
        D[i], p[i], r[i] = di, pi, ri
        D0, D1, p1 = D1, di, pi
    return D, p, r


def pentadiagonal_solve(main, d1, d2, rhs):
    """Solve the symmetric pentadiagonal system via :func:`pentadiagonal_ldl`."""
    D, p, r = pentadiagonal_ldl(main, d1, d2)
    n = len(main)
    y = np.array(rhs, dtype=float)
    for i in range(1, n):
        y[i] -= p[i] * y[i - 1] + (r[i] * y[i - 2] if i >= 2 else 0.0)
    y /= D
    for i in range(n - 2, -1, -1):
        y[i] -= p[i + 1] * y[i + 1] + (r[i + 2] * y[i + 2] if i + 2 < n else 0.0)
    return y


def banded_matvec(main, d1, d2, x):
    y = main * x
    y[:-1] += d1 * x[1:]
    y[1:] += d1 * x[:-1]
    y[:-2] += d2 * x[2:]
    y[2:] += d2 * x[:-2]
    return y


def _green_column(N: int, z: float):
    model = LatticeModel(N, 0.0)
    main, d1, d2 = model.bands(shift=z)
    rhs = np.zeros(model.size)
    rhs[model.center] = 1.0
    g = pentadiagonal_solve(main, d1, d2, rhs)
    resid = np.max(np.abs(banded_matvec(main, d1, d2, g) - rhs))
    scale = 1.0 + (abs(main[0]) + 2.5) * np.max(np.abs(g))
    if not resid < 1e-12 * scale:
        raise DomainError(f"banded solve at z={z} failed its residual check ({resid:.3g})")
    return g, model.center


def truncated_green(N: int, z: float) -> float:
    """Center element of (H0_N - z)^{-1}; converges to I(z)/(2 pi)."""
    g, c = _green_column(N, z)
    return float(g[c])


def truncated_green_with_derivative(N: int, z: float):
    """(g00, dg00/dz) with dg00/dz = sum_i g_i**2 (symmetry of H0_N)."""
    g, c = _green_column(N, z)
    return float(g[c]), float(g @ g)


def secular_eigenvalue(N: int, mu: float, tol: float = 1e-12) -> float:
    """Root outside [0, 4] of 1 - mu * g00(z) for the truncated lattice."""
    if mu == 0:
        raise DomainError("no eigenvalue outside the band for mu = 0")
    region = Region.BELOW if mu > 0 else Region.ABOVE
    sgn = -1.0 if region is Region.BELOW else 1.0

    def fn(d):
        z = region.energy(d)
        g, dg = truncated_green_with_derivative(N, z)
        # d/dgap of (1 - mu g) with dz/dgap = sgn
        return 1.0 - mu * g, -mu * dg * sgn

    m = abs(mu)
    hi = m
    lo = max(1e-14, m - 4.0)
    if fn(lo)[0] >= 0.0:
        raise ResolutionError(
            f"no sign change of the truncated determinant for mu={mu} at N={N}; increase N"
        )
    try:
        root = newton_bisect(fn, lo, hi, tol)
    except AccuracyError as exc:
        # Near the edge the diagonal entry 3/2 - z carries an absolute rounding
        # error ~eps*|z|, which moves 1 - mu*g00 by ~|mu| * sum(g**2) * eps*|z|.
        # A collapsed bracket with |Delta| inside that floor is as good as it gets.
        d = exc.best
        z = region.energy(d)
        _, dg = truncated_green_with_derivative(N, z)
        floor = 16.0 * abs(mu) * dg * np.finfo(float).eps * max(abs(z), BAND_MAX)
        if exc.error_estimate <= floor:
            return z
        raise
    return region.energy(root.x)


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 60):
    """Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm is
    below ``tol``. Returns eigenvalues (unsorted) and eigenvectors as columns.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(np.sum(np.triu(a, 1) ** 2) * 2.0)
        if off < tol:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise AccuracyError(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3g})")


@dataclass
class SpectrumReport:
    N: int
    mu: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def outside_band(self) -> np.ndarray:
        ev = self.eigenvalues
        return ev[(ev < 0.0) | (ev > BAND_MAX)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "eigenvalue"])
        for i, x in enumerate(self.eigenvalues):
            w.writerow([i, f"{x:.17g}"])
        return buf.getvalue()


def dense_spectrum_small(N: int, mu: float) -> SpectrumReport:
    if not 1 <= N <= MAX_DENSE_N:
        raise ValueError(f"dense spectrum is limited to 1 <= N <= {MAX_DENSE_N}")
    vals, vecs = jacobi_eigh(build_truncated(N, mu).dense())
    order = np.argsort(vals)
    return SpectrumReport(N, mu, vals[order], vecs[:, order])
