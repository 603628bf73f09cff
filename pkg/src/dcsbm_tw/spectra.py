"""Eigenvalues of real symmetric matrices and comparisons with the semicircle law."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

SYMMETRY_TOL = 1e-10
MAX_QL_SWEEPS = 50
ESD_PAD = 1e-9


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralSummary:
    """Eigenvalues sorted in descending order."""

    eigenvalues: np.ndarray
    residual: float = float("nan")

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class EsdHistogram:
    edges: np.ndarray
    counts: np.ndarray
    n: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.n * np.diff(self.edges))

    def to_csv(self, path, overlay=None) -> None:
        """Write ``bin_center,density`` rows; ``overlay`` adds a named column
        evaluated at the bin centers, e.g. ``("rho_sc", semicircle_pdf)``."""
        cols = [self.centers, self.density]
        header = "bin_center,density"
        if overlay is not None:
            name, fn = overlay
            cols.append(fn(self.centers))
            header += f",{name}"
        np.savetxt(path, np.column_stack(cols), delimiter=",", fmt="%.17g",
                   header=header, comments="")


def _check_symmetric(M) -> np.ndarray:
    M = np.array(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if np.abs(M - M.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return M


def householder_tridiagonal(M):
    """Reduce symmetric ``M`` to tridiagonal form by Householder reflections.

    Returns the diagonal ``d`` and the sub-diagonal ``e`` (length ``n - 1``).
    """
    A = np.array(M, dtype=np.float64)
    n = A.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = A[k + 1:, k]
        norm = np.linalg.norm(x)
        d[k] = A[k, k]
        if norm == 0.0:
            continue
        alpha = -math.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        S = A[k + 1:, k + 1:]
        p = S @ v
        w = p - (v @ p) * v
        S -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        e[k] = alpha
    if n >= 2:
        d[n - 2] = A[n - 2, n - 2]
        e[n - 2] = A[n - 1, n - 2]
    if n >= 1:
        d[n - 1] = A[n - 1, n - 1]
    return d, e


def tridiagonal_ql(d, e):
    """Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL."""
    d = [float(v) for v in d]
    n = len(d)
    e = [float(v) for v in e] + [0.0]
    anorm = max((abs(a) + abs(b) for a, b in zip(d, e)), default=0.0)
    tol = np.finfo(float).eps * anorm
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1 and abs(e[m]) > tol:
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > MAX_QL_SWEEPS:
                raise EigensolverError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(d)


def symmetric_eigenvalues(M, method: str = "lapack") -> SpectralSummary:
    """Full spectrum of a real symmetric matrix.

    ``method="lapack"`` calls LAPACK ``dsyev`` (Householder tridiagonalization
    then root-free implicit QL/QR).  ``method="householder_ql"`` runs the
    same algorithm in Python; it is slow and meant for cross-checks.
    """
    M = _check_symmetric(M)
    if M.shape[0] == 0:
        raise ValueError("empty matrix")
    if method == "lapack":
        vals = scipy.linalg.eigvalsh(M, driver="ev", check_finite=False)
    elif method == "householder_ql":
        vals = tridiagonal_ql(*householder_tridiagonal(M))
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectralSummary(np.sort(vals)[::-1].copy())


def extreme_eigenvalues(M) -> tuple[float, float]:
    s = symmetric_eigenvalues(M)
    return s.lambda_max, s.lambda_min


def esd(summary: SpectralSummary, bins: int) -> EsdHistogram:
    if bins < 1:
        raise ValueError("bins must be positive")
    lam = summary.eigenvalues
    edges = np.linspace(lam.min() - ESD_PAD, lam.max() + ESD_PAD, bins + 1)
    counts, _ = np.histogram(lam, bins=edges)
    return EsdHistogram(edges, counts, len(lam))


def semicircle_pdf(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sqrt(np.clip(4.0 - x * x, 0.0, None)) / (2.0 * np.pi)


def semicircle_cdf(x):
    x = np.asarray(x, dtype=np.float64)
    xc = np.clip(x, -2.0, 2.0)
    val = 0.5 + (xc * np.sqrt(4.0 - xc * xc) + 4.0 * np.arcsin(xc / 2.0)) / (4.0 * np.pi)
    val = np.where(x <= -2.0, 0.0, np.where(x >= 2.0, 1.0, val))
    return val if val.ndim else float(val)


def semicircle_quantile(p):
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if ((p < 0) | (p > 1)).any():
        raise ValueError("probabilities must lie in [0, 1]")
    out = np.empty_like(p)
    for i, pi in enumerate(p):
        if pi == 0.0:
            out[i] = -2.0
        elif pi == 1.0:
            out[i] = 2.0
        else:
            out[i] = brentq(lambda x: semicircle_cdf(x) - pi, -2.0, 2.0, xtol=1e-15)
    return out


def ks_distance_to_semicircle(summary) -> float:
    """Kolmogorov-Smirnov distance between the ESD and the semicircle law.

    Accepts a :class:`SpectralSummary` or a plain array of eigenvalues.
    """
    lam = summary.eigenvalues if isinstance(summary, SpectralSummary) else summary
    lam = np.sort(np.asarray(lam, dtype=np.float64))
    n = len(lam)
    if n == 0:
        raise ValueError("need at least one eigenvalue")
    F = semicircle_cdf(lam)
    i = np.arange(1, n + 1)
    return float(max((i / n - F).max(), (F - (i - 1) / n).max()))
