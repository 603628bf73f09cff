"""Independent reference computations used only by the tests."""

import numpy as np
from scipy.optimize import brentq
from scipy.special import airy, gammainc

# Published constants for the beta = 1 Tracy-Widom law and Painleve II.
TW1_MEAN = -1.2065335745820
HASTINGS_MCLEOD_Q0 = 0.36706155154807
AIRY_AI0 = 0.355028053887817239
AIRY_FIRST_ZERO = -2.338107410459767

# Chiani (2014) shifted-gamma fit to TW1: Gamma(k, theta) - shift.
CHIANI_K, CHIANI_THETA, CHIANI_SHIFT = 46.446, 0.186054, 9.84801


def jacobi_eigenvalues(M, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi rotations; slow but independent of any tridiagonal path."""
    A = np.array(M, dtype=float)
    n = A.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt((A**2).sum() - (np.diag(A) ** 2).sum())
        if off < tol * max(1.0, np.abs(A).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(A[p, q]) < 1e-18 * abs(diff):
                    t = A[p, q] / diff
                else:
                    tau = diff / (2.0 * A[p, q])
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                J = A[[p, q], :].copy()
                A[p, :] = c * J[0] - s * J[1]
                A[q, :] = s * J[0] + c * J[1]
                J = A[:, [p, q]].copy()
                A[:, p] = c * J[:, 0] - s * J[:, 1]
                A[:, q] = s * J[:, 0] + c * J[:, 1]
    return np.sort(np.diag(A))[::-1]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(80)


def fredholm_tw1_cdf(s, length=14.0):
    """``F1(s) = det(I - K_s)`` with ``K_s(x, y) = Ai(x + y + s)`` on
    ``L^2(0, inf)``, discretized by Gauss-Legendre on ``(0, length)``."""
    x = (_GL_X + 1.0) * length / 2.0
    w = _GL_W * length / 2.0
    sw = np.sqrt(w)
    K = sw[:, None] * airy(x[:, None] + x[None, :] + s)[0] * sw[None, :]
    return float(np.linalg.det(np.eye(len(x)) - K))


def fredholm_tw1_quantile(p):
    return brentq(lambda s: fredholm_tw1_cdf(s) - p, -8.0, 8.0, xtol=1e-12)


def chiani_tw1_cdf(x):
    return gammainc(CHIANI_K, np.maximum((np.asarray(x) + CHIANI_SHIFT) / CHIANI_THETA, 0.0))


def shooting_hastings_mcleod_q0(y0=6.0, steps=40000):
    """Classical RK4 with fixed steps from Airy data at ``y0`` down to 0."""
    ai, aip = airy(y0)[:2]
    h = -y0 / steps
    y, q, dq = y0, ai, aip

    def f(y, q, dq):
        return dq, y * q + 2 * q**3

    for _ in range(steps):
        k1 = f(y, q, dq)
        k2 = f(y + h / 2, q + h / 2 * k1[0], dq + h / 2 * k1[1])
        k3 = f(y + h / 2, q + h / 2 * k2[0], dq + h / 2 * k2[1])
        k4 = f(y + h, q + h * k3[0], dq + h * k3[1])
        q += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        dq += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        y += h
    return q


def bernoulli_transform_values(p):
    """Values of the standardized entry when ``a = 1`` and ``a = 0``."""
    sd = np.sqrt(p * (1 - p))
    return (1 - p) / sd, -p / sd
