"""Tracy-Widom (beta = 1) distribution from the Hastings-McLeod solution of
Painleve II, ``q'' = y q + 2 q^3`` with ``q ~ Ai`` at ``+inf``.

The ODE is integrated backward from ``y_start`` together with the tail
integrals

    I0(y) = int_y^inf q,   I1(y) = int_y^inf q^2,   U(y) = int_y^inf (s - y) q(s)^2 ds,

so that ``F1(x) = exp(-(I0(x) + U(x)) / 2)`` and
``F1'(x) = F1(x) (q(x) + I1(x)) / 2`` come straight out of the state.
"""

from __future__ import annotations

import functools
import hashlib
import os
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicHermiteSpline, CubicSpline
from scipy.optimize import brentq
from scipy.special import airy

AIRY_RANGE = (-15.0, 15.0)
Y_START = 8.0
Y_END = -10.0
ODE_TOL = 1e-12
GRID_STEP = 0.005
QUANTILE_RANGE = (1e-6, 1 - 1e-6)
CACHE_ENV = "DCSBM_TW_CACHE"

_CACHE_MAGIC = b"TW1T"
_CACHE_VERSION = 1


class PainleveBlowupError(RuntimeError):
    pass


def airy_ai(y):
    """Airy function of the first kind on ``[-15, 15]``."""
    y = np.asarray(y, dtype=np.float64)
    if ((y < AIRY_RANGE[0]) | (y > AIRY_RANGE[1])).any():
        raise ValueError(f"airy_ai supports {AIRY_RANGE}, got {y}")
    ai = airy(y)[0]
    return ai if ai.ndim else float(ai)


def airy_ai_prime(y):
    y = np.asarray(y, dtype=np.float64)
    if ((y < AIRY_RANGE[0]) | (y > AIRY_RANGE[1])).any():
        raise ValueError(f"airy_ai_prime supports {AIRY_RANGE}, got {y}")
    aip = airy(y)[1]
    return aip if aip.ndim else float(aip)


@dataclass(frozen=True)
class PainleveSolution:
    """Samples of the Hastings-McLeod solution on an increasing grid."""

    y: np.ndarray
    q: np.ndarray
    dq: np.ndarray
    int_q: np.ndarray
    int_q2: np.ndarray
    int_lin_q2: np.ndarray


def _airy_tails(y0):
    # q ~ Ai beyond y0 up to O(Ai^3); Ai^2 integrals have closed antiderivatives
    ai, aip = airy(y0)[:2]
    int_q = quad(lambda t: airy(t)[0], y0, np.inf, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    F = y0 * ai**2 - aip**2
    G = (y0**2 * ai**2 - y0 * aip**2 + ai * aip) / 3.0
    return ai, aip, int_q, -F, -G + y0 * F


def _rhs(y, s):
    q, dq, _, i1, _ = s
    return [dq, y * q + 2.0 * q**3, -q, -q * q, -i1]


def _blowup(y, s):
    return abs(s[0]) - 10.0 * (1.0 + np.sqrt(abs(y)))


_blowup.terminal = True


def hastings_mcleod_solve(
    y_start: float = Y_START,
    y_end: float = Y_END,
    tol: float = ODE_TOL,
    step: float = GRID_STEP,
) -> PainleveSolution:
    """Integrate Painleve II backward from Airy data at ``y_start``.

    Uses the adaptive 8th-order Dormand-Prince pair with relative step
    tolerance ``tol`` and samples the dense output every ``step``.

    The backward problem is unstable: rounding pushes ``q`` off the
    separatrix and it drifts below ``sqrt(-y/2)`` past ``y ~ -9``.  There
    ``F1 < 1e-11``, so the distribution values are unaffected.
    """
    if y_start < 6:
        raise ValueError("y_start must be at least 6")
    if y_end > -10:
        raise ValueError("y_end must be at most -10")
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    count = int(round((y_start - y_end) / step))
    grid = np.linspace(y_start, y_end, count + 1)
    init = _airy_tails(y_start)
    sol = solve_ivp(
        _rhs, (y_start, y_end), init, method="DOP853", t_eval=grid,
        rtol=tol, atol=tol * 1e-12, events=_blowup,
    )
    if sol.status == 1 or sol.t.size != grid.size:
        where = sol.t_events[0][0] if sol.t_events[0].size else sol.t[-1]
        raise PainleveBlowupError(f"Painleve II solution blew up near y={where:.6g}")
    if sol.status != 0:
        raise PainleveBlowupError(f"ODE integration failed: {sol.message}")
    y, (q, dq, i0, i1, u) = sol.t[::-1], sol.y[:, ::-1]
    return PainleveSolution(y.copy(), q.copy(), dq.copy(), i0.copy(), i1.copy(), u.copy())


def _cdf_pdf(sol: PainleveSolution):
    F = np.exp(-0.5 * (sol.int_q + sol.int_lin_q2))
    return F, 0.5 * F * (sol.q + sol.int_q2)


@dataclass(frozen=True)
class TwTable:
    """``F1`` and its density sampled on a grid, with interpolation.

    The CDF is interpolated by cubic Hermite splines that use the exact
    density as slope; ``tol`` is the observed change of the CDF when the ODE
    tolerance is loosened 100-fold.
    """

    grid: np.ndarray
    cdf_values: np.ndarray
    pdf_values: np.ndarray
    tol: float
    _cdf_interp: CubicHermiteSpline = field(init=False, repr=False, compare=False)
    _pdf_interp: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("grid", "cdf_values", "pdf_values"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(
            self, "_cdf_interp", CubicHermiteSpline(self.grid, self.cdf_values, self.pdf_values)
        )
        object.__setattr__(self, "_pdf_interp", CubicSpline(self.grid, self.pdf_values))

    @classmethod
    def build(cls, y_start=Y_START, y_end=Y_END, tol=ODE_TOL, step=GRID_STEP) -> "TwTable":
        sol = hastings_mcleod_solve(y_start, y_end, tol, step)
        F, f = _cdf_pdf(sol)
        loose, _ = _cdf_pdf(hastings_mcleod_solve(y_start, y_end, tol * 100, step))
        return cls(sol.y, F, f, float(np.abs(F - loose).max()))

    def covers(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return (x >= self.grid[0]) & (x <= self.grid[-1])

    def cdf(self, x):
        """``F1(x)``; 0 below and 1 above the grid (see :meth:`covers`)."""
        x = np.asarray(x, dtype=np.float64)
        v = np.clip(self._cdf_interp(np.clip(x, self.grid[0], self.grid[-1])), 0.0, 1.0)
        v = np.where(x < self.grid[0], 0.0, np.where(x > self.grid[-1], 1.0, v))
        return v if v.ndim else float(v)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        v = np.clip(self._pdf_interp(np.clip(x, self.grid[0], self.grid[-1])), 0.0, None)
        v = np.where(self.covers(x), v, 0.0)
        return v if v.ndim else float(v)

    def quantile(self, p: float) -> float:
        lo, hi = QUANTILE_RANGE
        if not lo <= p <= hi:
            raise ValueError(f"p must lie in [{lo}, {hi}], got {p}")
        i = int(np.searchsorted(self.cdf_values, p))
        a, b = self.grid[max(i - 1, 0)], self.grid[min(i, len(self.grid) - 1)]
        if a == b:
            return float(a)
        return float(brentq(lambda x: self._cdf_interp(x) - p, a, b, xtol=1e-14, rtol=1e-15))

    def save(self, path) -> None:
        """Versioned header, grid/cdf/pdf as little-endian float64, SHA-256."""
        m = len(self.grid)
        payload = _CACHE_MAGIC + struct.pack("<IIQd", _CACHE_VERSION, 0, m, self.tol)
        for arr in (self.grid, self.cdf_values, self.pdf_values):
            payload += np.ascontiguousarray(arr, dtype="<f8").tobytes()
        with open(path, "wb") as f:
            f.write(payload + hashlib.sha256(payload).digest())

    @classmethod
    def load(cls, path) -> "TwTable":
        with open(path, "rb") as f:
            blob = f.read()
        payload, digest = blob[:-32], blob[-32:]
        if len(blob) < 60 or payload[:4] != _CACHE_MAGIC:
            raise ValueError(f"{path}: not a TW table cache")
        if hashlib.sha256(payload).digest() != digest:
            raise ValueError(f"{path}: checksum mismatch")
        version, _, m, tol = struct.unpack("<IIQd", payload[4:28])
        if version != _CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        data = np.frombuffer(payload[28:], dtype="<f8")
        if data.size != 3 * m:
            raise ValueError(f"{path}: truncated cache")
        return cls(data[:m], data[m:2 * m], data[2 * m:], tol)

    def to_csv(self, path_or_file, start=None, stop=None, step=None) -> None:
        """Write ``x,cdf,pdf`` rows on the table grid or a requested range."""
        if start is None:
            x = self.grid
        else:
            count = int(round((stop - start) / step))
            x = start + step * np.arange(count + 1)
        np.savetxt(path_or_file, np.column_stack([x, self.cdf(x), self.pdf(x)]),
                   delimiter=",", fmt="%.17g", header="x,cdf,pdf", comments="")


@functools.lru_cache(maxsize=1)
def default_table() -> TwTable:
    """Shared table, loaded from ``$DCSBM_TW_CACHE`` when valid, else built
    (and written there when the variable is set)."""
    path = os.environ.get(CACHE_ENV)
    if path and os.path.exists(path):
        try:
            return TwTable.load(path)
        except ValueError:
            pass
    table = TwTable.build()
    if path:
        table.save(path)
    return table


def tw1_cdf(x, table: TwTable | None = None):
    return (table or default_table()).cdf(x)


def tw1_pdf(x, table: TwTable | None = None):
    return (table or default_table()).pdf(x)


def tw1_quantile(p: float, table: TwTable | None = None) -> float:
    return (table or default_table()).quantile(p)


def tw1_upper_quantile(alpha: float, table: TwTable | None = None) -> float:
    """``G1^{-1}(alpha)`` with ``G1 = 1 - F1``."""
    return tw1_quantile(1.0 - alpha, table)
