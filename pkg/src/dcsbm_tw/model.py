"""Degree-corrected stochastic block model: parameters, validation, sampling.

Node and community indices are 0-based in memory.  The JSON form of a
parameter set uses 1-based community labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .rng import derive_seed, entry_uniforms

THETA_SUM_TOL = 1e-12

ALTERNATIVE_BLOCK_MATRIX = np.array(
    [
        [0.4, 0.2, 0.2],
        [0.2, 0.6, 0.3],
        [0.2, 0.3, 0.5],
    ]
)
X_LOW, X_HIGH = 0.1, 0.9
NULL_EPSILON = X_LOW**2 / 2
ALTERNATIVE_EPSILON = ALTERNATIVE_BLOCK_MATRIX.min() * X_LOW**2

# rows per block when sampling; bounds peak memory at large n
_SAMPLE_BLOCK = 256


@dataclass(frozen=True)
class DcsbmParams:
    """Parameters ``(n, k, epsilon, phi, theta, W)`` of a DCSBM.

    Edge ``(i, j)`` is present with probability
    ``theta[i] * theta[j] * W[phi[i], phi[j]]``.  Construction only checks
    shapes; use :func:`validate_params` for the model constraints.
    """

    n: int
    k: int
    epsilon: float
    phi: np.ndarray
    theta: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=np.int64)
        theta = np.array(self.theta, dtype=np.float64)
        W = np.array(self.W, dtype=np.float64)
        if phi.shape != (self.n,) or theta.shape != (self.n,):
            raise ValueError(f"phi and theta must have length n={self.n}")
        if W.shape != (self.k, self.k):
            raise ValueError(f"W must be {self.k}x{self.k}, got {W.shape}")
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be positive")
        if phi.min() < 0 or phi.max() >= self.k:
            raise ValueError("phi entries must lie in [0, k)")
        for arr in (phi, theta, W):
            arr.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "epsilon", float(self.epsilon))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "epsilon": self.epsilon,
            "phi": [int(c) + 1 for c in self.phi],
            "theta": self.theta.tolist(),
            "W": self.W.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DcsbmParams":
        expected = {"n", "k", "epsilon", "phi", "theta", "W"}
        keys = set(d)
        if keys != expected:
            raise ValueError(
                f"parameter document keys {sorted(keys)} != {sorted(expected)}"
            )
        phi = np.asarray(d["phi"], dtype=np.int64) - 1
        return cls(d["n"], d["k"], d["epsilon"], phi, d["theta"], d["W"])

    @classmethod
    def from_json(cls, text: str) -> "DcsbmParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric 0/1 matrix; the diagonal holds self-loops."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got {a.shape}")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        a = a.astype(np.uint8)
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges) -> "AdjacencyMatrix":
        """Build from 0-based ``(u, v)`` pairs; duplicates collapse to one edge."""
        a = np.zeros((n, n), dtype=np.uint8)
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise IndexError(f"edge index out of range for n={n}")
        a[edges[:, 0], edges[:, 1]] = 1
        a[edges[:, 1], edges[:, 0]] = 1
        return cls(a)

    def edges(self) -> np.ndarray:
        """Upper-triangle edges ``(u, v)`` with ``u <= v``, row-major order."""
        u, v = np.nonzero(np.triu(self.entries))
        return np.column_stack([u, v])

    def __eq__(self, other):
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass
class Violation:
    constraint: str
    indices: list = field(default_factory=list)

    def __str__(self):
        if self.indices:
            return f"{self.constraint} at {self.indices}"
        return self.constraint


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"constraint": v.constraint, "indices": v.indices}
                for v in self.violations
            ],
        }


def _first(idx, limit=10):
    return [list(map(int, t)) if np.ndim(t) else int(t) for t in idx[:limit]]


def validate_params(params: DcsbmParams) -> ValidationReport:
    """Check every DCSBM constraint; violations are returned, never raised."""
    n, k = params.n, params.k
    phi, theta, W = params.phi, params.theta, params.W
    out = []

    if not k < n:
        out.append(Violation("k < n"))
    if not 0 < params.epsilon <= 0.5:
        out.append(Violation("epsilon in (0, 1/2]"))

    counts = np.bincount(phi, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        out.append(Violation("phi surjective onto [k]", _first(empty)))

    bad = np.flatnonzero(~((theta > 0) & (theta <= 1)))
    if bad.size:
        out.append(Violation("theta in (0, 1]", _first(bad)))

    sums = np.bincount(phi, weights=theta, minlength=k)
    bad = np.flatnonzero(np.abs(sums - 1.0) > THETA_SUM_TOL)
    if bad.size:
        out.append(Violation("per-community theta sum != 1", _first(bad)))

    if not np.array_equal(W, W.T):
        bad = np.argwhere(W != W.T)
        out.append(Violation("W symmetric", _first(bad)))
    bad = np.argwhere(~(W >= 0))
    if bad.size:
        out.append(Violation("W nonnegative", _first(bad)))
    n_comp, _ = connected_components(csr_matrix(W > 0), directed=False)
    if n_comp > 1:
        out.append(Violation("W not irreducible"))

    p = np.outer(theta, theta) * W[np.ix_(phi, phi)]
    eps = params.epsilon
    bad = np.argwhere(~((p >= eps) & (p <= 1 - eps)))
    if bad.size:
        out.append(Violation("edge probability in [epsilon, 1 - epsilon]", _first(bad)))

    return ValidationReport(out)


def edge_probability(params: DcsbmParams, i: int, j: int) -> float:
    n = params.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"node index out of range: ({i}, {j}) for n={n}")
    th, phi = params.theta, params.phi
    return float(th[i] * th[j] * params.W[phi[i], phi[j]])


def edge_probabilities(params: DcsbmParams, rows=None) -> np.ndarray:
    """Matrix of edge probabilities; ``rows`` restricts to a row slice."""
    rows = slice(None) if rows is None else rows
    th, phi = params.theta, params.phi
    return np.outer(th[rows], th) * params.W[np.ix_(phi[rows], phi)]


def sample_adjacency(params: DcsbmParams, seed: int) -> AdjacencyMatrix:
    """Draw ``A ~ DCSBM(params)``.

    Entry ``(i, j)`` with ``i <= j`` is ``1`` iff the counter-based uniform
    for ``(seed, i, j)`` falls below ``p_ij``; the lower triangle mirrors it.
    """
    n = params.n
    a = np.zeros((n, n), dtype=np.uint8)
    cols = np.arange(n, dtype=np.uint64)
    for r0 in range(0, n, _SAMPLE_BLOCK):
        r1 = min(n, r0 + _SAMPLE_BLOCK)
        rows = np.arange(r0, r1, dtype=np.uint64)[:, None]
        u = entry_uniforms(seed, rows, cols[None, :])
        block = u < edge_probabilities(params, slice(r0, r1))
        a[r0:r1] = np.triu(block, k=r0)
    a |= np.triu(a, 1).T
    return AdjacencyMatrix(a)


def canonicalize(phi, theta_raw, W_raw, epsilon: Optional[float] = None) -> DcsbmParams:
    """Rescale so each community's affinities sum to one.

    ``theta_i / s_mu`` and ``W_mu_nu * s_mu * s_nu`` with ``s_mu`` the
    community sums leave every edge probability unchanged.  When
    ``epsilon`` is omitted the tightest margin admitted by the realized
    probabilities is used.
    """
    phi = np.asarray(phi, dtype=np.int64)
    theta_raw = np.asarray(theta_raw, dtype=np.float64)
    W_raw = np.asarray(W_raw, dtype=np.float64)
    k = W_raw.shape[0]
    s = np.bincount(phi, weights=theta_raw, minlength=k)
    if np.any(s == 0):
        raise ValueError(f"community affinity sum is zero for {np.flatnonzero(s == 0).tolist()}")
    theta = theta_raw / s[phi]
    W = W_raw * np.outer(s, s)
    if epsilon is None:
        p = np.outer(theta_raw, theta_raw) * W_raw[np.ix_(phi, phi)]
        epsilon = float(min(p.min(), 1 - p.max(), 0.5))
    return DcsbmParams(len(phi), k, epsilon, phi, theta, W)


def null_params(x) -> DcsbmParams:
    """One community with ``p_ij = x_i x_j / 2``."""
    x = np.asarray(x, dtype=np.float64)
    phi = np.zeros(len(x), dtype=np.int64)
    return canonicalize(phi, x, [[0.5]], epsilon=NULL_EPSILON)


def alternative_params(x) -> DcsbmParams:
    """Three equal communities with ``p_ij = M[phi_i, phi_j] x_i x_j``."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    if n % 3:
        raise ValueError(f"n must be divisible by 3, got {n}")
    phi = np.repeat(np.arange(3), n // 3)
    return canonicalize(phi, x, ALTERNATIVE_BLOCK_MATRIX, epsilon=ALTERNATIVE_EPSILON)


def draw_affinities(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(derive_seed(seed, 0x51))
    return rng.uniform(X_LOW, X_HIGH, size=n)


def generate_null_experiment(n: int, seed: int) -> DcsbmParams:
    if n < 2:
        raise ValueError("n must be at least 2")
    return null_params(draw_affinities(n, seed))


def generate_alternative_experiment(n: int, seed: int) -> DcsbmParams:
    if n % 3:
        raise ValueError(f"n must be divisible by 3, got {n}")
    return alternative_params(draw_affinities(n, seed))


def raw_affinities(params: DcsbmParams, x) -> tuple[np.ndarray, np.ndarray]:
    """Undo :func:`canonicalize` given the raw affinities ``x``.

    Returns ``(x, W_raw)`` with ``W_raw = W / (s s^T)`` for the community
    sums ``s`` of ``x``.
    """
    x = np.asarray(x, dtype=np.float64)
    s = np.bincount(params.phi, weights=x, minlength=params.k)
    return x, params.W / np.outer(s, s)
