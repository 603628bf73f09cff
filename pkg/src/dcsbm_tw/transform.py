"""Entrywise centering and rescaling of an adjacency matrix.

The oracle transform uses the true edge probabilities; the estimated one
replaces them by the degree-product plug-in ``d_i d_j / sum(d)``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .model import AdjacencyMatrix, DcsbmParams, edge_probabilities


class DegenerateGraphError(ValueError):
    """The graph has no edges, so degree-based estimates are undefined."""


DCT_MAGIC = b"DCT1"
FLAG_SCALED = 1
FLAG_ESTIMATED = 2


@dataclass(frozen=True)
class TransformedMatrix:
    entries: np.ndarray
    scaled: bool = False
    source: str = "estimated"
    clamp_count: int = 0

    def __post_init__(self):
        if self.source not in ("oracle", "estimated"):
            raise ValueError(f"unknown source {self.source!r}")
        e = np.asarray(self.entries, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("transformed matrix must be square")
        if not np.isfinite(e).all():
            raise ValueError("transformed matrix has non-finite entries")
        object.__setattr__(self, "entries", e)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _standardize(a, p):
    return (a - p) / np.sqrt(p * (1.0 - p))


def oracle_transform(A: AdjacencyMatrix, params: DcsbmParams) -> TransformedMatrix:
    """``(a_ij - p_ij) / sqrt(p_ij (1 - p_ij))`` with the model's ``p_ij``."""
    if A.n != params.n:
        raise ValueError(f"dimension mismatch: A is {A.n}, params.n is {params.n}")
    p = edge_probabilities(params)
    if not ((p > 0) & (p < 1)).all():
        raise ValueError("edge probabilities must lie strictly inside (0, 1)")
    return TransformedMatrix(_standardize(A.entries, p), source="oracle")


def scale(B: TransformedMatrix) -> TransformedMatrix:
    """Multiply by ``n**-0.5``."""
    if B.scaled:
        raise ValueError("matrix is already scaled")
    return TransformedMatrix(
        B.entries / np.sqrt(B.n), scaled=True, source=B.source, clamp_count=B.clamp_count
    )


def plug_in_probability(A: AdjacencyMatrix) -> np.ndarray:
    """``(A 1)(1^T A) / (1^T A 1)``; degrees count a self-loop once."""
    deg = A.entries.sum(axis=1, dtype=np.int64)
    total = int(deg.sum())
    if total == 0:
        raise DegenerateGraphError("degenerate graph: no edges")
    d = deg.astype(np.float64)
    return np.outer(d, d) / total


def estimated_transform(A: AdjacencyMatrix, clamp_floor: float | None = None) -> TransformedMatrix:
    """Standardize ``A`` with plug-in probabilities clamped into
    ``[clamp_floor, 1 - clamp_floor]``.

    ``clamp_floor`` defaults to ``1 / n**2``.  ``clamp_count`` counts clamped
    positions on and above the diagonal.
    """
    n = A.n
    if clamp_floor is None:
        clamp_floor = 1.0 / n**2
    if not 0 < clamp_floor < 0.5:
        raise ValueError(f"clamp_floor must lie in (0, 0.5), got {clamp_floor}")
    p = plug_in_probability(A)
    clamped = (p < clamp_floor) | (p > 1 - clamp_floor)
    clamp_count = int(np.triu(clamped).sum())
    if clamp_count:
        p = np.clip(p, clamp_floor, 1 - clamp_floor)
    return TransformedMatrix(_standardize(A.entries, p), clamp_count=clamp_count)


def write_dct(B: TransformedMatrix, path) -> None:
    """Binary container: ``DCT1``, u32 n, u32 flags, u32 reserved (zero),
    then float64 row-major entries; all little-endian."""
    flags = (FLAG_SCALED if B.scaled else 0) | (FLAG_ESTIMATED if B.source == "estimated" else 0)
    with open(path, "wb") as f:
        f.write(DCT_MAGIC + struct.pack("<III", B.n, flags, 0))
        f.write(np.ascontiguousarray(B.entries, dtype="<f8").tobytes())


def read_dct(path) -> TransformedMatrix:
    with open(path, "rb") as f:
        head = f.read(16)
        if len(head) != 16 or head[:4] != DCT_MAGIC:
            raise ValueError(f"{path}: not a DCT1 container")
        n, flags, _ = struct.unpack("<III", head[4:])
        data = np.frombuffer(f.read(), dtype="<f8")
    if data.size != n * n:
        raise ValueError(f"{path}: expected {n * n} values, found {data.size}")
    return TransformedMatrix(
        data.reshape(n, n).astype(np.float64),
        scaled=bool(flags & FLAG_SCALED),
        source="estimated" if flags & FLAG_ESTIMATED else "oracle",
    )


def write_csv(B: TransformedMatrix, path) -> None:
    np.savetxt(path, B.entries, delimiter=",", fmt="%.17g")
