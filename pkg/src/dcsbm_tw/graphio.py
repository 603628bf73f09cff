"""Reading and writing undirected graphs.

Two text formats are supported, both 1-indexed: Matrix Market coordinate
``pattern`` files and plain edge lists with one ``u v`` pair per line.
"""

from __future__ import annotations

import numpy as np

from .model import AdjacencyMatrix

MM_BANNER = "%%MatrixMarket"
MM_HEADER = "%%MatrixMarket matrix coordinate pattern symmetric"


class GraphFormatError(ValueError):
    pass


def _pairs(lines, n, path):
    edges = []
    for lineno, line in lines:
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(f"{path}:{lineno}: expected two indices, got {line.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: non-integer index in {line.strip()!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"{path}:{lineno}: index out of range 1..{n} in {line.strip()!r}")
        edges.append((u - 1, v - 1))
    return AdjacencyMatrix.from_edges(n, edges)


def _numbered(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("%") and not s.startswith("#"):
            yield lineno, s


def read_matrix_market(path) -> AdjacencyMatrix:
    with open(path) as f:
        text = f.read()
    first = text.splitlines()[0] if text else ""
    tokens = first.lower().split()
    if len(tokens) != 5 or tokens[0] != MM_BANNER.lower():
        raise GraphFormatError(f"{path}:1: malformed Matrix Market header {first!r}")
    _, obj, fmt, field, symmetry = tokens
    if obj != "matrix" or fmt != "coordinate":
        raise GraphFormatError(f"{path}:1: unsupported Matrix Market layout {obj} {fmt}")
    if field != "pattern":
        raise GraphFormatError(f"{path}:1: unsupported field type {field!r}")
    if symmetry not in ("symmetric", "general"):
        raise GraphFormatError(f"{path}:1: unsupported symmetry {symmetry!r}")
    lines = _numbered(text)
    try:
        lineno, size = next(lines)
    except StopIteration:
        raise GraphFormatError(f"{path}: missing size line") from None
    try:
        rows, cols, nnz = (int(t) for t in size.split())
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: malformed size line {size!r}") from None
    if rows != cols:
        raise GraphFormatError(f"{path}:{lineno}: adjacency matrix must be square")
    entries = list(lines)
    if len(entries) != nnz:
        raise GraphFormatError(f"{path}: header declares {nnz} entries, found {len(entries)}")
    return _pairs(entries, rows, path)


def read_edge_list(path, n: int) -> AdjacencyMatrix:
    if n is None or n < 1:
        raise GraphFormatError("edge lists need an explicit node count n")
    with open(path) as f:
        text = f.read()
    return _pairs(_numbered(text), n, path)


def parse_graph(path, format: str = "auto", n: int | None = None) -> AdjacencyMatrix:
    """Read a graph; ``format`` is ``auto``, ``matrix_market`` or ``edge_list``."""
    if format == "auto":
        with open(path) as f:
            head = f.read(len(MM_BANNER))
        format = "matrix_market" if head == MM_BANNER else "edge_list"
    if format == "matrix_market":
        return read_matrix_market(path)
    if format == "edge_list":
        return read_edge_list(path, n)
    raise ValueError(f"unknown graph format {format!r}")


def write_matrix_market(A: AdjacencyMatrix, path) -> None:
    """Lower-triangle entries (row >= col), as the symmetric format expects."""
    e = A.edges()
    with open(path, "w") as f:
        f.write(MM_HEADER + "\n")
        f.write(f"{A.n} {A.n} {len(e)}\n")
        for u, v in sorted((int(v) + 1, int(u) + 1) for u, v in e):
            f.write(f"{u} {v}\n")


def write_edge_list(A: AdjacencyMatrix, path) -> None:
    with open(path, "w") as f:
        for u, v in A.edges():
            f.write(f"{u + 1} {v + 1}\n")
