"""Dense matrices over unbounded-precision integers.

Holds the vertex-edge incidence matrix B(G), the element-incidence
constraint matrix M(G) = [I B; B^T I], near-pencil matrices, submatrix
extraction with label tracking, and exact determinants via fraction-free
(Bareiss) elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .graphs import Element, Graph, edge_element, vertex_element


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]  # row-major
    row_labels: Optional[tuple[Element, ...]] = None
    col_labels: Optional[tuple[Element, ...]] = None

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be >= 0")
        if len(self.entries) != self.rows * self.cols:
            raise InputError("entry count does not match dimensions")
        if self.row_labels is not None and len(self.row_labels) != self.rows:
            raise InputError("row label count does not match row count")
        if self.col_labels is not None and len(self.col_labels) != self.cols:
            raise InputError("column label count does not match column count")

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise InputError(f"index ({r},{c}) out of range")
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> tuple[int, ...]:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(r)) for r in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


def matrix_from_rows(rows: Sequence[Sequence[int]],
                     row_labels=None, col_labels=None) -> ExactMatrix:
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    for r in rows:
        if len(r) != nc:
            raise InputError("ragged rows")
    flat = tuple(int(x) for r in rows for x in r)
    return ExactMatrix(nr, nc, flat, row_labels, col_labels)


def identity(n: int) -> ExactMatrix:
    return ExactMatrix(n, n, tuple(
        1 if i == j else 0 for i in range(n) for j in range(n)))


def incidence_matrix(g: Graph) -> ExactMatrix:
    """B(G): rows labeled by vertices, columns by edges, 1 iff endpoint."""
    entries = []
    for v in range(1, g.n + 1):
        for i in range(1, g.m + 1):
            entries.append(1 if v in g.edge_endpoints(i) else 0)
    return ExactMatrix(
        g.n, g.m, tuple(entries),
        row_labels=tuple(vertex_element(v) for v in range(1, g.n + 1)),
        col_labels=tuple(edge_element(i) for i in range(1, g.m + 1)))


def constraint_matrix(g: Graph) -> ExactMatrix:
    """M(G) = [I B; B^T I]: the incidence-relation matrix on elements.

    Rows and columns are labeled by the elements of g, vertices 1..n first
    and then edges in input order; entry(a, b) = 1 iff a and b are incident.
    """
    labels = g.elements()
    size = len(labels)
    entries = [0] * (size * size)
    for i in range(size):
        entries[i * size + i] = 1
    for i, (u, v, _w) in enumerate(g.edges):
        er = g.n + i  # row/col position of edge i+1
        for p in (u - 1, v - 1):
            entries[p * size + er] = 1
            entries[er * size + p] = 1
    return ExactMatrix(size, size, tuple(entries),
                       row_labels=labels, col_labels=labels)


def near_pencil(k: int) -> ExactMatrix:
    """N_k = [1 1^T; 1 I], the (1+k) x (1+k) incidence matrix of a vertex
    with k incident edges. Its determinant is 1 - k."""
    if k < 1:
        raise InputError("near-pencil order must be >= 1")
    size = 1 + k
    entries = []
    entries.extend([1] * size)
    for i in range(1, size):
        row = [1] + [0] * k
        row[i] = 1
        entries.extend(row)
    return ExactMatrix(size, size, tuple(entries))


def extract(m: ExactMatrix,
            row_subset: Sequence[int],
            col_subset: Sequence[int]) -> ExactMatrix:
    """Submatrix m[row_subset, col_subset] with inherited labels.

    Index lists must be in range and duplicate-free; order is preserved.
    """
    rows = list(row_subset)
    cols = list(col_subset)
    for r in rows:
        if not (0 <= r < m.rows):
            raise InputError(f"row index {r} out of range")
    for c in cols:
        if not (0 <= c < m.cols):
            raise InputError(f"column index {c} out of range")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise InputError("duplicate indices in selector")
    entries = tuple(m.entries[r * m.cols + c] for r in rows for c in cols)
    rl = tuple(m.row_labels[r] for r in rows) if m.row_labels else None
    cl = tuple(m.col_labels[c] for c in cols) if m.col_labels else None
    return ExactMatrix(len(rows), len(cols), entries, rl, cl)


def determinant(m: ExactMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination.

    The empty 0x0 matrix has determinant 1 (empty product).
    """
    if not m.is_square:
        raise InputError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    return det_bareiss(m.to_lists())


def det_bareiss(a: list[list[int]]) -> int:
    """In-place Bareiss elimination on a list-of-lists integer matrix."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n):
        # Pivot: first row at or below k with a nonzero entry in column k.
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def matrix_to_text(m: ExactMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for r in range(m.rows):
        lines.append(" ".join(str(x) for x in m.row(r)))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> ExactMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty matrix dump")
    try:
        nr, nc = (int(x) for x in lines[0].split())
    except ValueError:
        raise InputError("first line must be '<rows> <cols>'") from None
    if len(lines) - 1 != nr:
        raise InputError(f"expected {nr} data rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [int(x) for x in ln.split()]
        if len(row) != nc:
            raise InputError("row width does not match header")
        rows.append(row)
    if nr == 0:
        return ExactMatrix(0, nc, ())
    return matrix_from_rows(rows)
