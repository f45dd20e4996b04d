"""Bit-packed linear algebra over GF(2).

A :class:`BitMatrix` stores each row as little-endian 64-bit words, so column
``j`` lives in word ``j // 64`` at bit ``j % 64``.  Row operations are word-wise
XORs vectorized over all affected rows.  Vectors are passed around as 1-D
numpy arrays of 0/1 values.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotInRowSpace

WORD = 64
_ONE = np.uint64(1)


def _words(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    if rows == 0:
        return np.zeros((0, _words(cols)), dtype=np.uint64)
    padded = np.zeros((rows, _words(cols) * WORD), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    as_bytes = np.packbits(padded, axis=1, bitorder="little")
    return as_bytes.view("<u8").astype(np.uint64).reshape(rows, -1)


def _unpack(data: np.ndarray, cols: int) -> np.ndarray:
    rows = data.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(data.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


class BitMatrix:
    """Dense GF(2) matrix with bit-packed rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if data is None:
            data = np.zeros((self.rows, _words(self.cols)), dtype=np.uint64)
        if data.shape != (self.rows, _words(self.cols)):
            raise DimensionMismatch(f"packed data shape {data.shape} does not fit {rows}x{cols}")
        self.data = data

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray, cols: int | None = None) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim == 1:
            arr = arr.reshape(0, cols or 0) if arr.size == 0 else arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionMismatch("expected a two-dimensional 0/1 array")
        if cols is not None and arr.shape[1] != cols:
            raise DimensionMismatch(f"expected {cols} columns, got {arr.shape[1]}")
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], cols: int) -> "BitMatrix":
        """Rows given by index lists; repeated indices cancel in pairs."""
        supports = [np.fromiter(s, dtype=np.intp) for s in supports]
        counts = np.zeros((len(supports), cols), dtype=np.int64)
        for r, s in enumerate(supports):
            np.add.at(counts[r], s, 1)
        return cls.from_dense((counts & 1).astype(np.uint8), cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def to_dense(self) -> np.ndarray:
        return _unpack(self.data, self.cols)

    def row(self, i: int) -> np.ndarray:
        return _unpack(self.data[i : i + 1], self.cols)[0]

    def get(self, i: int, j: int) -> int:
        return int((self.data[i, j // WORD] >> np.uint64(j % WORD)) & _ONE)

    def column(self, j: int) -> np.ndarray:
        return ((self.data[:, j // WORD] >> np.uint64(j % WORD)) & _ONE).astype(np.uint8)

    def select_rows(self, idx: Sequence[int]) -> "BitMatrix":
        idx = np.asarray(idx, dtype=np.intp)
        return BitMatrix(len(idx), self.cols, self.data[idx].copy())

    def select_columns(self, idx: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense()[:, list(idx)].reshape(self.rows, len(idx)))

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if other.cols != self.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self.data, other.data]))

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if other.rows != self.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return BitMatrix.from_dense(np.hstack([self.to_dense(), other.to_dense()]))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = np.zeros((self.rows, other.data.shape[1]), dtype=np.uint64)
        left = self.to_dense().astype(bool)
        for j in np.flatnonzero(left.any(axis=0)):
            out[left[:, j]] ^= other.data[j]
        return BitMatrix(self.rows, other.cols, out)

    def mul_vec(self, v: np.ndarray) -> np.ndarray:
        """Right action ``M v`` for a column vector ``v``."""
        packed = _pack(_as_vector(v, self.cols).reshape(1, -1))[0]
        return _parity_rows(self.data & packed)

    def left_mul_vec(self, c: np.ndarray) -> np.ndarray:
        """Left action ``c M`` for a row vector ``c``."""
        c = _as_vector(c, self.rows).astype(bool)
        acc = np.bitwise_xor.reduce(self.data[c], axis=0) if c.any() else np.zeros(self.data.shape[1], np.uint64)
        return _unpack(acc.reshape(1, -1), self.cols)[0]

    def is_zero(self) -> bool:
        return not self.data.any()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _parity_rows(words: np.ndarray) -> np.ndarray:
    acc = np.bitwise_xor.reduce(words, axis=1)
    for shift in (32, 16, 8, 4, 2, 1):
        acc ^= acc >> np.uint64(shift)
    return (acc & _ONE).astype(np.uint8)


def _as_vector(v, n: int) -> np.ndarray:
    arr = np.asarray(v, dtype=np.uint8).reshape(-1) & 1
    if arr.shape[0] != n:
        raise DimensionMismatch(f"vector of length {arr.shape[0]}, expected {n}")
    return arr


def _eliminate(
    data: np.ndarray,
    cols: int,
    order: Sequence[int] | None,
    track: np.ndarray | None,
) -> list[int]:
    """In-place Gauss-Jordan elimination; returns pivot columns in row order."""
    rows = data.shape[0]
    pivots: list[int] = []
    r = 0
    for c in order if order is not None else range(cols):
        if r == rows:
            break
        w, b = divmod(c, WORD)
        bits = (data[r:, w] >> np.uint64(b)) & _ONE
        hits = np.flatnonzero(bits)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
            if track is not None:
                track[[r, p]] = track[[p, r]]
        mask = ((data[:, w] >> np.uint64(b)) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            data[mask] ^= data[r]
            if track is not None:
                track[mask] ^= track[r]
        pivots.append(c)
        r += 1
    return pivots


def _full_order(cols: int, prefer: Sequence[int] | None) -> list[int] | None:
    if prefer is None:
        return None
    seen = set()
    order = []
    for c in prefer:
        if not 0 <= c < cols:
            raise DimensionMismatch(f"preferred column {c} out of range")
        if c not in seen:
            seen.add(c)
            order.append(c)
    order.extend(c for c in range(cols) if c not in seen)
    return order


def rank(M: BitMatrix) -> int:
    return len(_eliminate(M.data.copy(), M.cols, None, None))


def rref(M: BitMatrix, prefer: Sequence[int] | None = None) -> tuple[BitMatrix, list[int], BitMatrix]:
    """Reduced row echelon form ``R = T M`` with pivot columns and the transform.

    Columns in ``prefer`` are tried as pivots first, in the given order; the rest
    follow in ascending order.  ``pivots[i]`` is the pivot column of row ``i``,
    which is ascending for the default ordering.
    """
    data = M.data.copy()
    track = BitMatrix.identity(M.rows).data if M.rows else np.zeros((0, 1), dtype=np.uint64)
    pivots = _eliminate(data, M.cols, _full_order(M.cols, prefer), track)
    return BitMatrix(M.rows, M.cols, data), pivots, BitMatrix(M.rows, M.rows, track)


def solve_membership(M: BitMatrix, v: np.ndarray) -> np.ndarray:
    """Find ``c`` with ``c M = v``; raises :class:`NotInRowSpace` if none exists."""
    v = _as_vector(v, M.cols)
    R, pivots, T = rref(M)
    coeff = np.zeros(M.rows, dtype=np.uint8)
    coeff[: len(pivots)] = v[pivots] if pivots else []
    residual = v ^ R.left_mul_vec(coeff)
    if residual.any():
        raise NotInRowSpace("vector is not in the row space")
    return T.left_mul_vec(coeff) if M.rows else coeff


def in_rowspace(M: BitMatrix, v: np.ndarray) -> bool:
    try:
        solve_membership(M, v)
    except NotInRowSpace:
        return False
    return True


def left_kernel(M: BitMatrix) -> BitMatrix:
    """Basis of ``{x : x M = 0}`` as rows."""
    R, pivots, T = rref(M)
    return T.select_rows(range(len(pivots), M.rows))


def right_kernel(M: BitMatrix) -> BitMatrix:
    """Basis of ``{x : M x = 0}`` as rows."""
    R, pivots, _ = rref(M)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    dense_r = R.to_dense()
    basis = np.zeros((len(free), M.cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = dense_r[i, f]
    return BitMatrix.from_dense(basis.reshape(len(free), M.cols))


def independent_rows(M: BitMatrix) -> list[int]:
    """Indices of the first maximal independent subset of rows, scanning top down."""
    _, pivots, _ = rref(M.transpose())
    return sorted(pivots)


def read_matrix(text: str) -> BitMatrix:
    """Parse the one-row-per-line text format; ``#`` starts a comment line."""
    rows = []
    for line_no, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"line {line_no}: only 0/1 characters allowed")
        rows.append([int(ch) for ch in line])
    if not rows:
        return BitMatrix(0, 0)
    if len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows have different lengths")
    return BitMatrix.from_dense(np.array(rows, dtype=np.uint8))


def write_matrix(M: BitMatrix, comment: str | None = None) -> str:
    lines = [f"# {line}" for line in comment.splitlines()] if comment else []
    dense = M.to_dense()
    lines.extend("".join(str(int(b)) for b in row) for row in dense)
    return "\n".join(lines) + "\n"
