"""Bit-packed linear algebra over GF(2).

Matrices are stored row-wise in 64-bit words.  Elimination runs on copies of
the packed words inside numba kernels, so ``BitMatrix`` values are immutable
once built.  Vectors (``BitVector``) are plain one-dimensional ``uint8`` numpy
arrays holding 0/1 entries.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from numba import njit

BitVector = np.ndarray

_WORD = 64


def _n_words(ncols: int) -> int:
    return max(1, (ncols + _WORD - 1) // _WORD)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into little-endian uint64 words per row."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    if dense.ndim != 2:
        raise ValueError("expected a 2-D array")
    r, c = dense.shape
    nw = _n_words(c)
    padded = np.zeros((r, nw * _WORD), dtype=np.uint8)
    padded[:, :c] = dense
    b = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(b).view(np.uint64).reshape(r, nw).copy()


def unpack_rows(packed: np.ndarray, ncols: int) -> np.ndarray:
    packed = np.ascontiguousarray(packed, dtype=np.uint64)
    r = packed.shape[0]
    b = packed.view(np.uint8).reshape(r, -1)
    return np.unpackbits(b, axis=1, bitorder="little")[:, :ncols].copy()


@njit(cache=True)
def _rref(words, ncols):
    """In-place reduced row echelon form; returns pivot columns."""
    nrows = words.shape[0]
    nw = words.shape[1]
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        sel = -1
        for i in range(rank, nrows):
            if words[i, w] & bit:
                sel = i
                break
        if sel < 0:
            continue
        if sel != rank:
            for t in range(nw):
                tmp = words[sel, t]
                words[sel, t] = words[rank, t]
                words[rank, t] = tmp
        for i in range(nrows):
            if i != rank and (words[i, w] & bit):
                for t in range(w, nw):
                    words[i, t] ^= words[rank, t]
        pivots[rank] = col
        rank += 1
    return pivots[:rank]


@njit(cache=True)
def _reduce_vector(rref_words, pivots, vec):
    """Reduce ``vec`` against an RREF basis; returns the residue (in place)."""
    for i in range(pivots.shape[0]):
        col = pivots[i]
        if vec[col >> 6] & (np.uint64(1) << np.uint64(col & 63)):
            for t in range(vec.shape[0]):
                vec[t] ^= rref_words[i, t]
    return vec


@njit(cache=True)
def _matmul_packed(a_dense, b_words):
    """Rows of A select rows of B to XOR together."""
    r = a_dense.shape[0]
    n = a_dense.shape[1]
    nw = b_words.shape[1]
    out = np.zeros((r, nw), dtype=np.uint64)
    for i in range(r):
        for j in range(n):
            if a_dense[i, j]:
                for t in range(nw):
                    out[i, t] ^= b_words[j, t]
    return out


class BitMatrix:
    """Immutable dense GF(2) matrix with bit-packed rows."""

    __slots__ = ("_words", "_rows", "_cols", "_dense", "_rref_cache")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        self._words = np.ascontiguousarray(words, dtype=np.uint64)
        self._words.setflags(write=False)
        self._rows = int(rows)
        self._cols = int(cols)
        self._dense = None
        self._rref_cache = None

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("BitMatrix needs a 2-D array")
        r, c = arr.shape
        if r == 0:
            return cls(np.zeros((0, _n_words(c)), np.uint64), 0, c)
        return cls(pack_rows(arr.astype(np.uint8) & 1), r, c)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, _n_words(cols)), np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def words(self) -> np.ndarray:
        return self._words

    @property
    def dense(self) -> np.ndarray:
        """Read-only 0/1 ``uint8`` view of the matrix."""
        if self._dense is None:
            if self._rows == 0:
                d = np.zeros((0, self._cols), np.uint8)
            else:
                d = unpack_rows(self._words, self._cols)
            d.setflags(write=False)
            self._dense = d
        return self._dense

    def to_dense(self) -> np.ndarray:
        return self.dense.copy()

    def row(self, i: int) -> BitVector:
        return self.dense[i].copy()

    def row_weights(self) -> np.ndarray:
        return self.dense.sum(axis=1).astype(np.int64)

    def rref(self) -> tuple[np.ndarray, np.ndarray]:
        """(packed RREF words, pivot columns); cached since the matrix is immutable."""
        if self._rref_cache is None:
            w = self._words.copy()
            piv = _rref(w, self._cols) if self._rows else np.zeros(0, np.int64)
            w = w[: len(piv)].copy()
            w.setflags(write=False)
            piv.setflags(write=False)
            self._rref_cache = (w, piv)
        return self._rref_cache

    def select_columns(self, cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_dense(self.dense[:, list(cols)])

    def select_rows(self, rows: Sequence[int]) -> "BitMatrix":
        return BitMatrix(self._words[list(rows)], len(rows), self._cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self):
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self._rows}x{self._cols})"


def as_bitmatrix(m) -> BitMatrix:
    return m if isinstance(m, BitMatrix) else BitMatrix.from_dense(m)


def as_bitvector(v, length: int | None = None) -> BitVector:
    v = np.asarray(v, dtype=np.uint8).reshape(-1) & 1
    if length is not None and v.shape[0] != length:
        raise ValueError(f"vector length {v.shape[0]} != {length}")
    return v


def weight(v) -> int:
    return int(np.count_nonzero(np.asarray(v)))


def rank(m) -> int:
    """Dimension of the row space over GF(2)."""
    m = as_bitmatrix(m)
    return int(len(m.rref()[1]))


def kernel_basis(m) -> list[BitVector]:
    """Basis of {v : M v = 0}, one vector per free column."""
    m = as_bitmatrix(m)
    n = m.cols
    words, piv = m.rref()
    if len(piv) == 0:
        return [np.eye(n, dtype=np.uint8)[i] for i in range(n)]
    red = unpack_rows(words, n)
    pivset = set(int(p) for p in piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        v[piv] = red[:, f]
        basis.append(v)
    return basis


def kernel_matrix(m) -> BitMatrix:
    m = as_bitmatrix(m)
    kb = kernel_basis(m)
    if not kb:
        return BitMatrix.zeros(0, m.cols)
    return BitMatrix.from_dense(np.array(kb))


def row_space_contains(m, v) -> bool:
    """True iff ``v`` is a GF(2) combination of rows of ``m``."""
    m = as_bitmatrix(m)
    v = as_bitvector(v)
    if v.shape[0] != m.cols:
        raise ValueError(f"vector length {v.shape[0]} does not match {m.cols} columns")
    words, piv = m.rref()
    packed = pack_rows(v.reshape(1, -1))[0]
    if len(piv) == 0:
        return not packed.any()
    return not _reduce_vector(words, piv, packed).any()


def mat_mul(a, b) -> BitMatrix:
    a = as_bitmatrix(a)
    b = as_bitmatrix(b)
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if a.rows == 0 or b.rows == 0:
        return BitMatrix.zeros(a.rows, b.cols)
    return BitMatrix(_matmul_packed(np.ascontiguousarray(a.dense), b.words), a.rows, b.cols)


def mat_vec(m, v) -> BitVector:
    """M v over GF(2) as a 0/1 vector."""
    m = as_bitmatrix(m)
    v = as_bitvector(v, m.cols)
    return ((m.dense.astype(np.int64) @ v.astype(np.int64)) & 1).astype(np.uint8)


def vstack(*mats) -> BitMatrix:
    mats = [as_bitmatrix(x) for x in mats]
    cols = {x.cols for x in mats}
    if len(cols) != 1:
        raise ValueError("vstack needs equal column counts")
    c = cols.pop()
    words = np.vstack([x.words for x in mats]) if mats else np.zeros((0, 1), np.uint64)
    return BitMatrix(words, sum(x.rows for x in mats), c)


def hstack(*mats) -> BitMatrix:
    mats = [as_bitmatrix(x) for x in mats]
    rows = {x.rows for x in mats}
    if len(rows) != 1:
        raise ValueError("hstack needs equal row counts")
    return BitMatrix.from_dense(np.hstack([x.dense for x in mats]).reshape(rows.pop(), -1))


def transpose(a) -> BitMatrix:
    a = as_bitmatrix(a)
    return BitMatrix.from_dense(a.dense.T) if a.rows else BitMatrix.zeros(a.cols, 0)


def solve(m, s) -> BitVector | None:
    """Return some x with M x = s, or None when s is outside the column space."""
    m = as_bitmatrix(m)
    s = as_bitvector(s)
    if s.shape[0] != m.rows:
        raise ValueError(f"syndrome length {s.shape[0]} does not match {m.rows} rows")
    n = m.cols
    if m.rows == 0:
        return np.zeros(n, np.uint8)
    aug = np.hstack([m.dense, s.reshape(-1, 1)])
    words = pack_rows(aug)
    piv = _rref(words, n + 1)
    if len(piv) and piv[-1] == n:
        return None
    red = unpack_rows(words[: len(piv)], n + 1)
    x = np.zeros(n, np.uint8)
    x[piv] = red[:, n]
    return x


def independent_rows(rows: Iterable[BitVector], base=None) -> list[int]:
    """Indices of rows that increase the rank when appended one by one."""
    rows = list(rows)
    if not rows:
        return []
    n = len(rows[0])
    cur = BitMatrix.zeros(0, n) if base is None else as_bitmatrix(base)
    keep = []
    for i, v in enumerate(rows):
        if not row_space_contains(cur, v):
            cur = vstack(cur, BitMatrix.from_dense(v))
            keep.append(i)
    return keep
