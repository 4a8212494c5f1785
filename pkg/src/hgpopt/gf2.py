"""Dense bit-packed matrices over GF(2).

Rows are stored as little-endian arrays of uint64 words: column ``j`` lives in
word ``j // 64`` at bit ``j % 64``.  Padding bits beyond ``cols`` are kept at
zero by every constructor and operation.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numba
import numpy as np

WORD = 64


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


def num_words(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into ``(rows, num_words(cols))`` uint64 words."""
    dense = np.asarray(dense)
    if dense.dtype != np.uint8 and dense.dtype != np.bool_:
        dense = (dense.astype(np.int64) & 1).astype(np.uint8)
    if dense.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got shape {dense.shape}")
    rows, cols = dense.shape
    nw = num_words(cols)
    if rows == 0 or nw == 0:
        return np.zeros((rows, nw), dtype=np.uint64)
    packed = np.packbits(dense, axis=1, bitorder="little")
    padded = np.zeros((rows, nw * 8), dtype=np.uint8)
    padded[:, : packed.shape[1]] = packed
    return padded.view("<u8").astype(np.uint64)


def unpack_rows(data: np.ndarray, cols: int) -> np.ndarray:
    rows = data.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(data.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, count=cols, bitorder="little")


@numba.njit(cache=True)
def _rank_inplace(a, ncols):
    rows = a.shape[0]
    nw = a.shape[1]
    rank = 0
    for col in range(ncols):
        if rank == rows:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, rows):
            if a[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(w, nw):
                tmp = a[piv, k]
                a[piv, k] = a[rank, k]
                a[rank, k] = tmp
        for r in range(rank + 1, rows):
            if a[r, w] & bit:
                for k in range(w, nw):
                    a[r, k] ^= a[rank, k]
        rank += 1
    return rank


@numba.njit(cache=True)
def _rref_inplace(a, ncols):
    """Reduced row echelon form; returns the pivot column of each leading row."""
    rows = a.shape[0]
    nw = a.shape[1]
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    rank = 0
    for col in range(ncols):
        if rank == rows:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, rows):
            if a[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(nw):
                tmp = a[piv, k]
                a[piv, k] = a[rank, k]
                a[rank, k] = tmp
        for r in range(rows):
            if r != rank and (a[r, w] & bit):
                for k in range(w, nw):
                    a[r, k] ^= a[rank, k]
        pivots[rank] = col
        rank += 1
    return pivots[:rank]


@numba.njit(cache=True)
def _mul_packed(a, acols, b):
    rows = a.shape[0]
    nw = b.shape[1]
    out = np.zeros((rows, nw), dtype=np.uint64)
    for i in range(rows):
        for k in range(acols):
            if (a[i, k >> 6] >> np.uint64(k & 63)) & np.uint64(1):
                for w in range(nw):
                    out[i, w] ^= b[k, w]
    return out


@numba.njit(cache=True)
def _lowest_bit(v):
    for w in range(v.shape[0]):
        x = v[w]
        if x:
            b = 0
            while not (x & np.uint64(1)):
                x >>= np.uint64(1)
                b += 1
            return w * 64 + b
    return -1


@numba.njit(cache=True)
def _extend_basis(base, candidates):
    """Greedily keep candidate rows that are independent of ``base`` and of earlier picks."""
    nw = candidates.shape[1]
    nbits = nw * 64
    owner = np.full(nbits, -1, dtype=np.int64)
    basis = np.zeros((base.shape[0] + candidates.shape[0], nw), dtype=np.uint64)
    size = 0
    keep = np.zeros(candidates.shape[0], dtype=np.bool_)
    v = np.empty(nw, dtype=np.uint64)
    for src in range(base.shape[0] + candidates.shape[0]):
        is_cand = src >= base.shape[0]
        for k in range(nw):
            v[k] = candidates[src - base.shape[0], k] if is_cand else base[src, k]
        while True:
            b = _lowest_bit(v)
            if b < 0:
                break
            o = owner[b]
            if o < 0:
                basis[size, :] = v
                owner[b] = size
                size += 1
                if is_cand:
                    keep[src - base.shape[0]] = True
                break
            for k in range(b >> 6, nw):
                v[k] ^= basis[o, k]
    return keep


class BitMatrix:
    """Immutable dense matrix over GF(2) with bit-packed rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape ({rows}, {cols})")
        nw = num_words(cols)
        if data is None:
            data = np.zeros((rows, nw), dtype=np.uint64)
        else:
            data = np.ascontiguousarray(data, dtype=np.uint64)
            if data.shape != (rows, nw):
                raise DimensionError(f"data shape {data.shape} does not match ({rows}, {nw})")
        data.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self.data = data

    # construction -------------------------------------------------------

    @classmethod
    def from_dense(cls, dense: np.ndarray | Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        arr = np.asarray(dense)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, cols or 0)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            arr = (arr.astype(np.int64) & 1).astype(np.uint8)
        return cls(arr.shape[0], arr.shape[1], pack_rows(arr))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    # views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.data, self.cols)

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def weight(self) -> int:
        return int(self.to_dense().sum())

    def is_zero(self) -> bool:
        return not self.data.any()

    def padding_ok(self) -> bool:
        """True when every bit beyond ``cols`` is zero."""
        tail = self.cols % WORD
        if tail == 0 or self.rows == 0:
            return True
        mask = np.uint64(~((1 << tail) - 1) & 0xFFFFFFFFFFFFFFFF)
        return not (self.data[:, -1] & mask).any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"BitMatrix({self.to_dense().tolist()})"
        return f"BitMatrix(<{self.rows}x{self.cols}>)"

    # algebra ----------------------------------------------------------------

    def rank(self) -> int:
        return rank(self)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mul(self, other)


def rank(m: BitMatrix) -> int:
    """Dimension of the row space; works on a scratch copy."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(_rank_inplace(m.data.copy(), m.cols))


def rref(m: BitMatrix) -> tuple[BitMatrix, np.ndarray]:
    """Reduced row echelon form and its pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, np.zeros(0, dtype=np.int64)
    work = m.data.copy()
    pivots = _rref_inplace(work, m.cols)
    return BitMatrix(m.rows, m.cols, work), pivots


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Rows spanning ``{v : m v^T = 0}``; there are ``cols - rank(m)`` of them."""
    reduced, pivots = rref(m)
    dense = reduced.to_dense()
    is_pivot = np.zeros(m.cols, dtype=bool)
    is_pivot[pivots] = True
    free = np.flatnonzero(~is_pivot)
    basis = np.zeros((free.size, m.cols), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    if pivots.size and free.size:
        # row i of the RREF reads x[pivots[i]] = sum_f R[i, f] x[f]
        basis[:, pivots] = dense[: pivots.size][:, free].T
    return BitMatrix(free.size, m.cols, pack_rows(basis))


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return BitMatrix.zeros(a.rows, b.cols)
    return BitMatrix(a.rows, b.cols, _mul_packed(a.data, a.cols, b.data))


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    dense = np.kron(a.to_dense(), b.to_dense()).reshape(a.rows * b.rows, a.cols * b.cols)
    return BitMatrix.from_dense(dense)


def hstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.rows != b.rows:
        raise DimensionError(f"row mismatch: {a.rows} vs {b.rows}")
    return BitMatrix.from_dense(np.hstack([a.to_dense(), b.to_dense()]).reshape(a.rows, a.cols + b.cols))


def vstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.cols:
        raise DimensionError(f"column mismatch: {a.cols} vs {b.cols}")
    return BitMatrix(a.rows + b.rows, a.cols, np.vstack([a.data, b.data]))


def select_columns(m: BitMatrix, idx: Iterable[int]) -> BitMatrix:
    """Submatrix on the given strictly increasing column indices."""
    idx = np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64)
    if idx.size:
        if idx.min() < 0 or idx.max() >= m.cols:
            raise IndexError(f"column index out of range for {m.cols} columns")
        if np.any(np.diff(idx) <= 0):
            raise IndexError("column indices must be strictly increasing")
    return BitMatrix.from_dense(m.to_dense()[:, idx].reshape(m.rows, idx.size))


def independent_rows(base: BitMatrix, candidates: BitMatrix) -> np.ndarray:
    """Mask of candidate rows kept by a greedy scan that extends ``rowspace(base)``."""
    if base.cols != candidates.cols:
        raise DimensionError(f"column mismatch: {base.cols} vs {candidates.cols}")
    if candidates.rows == 0 or candidates.cols == 0:
        return np.zeros(candidates.rows, dtype=bool)
    return _extend_basis(base.data, candidates.data)
