"""Exact computational backends.

``conv_mult`` is an exact integer (+,*) convolution realized as a multi-prime
number-theoretic transform with CRT recombination: the prime set is chosen
from a certified bound on the output magnitude, so the result is exact by
construction (no floating point anywhere).  ``sparse_matmul`` multiplies 0/1
coordinate matrices with a heavy/light column split ordered by the product of
per-index nonzero counts; the light-phase pair count is checked against the
m1*m2/ell tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .scores import STAR


class ExactnessError(ArithmeticError):
    """The convolution backend cannot certify an exact result."""


# NTT-friendly primes p = c * 2^k + 1 with a known primitive root; all support
# transform lengths well beyond 2^21.
_NTT_PRIMES: tuple[tuple[int, int], ...] = (
    (2013265921, 31),  # 15 * 2^27 + 1
    (1811939329, 13),  # 27 * 2^26 + 1
    (2113929217, 5),  # 63 * 2^25 + 1
    (469762049, 3),  # 7 * 2^26 + 1
    (754974721, 11),  # 45 * 2^24 + 1
)


@lru_cache(maxsize=None)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _root_powers(w: int, count: int, p: int) -> np.ndarray:
    ws = np.ones(1, dtype=np.int64)
    cur = w
    while len(ws) < count:
        ws = np.concatenate([ws, (ws * cur) % p])
        cur = (cur * cur) % p
    return ws[:count]


def _ntt(a: np.ndarray, p: int, g: int, invert: bool) -> np.ndarray:
    n = len(a)
    if n == 1:
        return a.copy()
    a = a[_bitrev(n)]
    length = 2
    while length <= n:
        half = length // 2
        w = pow(g, (p - 1) // length, p)
        if invert:
            w = pow(w, p - 2, p)
        ws = _root_powers(w, half, p)
        blocks = a.reshape(-1, length)
        u = blocks[:, :half]
        v = (blocks[:, half:] * ws) % p
        s = u + v
        d = u - v
        blocks[:, :half] = np.where(s >= p, s - p, s)
        blocks[:, half:] = np.where(d < 0, d + p, d)
        a = blocks.reshape(-1)
        length *= 2
    if invert:
        ninv = pow(n, p - 2, p)
        a = (a * ninv) % p
    return a


def _conv_mod(a: np.ndarray, b: np.ndarray, out_len: int, p: int, g: int) -> np.ndarray:
    n = 1 << max(0, (out_len - 1).bit_length())
    if n < out_len:
        n <<= 1
    fa = np.zeros(n, dtype=np.int64)
    fb = np.zeros(n, dtype=np.int64)
    fa[: len(a)] = a % p
    fb[: len(b)] = b % p
    fa = _ntt(fa, p, g, False)
    fb = _ntt(fb, p, g, False)
    fc = (fa * fb) % p
    return _ntt(fc, p, g, True)[:out_len]


def _conv_schoolbook(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, av in enumerate(a):
        if av == 0:
            continue
        for j, bv in enumerate(b):
            out[i + j] += av * bv
    return out


def conv_mult(a, b) -> list:
    """Exact integer convolution c[k] = sum over i+j=k of a[i]*b[j].

    Inputs must be pure integer sequences; map STAR to 0 first (the
    multiplication-compatible embedding of the ignore mark).
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        raise ValueError("conv_mult requires nonempty inputs")
    a = list(a)
    b = list(b)
    for seq in (a, b):
        for v in seq:
            if v is STAR:
                raise ValueError("conv_mult inputs must have STAR mapped to 0 by the caller")
    out_len = la + lb - 1
    maxa = max((abs(v) for v in a), default=0)
    maxb = max((abs(v) for v in b), default=0)
    if maxa == 0 or maxb == 0:
        return [0] * out_len
    if la * lb <= 1024:
        return _conv_schoolbook(a, b)
    bound = min(la, lb) * maxa * maxb  # max possible |c[k]|
    primes: list[tuple[int, int]] = []
    prod = 1
    for p, g in _NTT_PRIMES:
        primes.append((p, g))
        prod *= p
        if prod > 2 * bound:
            break
    else:
        raise ExactnessError(f"certified bound {bound} exceeds the CRT capacity of the prime set")
    an = np.array(a, dtype=object)
    bn = np.array(b, dtype=object)
    residues = [_conv_mod((an % p).astype(np.int64), (bn % p).astype(np.int64), out_len, p, g) for p, g in primes]
    if len(primes) == 1:
        p = primes[0][0]
        r = residues[0]
        vals = np.where(r > p // 2, r - p, r)
        return [int(v) for v in vals]
    # Garner-style CRT on exact Python ints
    x = residues[0].astype(object)
    mod = primes[0][0]
    for (p, _), r in zip(primes[1:], residues[1:]):
        inv = pow(mod % p, p - 2, p)
        t = ((r.astype(object) - x) * inv) % p
        x = x + mod * t
        mod *= p
    x = np.where(x > mod // 2, x - mod, x)
    return [int(v) for v in x]


# ---------------------------------------------------------------------------
# dense integer matrix product
# ---------------------------------------------------------------------------


def matmul_dense(A, B) -> list:
    """Exact integer product of two dense matrices given as lists of rows."""
    n = len(A)
    inner = len(A[0]) if n else 0
    if len(B) != inner:
        raise ValueError(f"inner dimension mismatch: {inner} vs {len(B)}")
    cols = len(B[0]) if B else 0
    if n == 0 or cols == 0 or inner == 0:
        return [[0] * cols for _ in range(n)]
    maxa = max((abs(v) for row in A for v in row), default=0)
    maxb = max((abs(v) for row in B for v in row), default=0)
    if inner * max(1, maxa) * max(1, maxb) < 2**62:
        C = np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)
    else:
        C = np.array(A, dtype=object) @ np.array(B, dtype=object)
    return [[int(v) for v in row] for row in C]


def eye_matrix(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# sparse 0/1 matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """0/1 matrix stored as coordinates of its nonzero entries."""

    rows: int
    cols: int
    nonzeros: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for r, c in self.nonzeros:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"coordinate ({r},{c}) out of range {self.rows}x{self.cols}")
            if (r, c) in seen:
                raise ValueError(f"duplicate coordinate ({r},{c})")
            seen.add((r, c))

    @classmethod
    def from_coords(cls, rows: int, cols: int, coords) -> "SparseBinaryMatrix":
        return cls(rows, cols, tuple(sorted((int(r), int(c)) for r, c in coords)))

    @classmethod
    def from_dense(cls, mat) -> "SparseBinaryMatrix":
        coords = [(i, j) for i, row in enumerate(mat) for j, v in enumerate(row) if v]
        return cls.from_coords(len(mat), len(mat[0]) if mat else 0, coords)

    @property
    def nnz(self) -> int:
        return len(self.nonzeros)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.nonzeros:
            out[r][c] = 1
        return out

    def col_counts(self) -> np.ndarray:
        counts = np.zeros(self.cols, dtype=np.int64)
        for _, c in self.nonzeros:
            counts[c] += 1
        return counts

    def row_counts(self) -> np.ndarray:
        counts = np.zeros(self.rows, dtype=np.int64)
        for r, _ in self.nonzeros:
            counts[r] += 1
        return counts

    def rows_by_col(self) -> dict:
        out: dict[int, list[int]] = {}
        for r, c in sorted(self.nonzeros, key=lambda rc: (rc[1], rc[0])):
            out.setdefault(c, []).append(r)
        return out

    def cols_by_row(self) -> dict:
        out: dict[int, list[int]] = {}
        for r, c in sorted(self.nonzeros):
            out.setdefault(r, []).append(c)
        return out

    def transpose(self) -> "SparseBinaryMatrix":
        return SparseBinaryMatrix.from_coords(self.cols, self.rows, [(c, r) for r, c in self.nonzeros])


def default_split(A: SparseBinaryMatrix, B: SparseBinaryMatrix) -> int:
    """Default heavy-phase width: balances the dense block against the light tail."""
    m1m2 = max(1, A.nnz * B.nnz)
    return min(A.cols, 4 * math.isqrt(-(-m1m2 // max(1, A.rows * B.cols))) + 1)


def inner_order(A: SparseBinaryMatrix, B: SparseBinaryMatrix) -> np.ndarray:
    """Inner indices sorted by |A_{*i}| * |B_{i*}| non-increasing, ties by index."""
    w = A.col_counts() * B.row_counts()
    return np.lexsort((np.arange(A.cols), -w))


def sparse_matmul(A: SparseBinaryMatrix, B: SparseBinaryMatrix, ell: int | None = None, stats: dict | None = None) -> list:
    """Exact product A x B via a heavy/light split of the inner dimension.

    The first ``ell`` inner indices in weight order are multiplied densely;
    every remaining index is accumulated by enumerating its nonzero pairs.
    For ell >= 1 the pair count is checked against the ceil(m1*m2/ell) tail
    bound of the ordering.
    """
    if A.cols != B.rows:
        raise ValueError(f"dimension mismatch: {A.rows}x{A.cols} times {B.rows}x{B.cols}")
    if ell is None:
        ell = default_split(A, B)
    order = inner_order(A, B)
    heavy = order[:ell]
    light = order[ell:]
    C = np.zeros((A.rows, B.cols), dtype=np.int64)
    if len(heavy):
        a_by_col = A.rows_by_col()
        b_by_row = B.cols_by_row()
        Ad = np.zeros((A.rows, len(heavy)), dtype=np.int64)
        Bd = np.zeros((len(heavy), B.cols), dtype=np.int64)
        for pos, i in enumerate(heavy):
            for r in a_by_col.get(int(i), ()):
                Ad[r, pos] = 1
            for c in b_by_row.get(int(i), ()):
                Bd[pos, c] = 1
        C += Ad @ Bd
    pair_count = 0
    if len(light):
        a_by_col = A.rows_by_col()
        b_by_row = B.cols_by_row()
        for i in light:
            ra = a_by_col.get(int(i))
            cb = b_by_row.get(int(i))
            if not ra or not cb:
                continue
            pair_count += len(ra) * len(cb)
            cb_idx = np.array(cb, dtype=np.int64)
            for r in ra:
                C[r, cb_idx] += 1
    if ell >= 1:
        tail_bound = -(-A.nnz * B.nnz // ell)
        if pair_count > tail_bound:
            raise RuntimeError(f"light-phase pair count {pair_count} exceeds tail bound {tail_bound}")
    if stats is not None:
        stats["ell"] = int(ell)
        stats["light_pairs"] = pair_count
        stats["heavy_width"] = int(len(heavy))
    return [[int(v) for v in row] for row in C]
