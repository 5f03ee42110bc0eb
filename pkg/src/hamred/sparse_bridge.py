"""Two-way bridge between all-pairs Hamming and sparse 0/1 matrix products.

One direction expands vector families into 0/1 matrices whose product counts
matches (decoded back through the both-relevant count).  The converse packs
an arbitrary sparse 0/1 product into a Hamming instance: a random bucket map
scatters inner indices over a small dimension, conflicts are resolved by
row/column splitting, unset cells receive sentinels that cannot collide
across the two sides, and a Las Vegas size test resamples the bucket map if
the split row count lands above its expectation bound.  Decoding is always
exact; randomness affects only the instance size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .all_pairs import ApInstance, expansion_matrices, mask_matrices, truncated_product
from .numerics import SparseBinaryMatrix, sparse_matmul
from .reductions.engine import PlanError
from .scores import HAM, STAR


class ResampleLimitError(RuntimeError):
    """The Las Vegas size test failed on every attempted bucket map."""


# ---------------------------------------------------------------------------
# integer matrices to 0/1 matrices (bit slicing)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BitSlicePlan:
    """Block layout of the stacked bit-sliced matrices and its recombination."""

    a_rows: int
    b_cols: int
    a_blocks: tuple[tuple[int, int], ...]  # (sign, bit) per vertical block of A'
    b_blocks: tuple[tuple[int, int], ...]  # (sign, bit) per horizontal block of B'

    def recombine(self, product) -> list:
        C = np.asarray(product, dtype=object)
        out = np.zeros((self.a_rows, self.b_cols), dtype=object)
        for bi, (sa, i) in enumerate(self.a_blocks):
            for bj, (sb, j) in enumerate(self.b_blocks):
                block = C[bi * self.a_rows : (bi + 1) * self.a_rows, bj * self.b_cols : (bj + 1) * self.b_cols]
                out += sa * sb * (1 << (i + j)) * block
        return [[int(v) for v in row] for row in out]


def _bit_blocks(M, by_rows: bool):
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pos_bits = max((v.bit_length() for row in M for v in row if v > 0), default=0)
    neg_bits = max(((-v).bit_length() for row in M for v in row if v < 0), default=0)
    blocks = [(1, k) for k in range(pos_bits)] + [(-1, k) for k in range(neg_bits)]
    coords = []
    for idx, (sign, k) in enumerate(blocks):
        for r in range(rows):
            for c in range(cols):
                v = M[r][c] * sign
                if v > 0 and (v >> k) & 1:
                    if by_rows:
                        coords.append((idx * rows + r, c))
                    else:
                        coords.append((r, idx * cols + c))
    if by_rows:
        mat = SparseBinaryMatrix.from_coords(max(1, len(blocks)) * rows, cols, coords)
    else:
        mat = SparseBinaryMatrix.from_coords(rows, max(1, len(blocks)) * cols, coords)
    return mat, tuple(blocks) if blocks else ((1, 0),)


def int_to_01(A, B) -> tuple[SparseBinaryMatrix, SparseBinaryMatrix, BitSlicePlan]:
    """Bit-slice two integer matrices into stacked 0/1 matrices.

    Negative entries split off into their own sign blocks (A = A1 - A2), so
    A' x B' carries every signed bit product as one block of the result.
    """
    if (len(A[0]) if A else 0) != len(B):
        raise ValueError("inner dimension mismatch")
    Ab, a_blocks = _bit_blocks(A, by_rows=True)
    Bb, b_blocks = _bit_blocks(B, by_rows=False)
    plan = BitSlicePlan(len(A), len(B[0]) if B else 0, a_blocks, b_blocks)
    return Ab, Bb, plan


# ---------------------------------------------------------------------------
# all-pairs Hamming -> sparse product (deterministic direction)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpansionDecoder:
    """Decodes a match-count product into Hamming distances.

    ``d_eff[i][j]`` counts aligned both-relevant coordinates; ``tail`` holds
    the contribution of truncated inner indices, already accumulated.
    """

    d_eff: tuple
    tail: tuple

    def decode(self, matches) -> list:
        M = np.asarray(matches, dtype=object)
        out = np.asarray(self.d_eff, dtype=object) - (M + np.asarray(self.tail, dtype=object))
        return [[int(v) for v in row] for row in out]


def apham_to_sparse(left, right, truncate: int | None = None) -> tuple[SparseBinaryMatrix, SparseBinaryMatrix, ExpansionDecoder]:
    """Expand an all-pairs Hamming instance into sparse 0/1 matrices.

    The decoder maps the product of the returned matrices back to Hamming
    distances.  With ``truncate`` set, only that many heaviest inner indices
    are kept in the returned matrices; the dropped indices' contribution is
    precomputed into the decoder (at most |A|*|B|/width pair operations,
    asserted inside truncated_product).
    """
    left = tuple(tuple(v) for v in left)
    right = tuple(tuple(v) for v in right)
    n1, n2 = len(left), len(right)
    A, B = expansion_matrices(left, right)
    Am, Bm = mask_matrices(left, right)
    d_eff = tuple(tuple(row) for row in sparse_matmul(Am, Bm))
    tail = [[0] * n2 for _ in range(n1)]
    if truncate is not None and truncate < A.cols:
        from .numerics import inner_order

        order = inner_order(A, B)
        head, dropped = order[:truncate], order[truncate:]
        a_by_col = A.rows_by_col()
        b_by_row = B.cols_by_row()
        pairs = 0
        for i in dropped:
            ra = a_by_col.get(int(i))
            cb = b_by_row.get(int(i))
            if not ra or not cb:
                continue
            pairs += len(ra) * len(cb)
            for r in ra:
                for c in cb:
                    tail[r][c] += 1
        bound = -(-A.nnz * B.nnz // max(1, truncate))
        if pairs > bound:
            raise RuntimeError(f"truncation tail pairs {pairs} exceed bound {bound}")
        from .all_pairs import _select_inner

        A, B = _select_inner(A, B, head)
    decoder = ExpansionDecoder(d_eff, tuple(tuple(row) for row in tail))
    return A, B, decoder


# ---------------------------------------------------------------------------
# sparse product -> all-pairs Hamming (Las Vegas direction)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitMap:
    """Bucket map and row/column split bookkeeping for one accepted draw."""

    pi: tuple
    d: int
    row_offsets: tuple
    row_counts: tuple
    col_offsets: tuple
    col_counts: tuple
    seed: int
    attempt: int

    def decode(self, ham_matrix) -> list:
        H = ham_matrix
        n1, n2 = len(self.row_counts), len(self.col_counts)
        out = [[0] * n2 for _ in range(n1)]
        for i in range(n1):
            for j in range(n2):
                total = 0
                for a in range(self.row_counts[i]):
                    row = H[self.row_offsets[i] + a]
                    for b in range(self.col_counts[j]):
                        total += self.d - row[self.col_offsets[j] + b]
                out[i][j] = total
        return out

    def serialize(self) -> str:
        lines = [
            f"splitmap seed={self.seed} attempt={self.attempt} d={self.d}",
            "pi " + " ".join(str(v) for v in self.pi),
            "row_counts " + " ".join(str(v) for v in self.row_counts),
            "col_counts " + " ".join(str(v) for v in self.col_counts),
        ]
        return "\n".join(lines) + "\n"


def _split_side(nnz_by_group: dict, n_groups: int, pi: np.ndarray, d: int):
    """Group nonzeros by bucket, split conflicting groups into extra rows."""
    counts = []
    assignments = []  # per group: list of (slot, bucket, value)
    for g in range(n_groups):
        cells: dict[int, list[int]] = {}
        for j in sorted(nnz_by_group.get(g, ())):
            cells.setdefault(int(pi[j]), []).append(j)
        c = max((len(v) for v in cells.values()), default=0)
        counts.append(c)
        assignments.append([(t, k, js[t]) for k, js in cells.items() for t in range(len(js))])
    offsets = [0]
    for c in counts[:-1]:
        offsets.append(offsets[-1] + c)
    return counts, offsets, assignments


def sparse_to_apham(
    A: SparseBinaryMatrix,
    B: SparseBinaryMatrix,
    seed: int,
    kappa: int = 8,
    max_attempts: int = 32,
) -> tuple[ApInstance, SplitMap]:
    """Las Vegas packing of a sparse 0/1 product into all-pairs Hamming.

    Buckets are drawn from a counter-based generator keyed by (seed, attempt).
    A draw is accepted only if both split row counts stay within
    kappa * (n + nnz/d) * ceil(log2(n+2)); the decoder recovers A x B exactly
    from the Hamming matrix of the returned instance.
    """
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    n1, n2, N = A.rows, B.cols, A.cols
    n_ref = max(n1, n2, 1)
    if N < n_ref:
        raise ValueError(f"inner dimension {N} below vector count {n_ref}; pad first")
    d = -(-N // n_ref)
    n_pad = d * n_ref
    a_by_row = A.cols_by_row()
    b_by_col: dict[int, list[int]] = {}
    for r, c in B.nonzeros:
        b_by_col.setdefault(c, []).append(r)
    log_term_u = math.ceil(math.log2(n1 + 2))
    log_term_v = math.ceil(math.log2(n2 + 2))
    for attempt in range(max_attempts):
        rng = np.random.Generator(np.random.Philox(key=[seed, attempt]))
        pi = rng.integers(0, d, size=n_pad)
        row_counts, row_offsets, row_assign = _split_side(a_by_row, n1, pi, d)
        col_counts, col_offsets, col_assign = _split_side(b_by_col, n2, pi, d)
        sum_c, sum_d = sum(row_counts), sum(col_counts)
        # integer comparison of sum_c <= kappa*(n + nnz/d)*log without division
        ok_u = sum_c * d <= kappa * (n1 * d + A.nnz) * log_term_u
        ok_v = sum_d * d <= kappa * (n2 * d + B.nnz) * log_term_v
        if not (ok_u and ok_v):
            continue
        ru, rv = sum_c, sum_d
        sentinel = 2 * n_pad
        U = [[None] * d for _ in range(ru)]
        for g in range(n1):
            for t, k, j in row_assign[g]:
                U[row_offsets[g] + t][k] = j
        for r in range(ru):
            for k in range(d):
                if U[r][k] is None:
                    U[r][k] = sentinel + 2 * (k * max(ru, 1) + r)
        V = [[None] * d for _ in range(rv)]
        for g in range(n2):
            for t, k, j in col_assign[g]:
                V[col_offsets[g] + t][k] = j
        for r in range(rv):
            for k in range(d):
                if V[r][k] is None:
                    V[r][k] = sentinel + 2 * (k * max(rv, 1) + r) + 1
        inst = ApInstance.of(U, V, HAM)
        split = SplitMap(
            pi=tuple(int(v) for v in pi),
            d=d,
            row_offsets=tuple(row_offsets),
            row_counts=tuple(row_counts),
            col_offsets=tuple(col_offsets),
            col_counts=tuple(col_counts),
            seed=seed,
            attempt=attempt,
        )
        return inst, split
    raise ResampleLimitError(f"no accepted bucket map after {max_attempts} attempts (seed {seed})")


def accepted_row_bound(n: int, nnz: int, d: int, kappa: int = 8) -> int:
    """The acceptance threshold on the split row count, rounded up."""
    return math.ceil(kappa * (n + nnz / d) * math.ceil(math.log2(n + 2)))


# ---------------------------------------------------------------------------
# all-pairs Hamming on sparse inputs (star-marked irrelevant entries)
# ---------------------------------------------------------------------------


def apham_sparse_inputs(
    inst: ApInstance,
    m1: int | None = None,
    m2: int | None = None,
    truncate: int | None = None,
    stats: dict | None = None,
) -> list:
    """Star-aware all-pairs Hamming tuned to the relevant-entry counts.

    The expansion product is truncated toward m1*m2/(n1*n2) inner indices;
    one extra 0/1 product counts the aligned both-relevant coordinates.
    """
    if inst.score.kind != "ham":
        raise PlanError("apham_sparse_inputs requires the Hamming score")
    n1, n2 = len(inst.left), len(inst.right)
    if n1 == 0 or n2 == 0:
        return [[0] * n2 for _ in range(n1)]
    count1 = sum(1 for vec in inst.left for v in vec if v is not STAR)
    count2 = sum(1 for vec in inst.right for v in vec if v is not STAR)
    if m1 is None:
        m1 = count1
    elif m1 != count1:
        raise ValueError(f"declared m1={m1} but found {count1} relevant entries")
    if m2 is None:
        m2 = count2
    elif m2 != count2:
        raise ValueError(f"declared m2={m2} but found {count2} relevant entries")
    if m1 == 0 or m2 == 0:
        return [[0] * n2 for _ in range(n1)]
    A, B = expansion_matrices(inst.left, inst.right)
    if truncate is None:
        truncate = min(max(1, -(-m1 * m2 // (n1 * n2))), A.cols)
    matches = truncated_product(A, B, truncate, stats)
    Am, Bm = mask_matrices(inst.left, inst.right)
    d_eff = np.array(sparse_matmul(Am, Bm), dtype=np.int64)
    out = d_eff - matches
    return [[int(v) for v in row] for row in out]
