"""Brute-force reference implementations of the three (+,<>) operators.

Everything here is written in the most literal style possible and shares no
code with the fast paths; these are the ground truth for every property test.
"""

from __future__ import annotations

from .scores import ScoreFunction, eval_score


def vprod_naive(f: ScoreFunction, a: list, b: list) -> int:
    """sum_i a[i] <> b[i]."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    total = 0
    for i in range(len(a)):
        total += eval_score(f, a[i], b[i])
    return total


def conv_naive(f: ScoreFunction, a: list, b: list) -> list:
    """c[k] = sum over i+j=k of a[i] <> b[j]; quadratic time."""
    if not a or not b:
        raise ValueError("conv_naive needs nonempty inputs")
    out = [0] * (len(a) + len(b) - 1)
    for i in range(len(a)):
        for j in range(len(b)):
            out[i + j] += eval_score(f, a[i], b[j])
    return out


def mprod_naive(f: ScoreFunction, A: list, B: list) -> list:
    """C[i][j] = sum_k A[i][k] <> B[k][j]; cubic time."""
    n = len(A)
    inner = len(A[0]) if n else 0
    if len(B) != inner:
        raise ValueError(f"inner dimension mismatch: {inner} vs {len(B)}")
    cols = len(B[0]) if inner else 0
    C = [[0] * cols for _ in range(n)]
    for i in range(n):
        for j in range(cols):
            total = 0
            for k in range(inner):
                total += eval_score(f, A[i][k], B[k][j])
            C[i][j] = total
    return C
