"""Grid placement against a line family, and dominance recovered from any
non-axis-orthogonal piecewise polynomial.

``lines_lemma_select`` picks a non-axis-orthogonal line from the family of
region borders and returns grid parameters (alpha, beta, gamma, delta) such
that the affine grid {(alpha*x+gamma, beta*y+delta)} lies strictly on one
side of every non-parallel line while all parallel lines separate the x>y
part of the grid from the x<y part.  The returned parameters are re-verified
by direct sign checks over every line before being accepted.

On such a grid the score F(x,y) = (alpha*x+gamma) <> (beta*y+delta) collapses
to three polynomials (one per side of the diagonal);  interpolating the two
off-diagonal polynomials and discretely differentiating their difference down
to a nonzero constant c yields a 0/1-valued combination of shifted score
probes that equals dominance on a padded sub-grid.  The result is a reduction
from dominance to at most (d+1)^2 score products plus one polynomial
(multiplication) correction.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .. import scores as sc
from ..scores import DOM, HAM, MULT, Filter, PiecewisePolynomial, Poly2, eval_piecewise
from .engine import LinearReduction, merge_terms, term


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _parallel(l1, l2) -> bool:
    return l1[0] * l2[1] == l2[0] * l1[1]


def _grid_ok(lines, chosen, alpha, beta, gamma, delta, N) -> bool:
    """Direct check of both lemma conditions over every line."""
    for line in lines:
        A, B, C = line
        if _parallel(line, chosen):
            slope = A * alpha  # equals -B*beta on parallels
            E = A * gamma + B * delta + C
            above = [slope * t + E for t in (1, N)]
            below = [slope * t + E for t in (-1, -N)]
            if 0 in above or 0 in below:
                return False
            if _sign(above[0]) != _sign(above[1]) or _sign(below[0]) != _sign(below[1]):
                return False
            if _sign(above[0]) == _sign(below[0]):
                return False
        else:
            signs = {
                _sign(A * (alpha * x + gamma) + B * (beta * y + delta) + C)
                for x in (0, N)
                for y in (0, N)
            }
            if len(signs) != 1 or 0 in signs:
                return False
    return True


def lines_lemma_select(lines, M: int, N: int) -> tuple[int, int, int, int, int]:
    """Pick a non-axis-orthogonal line and grid parameters for [0..N]^2.

    ``lines`` is a list of (A, B, C) integer triples with coefficients
    bounded by M.  Returns (index, alpha, beta, gamma, delta), verified.
    """
    if not lines:
        raise ValueError("empty line family")
    for A, B, C in lines:
        if max(abs(A), abs(B), abs(C)) > M:
            raise ValueError(f"line ({A},{B},{C}) exceeds coefficient bound {M}")
        if A == 0 and B == 0:
            raise ValueError(f"degenerate line (0,0,{C})")
    idx = next((i for i, (A, B, _) in enumerate(lines) if A != 0 and B != 0), None)
    if idx is None:
        raise ValueError("all lines axis-orthogonal")
    A, B, C = lines[idx]
    k = 3 * M
    alpha = k * B
    beta = -k * A
    xa = 2 * M * M + abs(alpha) * M * N
    xb = 2 * M * M + abs(beta) * M * N
    # integer point near the line: A*g0 + B*d0 = t, the multiple of gcd(A,B)
    # nearest to -C
    g, ug, vg = _ext_gcd(A, B)
    q = round(Fraction(-C, g))
    g0, d0 = ug * q, vg * q
    step_g, step_d = B // g, -A // g  # gamma(s) = g0 + step_g*s, delta(s) = d0 + step_d*s
    lo_a, hi_a = min(0, alpha * N), max(0, alpha * N)
    lo_b, hi_b = min(0, beta * N), max(0, beta * N)
    candidates: set[int] = set()
    for gcond in (("ge", xa - lo_a), ("le", -xa - hi_a)):
        for dcond in (("ge", xb - lo_b), ("le", -xb - hi_b)):
            svals = _ray_intersection(g0, step_g, gcond, d0, step_d, dcond)
            candidates.update(svals)
    best = None
    for s in sorted(candidates):
        gamma = g0 + step_g * s
        delta = d0 + step_d * s
        if not _grid_ok(lines, lines[idx], alpha, beta, gamma, delta, N):
            continue
        size = max(abs(gamma), abs(delta))
        if best is None or size < best[0]:
            best = (size, gamma, delta)
    if best is None:
        raise RuntimeError("no verified grid placement found (unexpected)")
    _, gamma, delta = best
    limit = 64 * M * M * (N + M + 1)
    if max(abs(alpha), abs(beta), abs(gamma), abs(delta)) > limit:
        raise RuntimeError("grid parameters exceed the poly(M, N) bound")
    return idx, alpha, beta, gamma, delta


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _ray_intersection(base1, step1, cond1, base2, step2, cond2):
    """Feasible endpoints of two one-variable linear constraints in s."""

    def ray(base, step, cond):
        kind, bound = cond
        # base + step*s >= bound  (or <=)
        if kind == "ge":
            if step > 0:
                return ("ge", -(-(bound - base) // step))
            return ("le", (base - bound) // -step) if step < 0 else None
        if step > 0:
            return ("le", (bound - base) // step)
        return ("ge", -(-(base - bound) // -step)) if step < 0 else None

    r1, r2 = ray(base1, step1, cond1), ray(base2, step2, cond2)
    if r1 is None or r2 is None:
        return []
    lo = hi = None
    for kind, v in (r1, r2):
        if kind == "ge":
            lo = v if lo is None else max(lo, v)
        else:
            hi = v if hi is None else min(hi, v)
    if lo is not None and hi is not None:
        return [] if lo > hi else [lo, hi]
    if lo is not None:
        return [lo, lo + 1]
    if hi is not None:
        return [hi, hi - 1]
    return [0]


# ---------------------------------------------------------------------------
# exact bivariate interpolation
# ---------------------------------------------------------------------------


def _poly1_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def _lagrange_basis(nodes: list[int]) -> list[list[Fraction]]:
    polys = []
    for r, xr in enumerate(nodes):
        num = [Fraction(1)]
        den = 1
        for rp, xp in enumerate(nodes):
            if rp == r:
                continue
            num = _poly1_mul(num, [Fraction(-xp), Fraction(1)])
            den *= xr - xp
        polys.append([c / den for c in num])
    return polys


def interpolate_poly2(values, xs: list[int], ys: list[int]) -> Poly2:
    """Exact interpolation of values[r][s] = P(xs[r], ys[s]) on a product grid."""
    lx = _lagrange_basis(xs)
    ly = _lagrange_basis(ys)
    grid = [[Fraction(0)] * len(ys) for _ in range(len(xs))]
    for r in range(len(xs)):
        for s in range(len(ys)):
            v = values[r][s]
            if v == 0:
                continue
            for i, ci in enumerate(lx[r]):
                if ci == 0:
                    continue
                for j, cj in enumerate(ly[s]):
                    grid[i][j] += v * ci * cj
    return Poly2(grid)


# ---------------------------------------------------------------------------
# dominance (and Hamming) from a non-axis-orthogonal piecewise polynomial
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def dom_via_piecewise(pp: PiecewisePolynomial, m_in: int) -> LinearReduction:
    """Reduction from Dom(x,y) on x, y in [0..m_in] to products of pp.

    Targets are the score pp itself (at most (a+1)(b+1) <= (d+1)^2 shifted
    probes) plus multiplication terms for the polynomial correction.
    """
    if pp.is_axis_orthogonal:
        raise ValueError("piecewise polynomial is axis-orthogonal; dominance cannot be recovered")
    if m_in < 1:
        raise ValueError("need m_in >= 1")
    d = pp.degree
    dp = max(d, 1)
    lines = [(t.a, t.b, t.c) for t in pp.summands]
    ml = max(1, max(max(abs(a), abs(b), abs(c)) for a, b, c in lines))
    N = 4 * dp * m_in + 3 * dp
    _, alpha, beta, gamma, delta = lines_lemma_select(lines, ml, N)

    def F(x: int, y: int) -> int:
        return eval_piecewise(pp, alpha * x + gamma, beta * y + delta)

    # off-diagonal polynomials, interpolated from points strictly inside each region
    base = 2 * d + 2
    xs_gt = [base + r for r in range(d + 1)]
    ys_gt = list(range(d + 1))
    q_gt = interpolate_poly2([[F(x, y) for y in ys_gt] for x in xs_gt], xs_gt, ys_gt)
    xs_lt = list(range(d + 1))
    ys_lt = [base + s for s in range(d + 1)]
    q_lt = interpolate_poly2([[F(x, y) for y in ys_lt] for x in xs_lt], xs_lt, ys_lt)
    diff = q_lt - q_gt
    if diff.is_zero():
        raise ValueError("off-diagonal polynomials agree; piecewise polynomial is degenerate")
    found = None
    for s in range(2 * d + 1):
        for a in range(min(s, d) + 1):
            b = s - a
            if b > d:
                continue
            dd = diff
            for _ in range(a):
                dd = dd.dx()
            for _ in range(b):
                dd = dd.dy()
            if dd.is_const() and dd.const_value() != 0:
                found = (a, b, dd.const_value())
                break
        if found:
            break
    if found is None:
        raise ValueError("no constant discrete derivative; piecewise polynomial is degenerate")
    a, b, c = found
    spacing = 4 * dp
    offset = 2 * dp
    score = sc.piecewise(pp)
    terms = []
    for i in range(a + 1):
        for j in range(b + 1):
            w = (-1) ** (a - i + b - j) * math.comb(a, i) * math.comb(b, j)
            terms.append(
                term(
                    Fraction(w) / c,
                    score,
                    sc.affine(alpha * spacing, alpha * i + gamma),
                    sc.affine(beta * spacing, beta * (offset + j) + delta),
                )
            )
    hq = q_gt
    for _ in range(a):
        hq = hq.dx()
    for _ in range(b):
        hq = hq.dy()
    hq = hq.compose_affine(spacing, 0, spacing, offset)
    const = tuple(
        term(-Fraction(coef) / c, MULT, sc.power(i), sc.power(j)) for i, j, coef in hq.monomials()
    )
    r = LinearReduction(DOM, tuple(terms), const, domain=(0, m_in + 1), name=f"dom<-pw[d={d}]")
    return merge_terms(r)


def reduce_ham_to_piecewise(pp: PiecewisePolynomial, m_in: int) -> LinearReduction:
    """Hamming distance on [0..m_in] via dominance recovered from pp.

    Composes Ham(x,y) = Dom(x+1, y) + Dom(-x+1, -y) with the dominance plan,
    shifting the negated branch back into the plan's range.
    """
    base = dom_via_piecewise(pp, m_in + 1)
    branches = (
        (sc.shift(1), sc.ident()),
        (sc.affine(-1, m_in + 1), sc.affine(-1, m_in)),
    )
    terms = []
    const = []
    for pf, pg in branches:
        for t in base.terms:
            terms.append(term(t.alpha, t.target, pf.then(t.f), pg.then(t.g)))
        for t in base.constant_terms:
            const.append(term(t.alpha, t.target, pf.then(t.f), pg.then(t.g)))
    r = LinearReduction(HAM, tuple(terms), tuple(const), domain=(0, m_in + 1), name=f"ham<-pw[d={pp.degree}]")
    return merge_terms(r)
