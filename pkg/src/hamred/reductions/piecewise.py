"""Piecewise polynomials to Hamming-adjacent targets.

Axis-orthogonal summands (condition on one variable only) become pure
multiplication terms: the conditioned side keeps its value only where the
half-line test passes, the other side is raised to the monomial power.  A
genuine halfplane summand P(x,y) * 1[Ax + By + C > 0] is rewritten through
the substitution u = -Ax, v = By + C, turning the condition into u < v and P
into a polynomial in (u, v) with coefficients in Z[1/A, 1/B]; each (u, v)
monomial is then a monomial-dominance instance.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .. import scores as sc
from ..scores import MULT, Filter, PiecewisePolynomial, Poly2
from .engine import LinearReduction, merge_terms, term
from .mdom import reduce_mdom_to_ham


def reduce_axis_orthogonal_to_mult(pp: PiecewisePolynomial) -> LinearReduction:
    """Lower an axis-orthogonal piecewise polynomial to multiplication terms."""
    if not pp.is_axis_orthogonal:
        raise ValueError("piecewise polynomial is not axis-orthogonal")
    terms = []
    for s in pp.summands:
        terms.extend(_axis_orthogonal_terms(s))
    bound = (pp.degree + 1) ** 2 * max(1, len(pp.summands))
    if len(terms) > bound:
        raise RuntimeError(f"emitted {len(terms)} mult terms, above the (d+1)^2*c bound")
    return merge_terms(LinearReduction(sc.piecewise(pp), tuple(terms), name="axis-orth->mult"))


def _axis_orthogonal_terms(s: sc.HalfplaneTerm) -> list:
    if s.a == 0 and s.b == 0:
        if s.c <= 0:
            return []
        cond_f = cond_g = ()
    elif s.b == 0:
        cond_f, cond_g = (("halfline", s.a, s.c),), ()
    else:
        cond_f, cond_g = (), (("halfline", s.b, s.c),)
    out = []
    for i, j, c in s.poly.monomials():
        f = Filter.of(*cond_f, ("power", i))
        g = Filter.of(*cond_g, ("power", j))
        out.append(term(Fraction(c), MULT, f, g))
    return out


@lru_cache(maxsize=None)
def reduce_piecewise_to_ham(pp: PiecewisePolynomial, lo: int, hi: int) -> LinearReduction:
    """Lower any piecewise polynomial, valid for integer inputs in [lo, hi).

    Axis-orthogonal summands go through the multiplication route; the rest
    through monomial dominance.  The result carries equality and
    multiplication targets only (equality terms stand in one-for-one for
    star-aware Hamming instances).
    """
    if hi <= lo:
        raise ValueError("empty domain")
    terms = []
    for s in pp.summands:
        if s.axis_orthogonal:
            terms.extend(_axis_orthogonal_terms(s))
            continue
        fu = sc.affine(-s.a, 0)
        gv = sc.affine(s.b, s.c)
        phat = s.poly.compose_affine(Fraction(-1, s.a), 0, Fraction(1, s.b), Fraction(-s.c, s.b))
        ur = fu.interval(lo, hi - 1)
        vr = gv.interval(lo, hi - 1)
        mn = min(ur[0], vr[0])
        mx = max(ur[1], vr[1])
        for i, j, c in phat.monomials():
            sub = reduce_mdom_to_ham(i, j, mn, mx + 1)
            for t in sub.all_terms:
                terms.append(term(Fraction(c) * t.alpha, t.target, fu.then(t.f), gv.then(t.g)))
    return merge_terms(
        LinearReduction(sc.piecewise(pp), tuple(terms), domain=(lo, hi), name=f"pw->ham[{lo},{hi})")
    )
