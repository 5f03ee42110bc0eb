"""The named score-to-score reductions.

These are the hand-derived identities: the scaling reductions between L1,
dominance and Hamming distance, the ignore-mark elimination for Hamming, the
threshold/dominance and L1/min equivalences, the dominance/Hamming/L1
one-liners, and weighted equality via bit filtering.

Conventions: dominance is 1[x <= y]; threshold is 1[|x - y| >= delta].  Each
builder returns a LinearReduction whose identity is exhaustively verified in
the test suite over its declared domain.
"""

from __future__ import annotations

from fractions import Fraction

from .. import scores as sc
from ..scores import DOM, EQ, HAM, L1, MIN, MULT, Filter, Weight
from .engine import LinearReduction, term


def _floor_log2(M: int) -> int:
    if M <= 0:
        raise ValueError("bound M must be positive")
    return M.bit_length() - 1


def reduce_l1_to_dom(M: int) -> LinearReduction:
    """|x - y| on [0, M) as a signed sum of dominance tests.

    Level i of the scaling recursion contributes four parity-filtered
    dominance terms with coefficient 2^i, one per parity/orientation case of
    the unit correction |x-y| - 2*|floor(x/2)-floor(y/2)|.
    """
    terms = []
    for i in range(_floor_log2(M) + 1):
        fd = ("floordiv", 2**i)
        neg = ("affine", -1, 0)
        ev, od = ("even",), ("odd",)
        lvl = [
            (1, (fd, neg, od), (fd, neg, ev)),
            (-1, (fd, neg, ev), (fd, neg, od)),
            (1, (fd, ev), (fd, od)),
            (-1, (fd, od), (fd, ev)),
        ]
        for sgn, fs, gs in lvl:
            terms.append(term(sgn * 2**i, DOM, Filter.of(*fs), Filter.of(*gs)))
    return LinearReduction(L1, tuple(terms), domain=(0, M), name=f"l1->dom[M={M}]")


def reduce_dom_to_ham(M: int) -> LinearReduction:
    """1[x <= y] on [0, M) via scaled star-aware Hamming terms.

    The main terms test floor(x/2^i), when odd, against floor(y/2^i)+1; the
    correction part 1 - sum_i 1[floor(x/2^i) is odd] depends on x alone and is
    carried as multiplication terms that vanish when either argument is STAR.
    """
    levels = _floor_log2(M) + 1
    terms = []
    const = [term(1, MULT, sc.const(1), sc.const(1))]
    for i in range(levels):
        fd = ("floordiv", 2**i)
        terms.append(term(1, HAM, Filter.of(fd, ("odd",)), Filter.of(fd, ("affine", 1, 1))))
        const.append(term(-1, MULT, Filter.of(fd, ("odd",), ("const", 1)), sc.const(1)))
    return LinearReduction(DOM, tuple(terms), tuple(const), domain=(0, M), name=f"dom->ham[M={M}]")


def eliminate_stars_ham() -> LinearReduction:
    """Hamming distance over nonnegative ints + STAR as two pure-int instances.

    The first map sends STAR to 0 and t to t+1; the second sends STAR to 0 and
    t to 1, correcting the spurious STAR-vs-STAR matches of the first.
    Requires nonnegative integer inputs so that t+1 never collides with the 0
    used for STAR.
    """
    f1 = Filter.of(("affine", 1, 1), ("unstar", 0))
    f2 = Filter.of(("const", 1), ("unstar", 0))
    terms = (term(1, HAM, f1, f1), term(-1, HAM, f2, f2))
    return LinearReduction(HAM, terms, domain=(0, None), name="ham-star-elim")


def reduce_thr_to_dom(delta: int) -> LinearReduction:
    """1[|x-y| >= delta] = Dom(-x, -y-delta) + Dom(x+delta, y), any integers."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    terms = (
        term(1, DOM, sc.negate(), sc.affine(-1, -delta)),
        term(1, DOM, sc.shift(delta), sc.ident()),
    )
    return LinearReduction(sc.thr(delta), terms, name=f"thr{delta}->dom")


def reduce_dom_to_thr(delta: int, M: int) -> LinearReduction:
    """Dom(x, y) = Thr_delta(x, y + delta) on [0, M) for delta > M.

    Verified convention: with the >=-threshold, |x - (y+delta)| >= delta holds
    exactly when x <= y, provided values stay below delta.
    """
    if M <= 0:
        raise ValueError("bound M must be positive")
    if delta <= M:
        raise ValueError("dom->thr requires delta > M")
    terms = (term(1, sc.thr(delta), sc.ident(), sc.shift(delta)),)
    return LinearReduction(DOM, terms, domain=(0, M), name=f"dom->thr{delta}[M={M}]")


def reduce_ham_to_dom() -> LinearReduction:
    """Ham(x,y) = Dom(x+1, y) + Dom(-x+1, -y), any integers."""
    terms = (
        term(1, DOM, sc.shift(1), sc.ident()),
        term(1, DOM, sc.affine(-1, 1), sc.negate()),
    )
    return LinearReduction(HAM, terms, name="ham->dom")


def reduce_dom_to_l1() -> LinearReduction:
    """Dom(x,y) = |x-(y+1)|/2 - |x-y|/2 + 1/2."""
    terms = (
        term(Fraction(1, 2), L1, sc.ident(), sc.shift(1)),
        term(Fraction(-1, 2), L1, sc.ident(), sc.ident()),
    )
    const = (term(Fraction(1, 2), MULT, sc.const(1), sc.const(1)),)
    return LinearReduction(DOM, terms, const, name="dom->l1")


def reduce_ham_to_l1() -> LinearReduction:
    """Ham(x,y) = 1 + |x-y| - |x-(y+1)|/2 - |(x+1)-y|/2."""
    terms = (
        term(1, L1, sc.ident(), sc.ident()),
        term(Fraction(-1, 2), L1, sc.ident(), sc.shift(1)),
        term(Fraction(-1, 2), L1, sc.shift(1), sc.ident()),
    )
    const = (term(1, MULT, sc.const(1), sc.const(1)),)
    return LinearReduction(HAM, terms, const, name="ham->l1")


def reduce_min_to_l1() -> LinearReduction:
    """min(x,y) = x/2 + y/2 - |x-y|/2."""
    terms = (term(Fraction(-1, 2), L1, sc.ident(), sc.ident()),)
    const = (
        term(Fraction(1, 2), MULT, sc.ident(), sc.const(1)),
        term(Fraction(1, 2), MULT, sc.const(1), sc.ident()),
    )
    return LinearReduction(MIN, terms, const, name="min->l1")


def reduce_l1_to_min() -> LinearReduction:
    """|x-y| = x + y - 2*min(x,y).

    The factor 2 on the min term is the sweep-verified constant (the single
    count double-counts the overlap).
    """
    terms = (term(-2, MIN, sc.ident(), sc.ident()),)
    const = (
        term(1, MULT, sc.ident(), sc.const(1)),
        term(1, MULT, sc.const(1), sc.ident()),
    )
    return LinearReduction(L1, terms, const, name="l1->min")


def reduce_weighted_eq_to_ham(w: Weight, W: int) -> LinearReduction:
    """w(x) * 1[x=y] as at most floor(log2 W)+1 bit-filtered equality terms.

    Weights must be nonnegative and bounded by W on the input domain; each
    term keeps exactly the values whose weight has bit i set.
    """
    if W < 0:
        raise ValueError("weight bound must be nonnegative")
    bits = max(1, W.bit_length())
    terms = tuple(term(2**i, EQ, sc.bit(w, i), sc.bit(w, i)) for i in range(bits))
    return LinearReduction(sc.weighted_eq(w), terms, name=f"weq[{w.name}]->eq")


def expand_eq_to_ham() -> LinearReduction:
    """Star-aware equality as (both-relevant count) minus Hamming distance."""
    terms = (
        term(1, MULT, sc.const(1), sc.const(1)),
        term(-1, HAM, sc.ident(), sc.ident()),
    )
    return LinearReduction(EQ, terms, name="eq->ham")
