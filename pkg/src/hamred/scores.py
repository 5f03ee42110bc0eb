"""Element domain with an ignore mark, score functions, filters and piecewise polynomials.

Values are plain Python ints extended with the sentinel ``STAR``.  The
arithmetic convention is: every single-argument transform maps STAR to STAR
(unless it is an explicit ``unstar`` step), and every two-argument score
evaluates to 0 as soon as one argument is STAR, so marked entries never
contribute to an aggregated score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np


class _Star:
    """Singleton ignore mark."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "*"


STAR = _Star()

#: entries of vectors/matrices: either an int or STAR
ExtInt = object


def is_star(v) -> bool:
    return v is STAR


def parse_token(tok: str):
    return STAR if tok == "*" else int(tok)


def format_token(v) -> str:
    return "*" if v is STAR else str(v)


# ---------------------------------------------------------------------------
# bivariate polynomials (dense coefficient grid)
# ---------------------------------------------------------------------------


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Poly2:
    """Bivariate polynomial stored as a dense (deg_x+1) x (deg_y+1) grid.

    ``coeffs[i][j]`` is the coefficient of x^i y^j; entries are ints or
    exact Fractions.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Iterable]) -> None:
        rows = [tuple(_norm_coeff(c) for c in row) for row in coeffs]
        width = max((len(r) for r in rows), default=0)
        rows = [r + (0,) * (width - len(r)) for r in rows]
        # trim zero fringe
        while rows and all(c == 0 for c in rows[-1]):
            rows.pop()
        while rows and all(r[-1] == 0 for r in rows):
            rows = [r[:-1] for r in rows]
        if not rows:
            rows = [(0,)]
        object.__setattr__(self, "coeffs", tuple(rows))

    # -- constructors

    @classmethod
    def const(cls, c) -> "Poly2":
        return cls([[c]])

    @classmethod
    def x(cls) -> "Poly2":
        return cls([[0], [1]])

    @classmethod
    def y(cls) -> "Poly2":
        return cls([[0, 1]])

    @classmethod
    def from_monomials(cls, mons: Iterable[tuple[int, int, object]]) -> "Poly2":
        mons = list(mons)
        if not mons:
            return cls.const(0)
        dx = max(i for i, _, _ in mons)
        dy = max(j for _, j, _ in mons)
        grid = [[0] * (dy + 1) for _ in range(dx + 1)]
        for i, j, c in mons:
            grid[i][j] += c
        return cls(grid)

    # -- queries

    def monomials(self):
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c != 0:
                    yield i, j, c

    @property
    def degree(self) -> int:
        return max((i + j for i, j, _ in self.monomials()), default=0)

    @property
    def deg_x(self) -> int:
        return max((i for i, _, _ in self.monomials()), default=0)

    @property
    def deg_y(self) -> int:
        return max((j for _, j, _ in self.monomials()), default=0)

    def max_abs_coeff(self):
        return max((abs(c) for _, _, c in self.monomials()), default=0)

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.coeffs for c in row)

    def is_const(self) -> bool:
        return all(c == 0 or (i == 0 and j == 0) for i, j, c in self.monomials()) or self.is_zero()

    def const_value(self):
        return self.coeffs[0][0]

    # -- arithmetic

    def __add__(self, other: "Poly2") -> "Poly2":
        dx = max(len(self.coeffs), len(other.coeffs))
        dy = max(len(self.coeffs[0]), len(other.coeffs[0]))
        grid = [[0] * dy for _ in range(dx)]
        for p in (self, other):
            for i, row in enumerate(p.coeffs):
                for j, c in enumerate(row):
                    grid[i][j] += c
        return Poly2(grid)

    def __neg__(self) -> "Poly2":
        return Poly2([[-c for c in row] for row in self.coeffs])

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + (-other)

    def __mul__(self, other: "Poly2") -> "Poly2":
        a, b = self.coeffs, other.coeffs
        grid = [[0] * (len(a[0]) + len(b[0]) - 1) for _ in range(len(a) + len(b) - 1)]
        for i, row in enumerate(a):
            for j, c in enumerate(row):
                if c == 0:
                    continue
                for k, rb in enumerate(b):
                    for l, cb in enumerate(rb):
                        if cb != 0:
                            grid[i + k][j + l] += c * cb
        return Poly2(grid)

    def scale(self, k) -> "Poly2":
        return Poly2([[c * k for c in row] for row in self.coeffs])

    def eval(self, x, y):
        acc = 0
        for i, row in enumerate(self.coeffs):
            xi = x**i
            for j, c in enumerate(row):
                if c != 0:
                    acc += c * xi * y**j
        return acc

    def eval_grid(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Evaluate on the outer grid xs x ys (object dtype, exact ints)."""
        out = np.zeros((len(xs), len(ys)), dtype=object)
        xs = xs.astype(object)
        ys = ys.astype(object)
        for i, j, c in self.monomials():
            out += c * np.outer(xs**i, ys**j)
        return out

    def compose_affine(self, sx, tx, sy, ty) -> "Poly2":
        """Return P(sx*x + tx, sy*y + ty)."""
        lin_x = Poly2([[tx], [sx]])
        lin_y = Poly2([[ty, sy]])
        # Horner over x powers of rows, then y
        acc = Poly2.const(0)
        for i in reversed(range(len(self.coeffs))):
            row = self.coeffs[i]
            racc = Poly2.const(0)
            for j in reversed(range(len(row))):
                racc = racc * lin_y + Poly2.const(row[j])
            acc = acc * lin_x + racc
        return acc

    def dx(self) -> "Poly2":
        """Discrete difference P(x+1,y) - P(x,y)."""
        return self.compose_affine(1, 1, 1, 0) - self

    def dy(self) -> "Poly2":
        return self.compose_affine(1, 0, 1, 1) - self

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i, j, c in self.monomials():
            mono = "".join(s for s in (f"x^{i}" if i else "", f"y^{j}" if j else "") if s)
            terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class HalfplaneTerm:
    """poly(x,y) * 1[a*x + b*y + c > 0]."""

    poly: Poly2
    a: int
    b: int
    c: int

    def indicator(self, x: int, y: int) -> int:
        return 1 if self.a * x + self.b * y + self.c > 0 else 0

    @property
    def axis_orthogonal(self) -> bool:
        return self.a == 0 or self.b == 0


@dataclass(frozen=True)
class PiecewisePolynomial:
    summands: tuple[HalfplaneTerm, ...]

    @classmethod
    def of(cls, *terms: HalfplaneTerm) -> "PiecewisePolynomial":
        return cls(tuple(terms))

    @property
    def degree(self) -> int:
        return max((t.poly.degree for t in self.summands), default=0)

    def max_abs_coeff(self) -> int:
        vals = [t.poly.max_abs_coeff() for t in self.summands]
        vals += [abs(t.a) for t in self.summands]
        vals += [abs(t.b) for t in self.summands]
        vals += [abs(t.c) for t in self.summands]
        return max(vals, default=0)

    @property
    def is_axis_orthogonal(self) -> bool:
        return all(t.axis_orthogonal for t in self.summands)


def eval_piecewise(pp: PiecewisePolynomial, x: int, y: int) -> int:
    """Exact integer evaluation of a piecewise polynomial at integer (x, y)."""
    acc = 0
    for t in pp.summands:
        if t.a * x + t.b * y + t.c > 0:
            acc += t.poly.eval(x, y)
    return acc


# ---------------------------------------------------------------------------
# weights (for bit filters and weighted equality)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Weight:
    """A named total integer weight map; nonnegative on its declared domain."""

    name: str
    fn: Callable[[int], int] = field(compare=False)

    def __call__(self, x: int) -> int:
        return self.fn(x)

    def on_array(self, vals: np.ndarray) -> np.ndarray:
        if self.name.startswith("pow"):
            k = int(self.name[3:])
            return vals**k
        return np.array([self.fn(int(v)) for v in vals], dtype=vals.dtype)


def power_weight(k: int) -> Weight:
    return Weight(f"pow{k}", lambda t, _k=k: t**_k)


def table_weight(mapping: dict[int, int]) -> Weight:
    items = ",".join(f"{k}:{v}" for k, v in sorted(mapping.items()))
    return Weight(f"table[{items}]", lambda t, _m=dict(mapping): _m[t])


# ---------------------------------------------------------------------------
# filters: total maps ExtInt -> ExtInt as canonical step chains
# ---------------------------------------------------------------------------

# step tags and payloads:
#   ("affine", a, b)      x -> a*x + b
#   ("floordiv", d)       x -> x // d              (d >= 1)
#   ("even",) ("odd",)    keep matching parity, else STAR
#   ("power", k)          x -> x**k                (k >= 0)
#   ("const", c)          x -> c
#   ("bit", w, i)         x -> x if bit i of w(x) else STAR
#   ("halfline", a, c)    x -> x if a*x + c > 0 else STAR
#   ("unstar", c)         STAR -> c, ints unchanged (the only star-removing step)

_PARITY = ("even", "odd")


@lru_cache(maxsize=65536)
def _simplify(steps: tuple) -> tuple[tuple, bool]:
    """Fuse adjacent steps; returns (steps, always_star)."""
    out: list[tuple] = []
    for st in steps:
        tag = st[0]
        if tag == "affine" and st[1] == 1 and st[2] == 0:
            continue
        if tag == "floordiv" and st[1] == 1:
            continue
        if tag == "power" and st[1] == 1:
            continue
        if out:
            prev = out[-1]
            if prev[0] == "affine" and tag == "affine":
                out[-1] = ("affine", prev[1] * st[1], prev[2] * st[1] + st[2])
                continue
            if prev[0] == "floordiv" and tag == "floordiv":
                out[-1] = ("floordiv", prev[1] * st[1])
                continue
            if prev[0] in _PARITY and tag in _PARITY:
                if prev[0] == tag:
                    continue
                return (), True
            if prev[0] == "const" and tag != "unstar":
                c = prev[1]
                v = _apply_step(st, c)
                if v is STAR:
                    return (), True
                out[-1] = ("const", v)
                continue
        out.append(st)
    return tuple(out), False


def _apply_step(st: tuple, v):
    """Apply one step to a non-STAR integer (may return STAR)."""
    tag = st[0]
    if tag == "affine":
        return st[1] * v + st[2]
    if tag == "floordiv":
        return v // st[1]
    if tag == "even":
        return v if v % 2 == 0 else STAR
    if tag == "odd":
        return v if v % 2 == 1 else STAR
    if tag == "power":
        return v ** st[1]
    if tag == "const":
        return st[1]
    if tag == "bit":
        return v if (st[1](v) >> st[2]) & 1 else STAR
    if tag == "halfline":
        return v if st[1] * v + st[2] > 0 else STAR
    if tag == "unstar":
        return v
    raise ValueError(f"unknown filter step {st!r}")


def _step_interval(st: tuple, lo: int, hi: int) -> tuple[int, int]:
    tag = st[0]
    if tag == "affine":
        a, b = st[1], st[2]
        vals = (a * lo + b, a * hi + b)
        return min(vals), max(vals)
    if tag == "floordiv":
        return lo // st[1], hi // st[1]
    if tag in ("even", "odd", "bit", "halfline"):
        return lo, hi
    if tag == "power":
        k = st[1]
        cands = [lo**k, hi**k]
        if lo < 0 < hi:
            cands.append(0)
        return min(cands), max(cands)
    if tag == "const":
        return st[1], st[1]
    if tag == "unstar":
        return min(lo, st[1]), max(hi, st[1])
    raise ValueError(f"unknown filter step {st!r}")


def canonical_steps(steps: tuple) -> tuple[tuple, bool]:
    """Public handle on step-chain simplification: (canonical steps, always_star)."""
    return _simplify(tuple(steps))


@dataclass(frozen=True)
class Filter:
    """A composable total map on ints extended with STAR."""

    steps: tuple = ()
    always_star: bool = False

    @classmethod
    def of(cls, *steps: tuple) -> "Filter":
        simp, dead = _simplify(tuple(steps))
        return cls(simp, dead)

    def then(self, other: "Filter") -> "Filter":
        if self.always_star and not other.removes_star:
            return IMPOSSIBLE
        return Filter.of(*(self.steps + other.steps))

    def __call__(self, v):
        if self.always_star:
            return STAR
        for st in self.steps:
            if v is STAR:
                if st[0] == "unstar":
                    v = st[1]
                continue
            v = _apply_step(st, v)
        return v

    def on_array(self, vals: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized application; mask False marks STAR slots (values forced 0)."""
        vals = vals.copy()
        mask = mask.copy()
        if self.always_star:
            return np.zeros_like(vals), np.zeros_like(mask)
        for st in self.steps:
            tag = st[0]
            if tag == "affine":
                vals = st[1] * vals + st[2]
            elif tag == "floordiv":
                vals = vals // st[1]
            elif tag == "even":
                mask = mask & (vals % 2 == 0)
            elif tag == "odd":
                mask = mask & (vals % 2 == 1)
            elif tag == "power":
                vals = vals ** st[1]
            elif tag == "const":
                vals = np.where(mask, st[1], 0)
            elif tag == "bit":
                mask = mask & (((st[1].on_array(vals) >> st[2]) & 1) == 1)
            elif tag == "halfline":
                mask = mask & (st[1] * vals + st[2] > 0)
            elif tag == "unstar":
                vals = np.where(mask, vals, st[1])
                mask = np.ones_like(mask)
            else:
                raise ValueError(f"unknown filter step {st!r}")
            vals = np.where(mask, vals, 0)
        return vals, mask

    def interval(self, lo: int, hi: int) -> tuple[int, int]:
        """Conservative range of integer outputs for integer inputs in [lo, hi]."""
        for st in self.steps:
            lo, hi = _step_interval(st, lo, hi)
        return lo, hi

    @property
    def removes_star(self) -> bool:
        return any(st[0] == "unstar" for st in self.steps)

    @property
    def preserves_star(self) -> bool:
        return not self.removes_star

    def __repr__(self) -> str:
        return f"Filter({serialize_filter(self)})"


IDENTITY = Filter.of()
IMPOSSIBLE = Filter((), True)


def ident() -> Filter:
    return IDENTITY


def shift(delta: int) -> Filter:
    return Filter.of(("affine", 1, delta))


def negate() -> Filter:
    return Filter.of(("affine", -1, 0))


def affine(a: int, b: int) -> Filter:
    return Filter.of(("affine", a, b))


def even() -> Filter:
    return Filter.of(("even",))


def odd() -> Filter:
    return Filter.of(("odd",))


def halve() -> Filter:
    return Filter.of(("floordiv", 2))


def floordiv(d: int) -> Filter:
    return Filter.of(("floordiv", d))


def power(k: int) -> Filter:
    return Filter.of(("power", k))


def const(c: int) -> Filter:
    return Filter.of(("const", c))


def bit(w: Weight, i: int) -> Filter:
    return Filter.of(("bit", w, i))


def halfline(a: int, c: int) -> Filter:
    return Filter.of(("halfline", a, c))


def unstar(c: int) -> Filter:
    return Filter.of(("unstar", c))


def apply_filter(f: Filter, v: Sequence) -> list:
    """Elementwise filter application; length preserved, STAR maps to STAR."""
    return [f(x) for x in v]


def serialize_filter(f: Filter) -> str:
    if f.always_star:
        return "never"
    if not f.steps:
        return "id"
    parts = []
    for st in f.steps:
        tag = st[0]
        if tag in ("even", "odd"):
            parts.append(tag)
        elif tag == "bit":
            parts.append(f"bit:{st[1].name},{st[2]}")
        else:
            parts.append(tag + ":" + ",".join(str(x) for x in st[1:]))
    return "|".join(parts)


def parse_filter(text: str) -> Filter:
    if text == "id":
        return IDENTITY
    if text == "never":
        return IMPOSSIBLE
    steps = []
    for part in text.split("|"):
        if ":" not in part:
            if part not in _PARITY:
                raise ValueError(f"bad filter step {part!r}")
            steps.append((part,))
            continue
        tag, args = part.split(":", 1)
        if tag == "bit":
            wname, i = args.rsplit(",", 1)
            if not wname.startswith("pow"):
                raise ValueError(f"cannot parse weight {wname!r}")
            steps.append(("bit", power_weight(int(wname[3:])), int(i)))
        else:
            steps.append((tag, *(int(a) for a in args.split(","))))
    return Filter.of(*steps)


# ---------------------------------------------------------------------------
# score functions
# ---------------------------------------------------------------------------

#: kinds whose value is unchanged when both arguments are shifted by the same amount
_SHIFT_INVARIANT = frozenset({"ham", "dom", "thr", "l1", "l2p", "l2p1", "eq"})


@dataclass(frozen=True)
class ScoreFunction:
    """A binary score: a closed catalog entry or an explicit piecewise polynomial."""

    kind: str
    delta: int | None = None
    p: int | None = None
    weight: Weight | None = None
    pp: PiecewisePolynomial | None = None

    @property
    def shift_invariant(self) -> bool:
        return self.kind in _SHIFT_INVARIANT

    def tag(self) -> str:
        if self.kind == "thr":
            return f"thr:{self.delta}"
        if self.kind == "l2p":
            return f"l2p:{self.p}"
        if self.kind == "l2p1":
            return f"l2p1:{self.p}"
        if self.kind == "weq":
            return f"weq:{self.weight.name}"
        return self.kind

    def __repr__(self) -> str:
        return f"ScoreFunction({self.tag()})" if self.kind != "pw" else "ScoreFunction(pw)"


HAM = ScoreFunction("ham")
DOM = ScoreFunction("dom")
L1 = ScoreFunction("l1")
MIN = ScoreFunction("min")
MAX = ScoreFunction("max")
EQ = ScoreFunction("eq")
MULT = ScoreFunction("mult")


def thr(delta: int) -> ScoreFunction:
    if delta <= 0:
        raise ValueError("threshold delta must be positive")
    return ScoreFunction("thr", delta=delta)


def l2p(p: int) -> ScoreFunction:
    """Even power score (x - y)^(2p)."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    return ScoreFunction("l2p", p=p)


def l2p1(p: int) -> ScoreFunction:
    """Odd power score |x - y|^(2p+1)."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    return ScoreFunction("l2p1", p=p)


def weighted_eq(w: Weight) -> ScoreFunction:
    return ScoreFunction("weq", weight=w)


def piecewise(pp: PiecewisePolynomial) -> ScoreFunction:
    return ScoreFunction("pw", pp=pp)


def parse_score(tag: str) -> ScoreFunction:
    name, _, arg = tag.partition(":")
    if name == "thr":
        return thr(int(arg))
    if name == "l2p":
        return l2p(int(arg))
    if name == "l2p1":
        return l2p1(int(arg))
    simple = {"ham": HAM, "dom": DOM, "l1": L1, "min": MIN, "max": MAX, "eq": EQ, "mult": MULT}
    if name in simple:
        return simple[name]
    raise ValueError(f"unknown score tag {tag!r}")


def eval_score(f: ScoreFunction, x, y) -> int:
    """x <> y under the STAR rules; always an exact integer."""
    if x is STAR or y is STAR:
        return 0
    k = f.kind
    if k == "ham":
        return 1 if x != y else 0
    if k == "dom":
        return 1 if x <= y else 0
    if k == "thr":
        return 1 if abs(x - y) >= f.delta else 0
    if k == "l1":
        return abs(x - y)
    if k == "l2p":
        return (x - y) ** (2 * f.p)
    if k == "l2p1":
        return abs(x - y) ** (2 * f.p + 1)
    if k == "min":
        return min(x, y)
    if k == "max":
        return max(x, y)
    if k == "eq":
        return 1 if x == y else 0
    if k == "mult":
        return x * y
    if k == "weq":
        return f.weight(x) if x == y else 0
    if k == "pw":
        return eval_piecewise(f.pp, x, y)
    raise ValueError(f"unknown score kind {k!r}")


def score_outer(f: ScoreFunction, fx: tuple[np.ndarray, np.ndarray], gy: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Score table over the outer product of two filtered value/mask vectors.

    Arrays may be int64 or object dtype; the result matches the input dtype.
    """
    xv, xm = fx
    yv, ym = gy
    both = np.outer(xm, ym)
    k = f.kind
    X = xv[:, None]
    Y = yv[None, :]
    if k == "ham":
        out = (X != Y).astype(xv.dtype)
    elif k == "dom":
        out = (X <= Y).astype(xv.dtype)
    elif k == "thr":
        out = (np.abs(X - Y) >= f.delta).astype(xv.dtype)
    elif k == "l1":
        out = np.abs(X - Y)
    elif k == "l2p":
        out = (X - Y) ** (2 * f.p)
    elif k == "l2p1":
        out = np.abs(X - Y) ** (2 * f.p + 1)
    elif k == "min":
        out = np.minimum(X, Y)
    elif k == "max":
        out = np.maximum(X, Y)
    elif k == "eq":
        out = (X == Y).astype(xv.dtype)
    elif k == "mult":
        out = X * Y
    elif k == "weq":
        out = (X == Y).astype(xv.dtype) * f.weight.on_array(xv)[:, None]
    elif k == "pw":
        acc = np.zeros((len(xv), len(yv)), dtype=object)
        for t in f.pp.summands:
            ind = (t.a * X + t.b * Y + t.c) > 0
            acc = acc + t.poly.eval_grid(xv, yv) * ind
        out = acc
    else:
        raise ValueError(f"unknown score kind {k!r}")
    return np.where(both, out, xv.dtype.type(0) if xv.dtype != object else 0)


def score_elementwise(f: ScoreFunction, fx: tuple[np.ndarray, np.ndarray], gy: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Elementwise score over two equal-length value/mask vectors."""
    xv, xm = fx
    yv, ym = gy
    both = xm & ym
    k = f.kind
    if k == "ham":
        out = (xv != yv).astype(xv.dtype)
    elif k == "dom":
        out = (xv <= yv).astype(xv.dtype)
    elif k == "thr":
        out = (np.abs(xv - yv) >= f.delta).astype(xv.dtype)
    elif k == "l1":
        out = np.abs(xv - yv)
    elif k == "l2p":
        out = (xv - yv) ** (2 * f.p)
    elif k == "l2p1":
        out = np.abs(xv - yv) ** (2 * f.p + 1)
    elif k == "min":
        out = np.minimum(xv, yv)
    elif k == "max":
        out = np.maximum(xv, yv)
    elif k == "eq":
        out = (xv == yv).astype(xv.dtype)
    elif k == "mult":
        out = xv * yv
    elif k == "weq":
        out = (xv == yv).astype(xv.dtype) * f.weight.on_array(xv)
    elif k == "pw":
        acc = np.zeros(len(xv), dtype=object)
        xo = xv.astype(object)
        yo = yv.astype(object)
        for t in f.pp.summands:
            ind = (t.a * xo + t.b * yo + t.c) > 0
            val = np.zeros(len(xv), dtype=object)
            for i, j, c in t.poly.monomials():
                val += c * xo**i * yo**j
            acc = acc + val * ind
        out = acc
    else:
        raise ValueError(f"unknown score kind {k!r}")
    return np.where(both, out, xv.dtype.type(0) if xv.dtype != object else 0)


def score_abs_bound(f: ScoreFunction, xr: tuple[int, int], yr: tuple[int, int]) -> int:
    """Upper bound on |x <> y| over integer x in xr, y in yr (inclusive ranges)."""
    mx = max(abs(xr[0]), abs(xr[1]))
    my = max(abs(yr[0]), abs(yr[1]))
    span = max(abs(xr[1] - yr[0]), abs(yr[1] - xr[0]))
    k = f.kind
    if k in ("ham", "dom", "thr", "eq"):
        return 1
    if k == "l1":
        return span
    if k == "l2p":
        return span ** (2 * f.p)
    if k == "l2p1":
        return span ** (2 * f.p + 1)
    if k in ("min", "max"):
        return max(mx, my)
    if k == "mult":
        return mx * my
    if k == "weq":
        # weights are nonnegative and bounded on the declared domain; probe endpoints
        cand = [f.weight(xr[0]), f.weight(xr[1]), f.weight(0) if xr[0] <= 0 <= xr[1] else 0]
        return max(cand)
    if k == "pw":
        b = 0
        for t in f.pp.summands:
            for i, j, c in t.poly.monomials():
                b += abs(c) * mx**i * my**j
        return b
    raise ValueError(f"unknown score kind {k!r}")


# ---------------------------------------------------------------------------
# canonical piecewise expansions of the builtin scores
# ---------------------------------------------------------------------------


def _binomial_poly(sign_x: int, sign_y: int, k: int) -> Poly2:
    """(sign_x*x + sign_y*y)^k as a Poly2."""
    base = Poly2([[0, sign_y], [sign_x, 0]])
    out = Poly2.const(1)
    for _ in range(k):
        out = out * base
    return out


def expansion(f: ScoreFunction) -> PiecewisePolynomial:
    """Canonical piecewise-polynomial form of a builtin score."""
    one = Poly2.const(1)
    k = f.kind
    if k == "ham":
        # 1[x>y] + 1[x<y]
        return PiecewisePolynomial.of(HalfplaneTerm(one, 1, -1, 0), HalfplaneTerm(one, -1, 1, 0))
    if k == "dom":
        # 1[x<=y]
        return PiecewisePolynomial.of(HalfplaneTerm(one, -1, 1, 1))
    if k == "thr":
        # 1[x <= y-delta] + 1[x >= y+delta]
        d = f.delta
        return PiecewisePolynomial.of(HalfplaneTerm(one, -1, 1, 1 - d), HalfplaneTerm(one, 1, -1, 1 - d))
    if k == "l1":
        return PiecewisePolynomial.of(
            HalfplaneTerm(_binomial_poly(1, -1, 1), 1, -1, 0),
            HalfplaneTerm(_binomial_poly(-1, 1, 1), -1, 1, 0),
        )
    if k == "l2p":
        # plain polynomial; trivially-true condition keeps it axis-orthogonal
        return PiecewisePolynomial.of(HalfplaneTerm(_binomial_poly(1, -1, 2 * f.p), 0, 0, 1))
    if k == "l2p1":
        e = 2 * f.p + 1
        return PiecewisePolynomial.of(
            HalfplaneTerm(_binomial_poly(1, -1, e), 1, -1, 0),
            HalfplaneTerm(_binomial_poly(-1, 1, e), -1, 1, 0),
        )
    if k == "min":
        # x*1[x<=y] + y*1[x>y]
        return PiecewisePolynomial.of(HalfplaneTerm(Poly2.x(), -1, 1, 1), HalfplaneTerm(Poly2.y(), 1, -1, 0))
    if k == "max":
        # x*1[x>=y] + y*1[x<y]
        return PiecewisePolynomial.of(HalfplaneTerm(Poly2.x(), 1, -1, 1), HalfplaneTerm(Poly2.y(), -1, 1, 0))
    if k == "eq":
        # 1 - 1[x>y] - 1[x<y]
        return PiecewisePolynomial.of(
            HalfplaneTerm(one, 0, 0, 1),
            HalfplaneTerm(-one, 1, -1, 0),
            HalfplaneTerm(-one, -1, 1, 0),
        )
    if k == "mult":
        return PiecewisePolynomial.of(HalfplaneTerm(Poly2.x() * Poly2.y(), 0, 0, 1))
    if k == "pw":
        return f.pp
    raise ValueError(f"no canonical expansion for score kind {k!r}")
