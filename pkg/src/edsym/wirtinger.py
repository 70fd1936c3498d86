"""Linear base changes and their prolongation to jets.

A :class:`BaseChange` records an invertible linear substitution
``target_vars = B . source_vars`` with Gaussian-rational entries, together
with the charts on both sides.  Prolonging it to jet level turns each
target total derivative into a constant-coefficient combination of source
total derivatives (rows of ``(B^T)^-1``), and each order-k block of the
jet transformation into a (k+1) x (k+1) matrix over Q(i).

The canonical Wirtinger change sends the intermediate chart (X, Y) to the
hyperbolic chart via xi = X + i*Y, eta = X - i*Y, so that the hyperbolic
total derivatives become the Wirtinger combinations (D_X -+ i*D_Y)/2.  For
its blocks a closed form and a two-term recurrence are both implemented
and cross-checked.  Composing with the real sum/difference change
X = x + y, Y = x - y and rescaling by 1/2 yields the complexified contact
transformation between the elliptic and hyperbolic Euler-Darboux charts.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import ChartMismatchError, DomainError
from .jets import CDiffOp, Chart, DiffExpr, ELLIPTIC, HYPERBOLIC, INTERMEDIATE, MultiIndex
from .rational import (GR_I, GR_ONE, GR_ZERO, GaussRat, Poly2, RatFunc,
                       gauss_pow_i)

Matrix2 = tuple[tuple[GaussRat, GaussRat], tuple[GaussRat, GaussRat]]


def _gr(value) -> GaussRat:
    return value if isinstance(value, GaussRat) else GaussRat(value)


def _det(m: Matrix2) -> GaussRat:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


@dataclass(frozen=True)
class BaseChange:
    """An invertible linear substitution between two charts."""

    source: Chart
    target: Chart
    matrix: Matrix2

    def __post_init__(self):
        if not _det(self.matrix):
            raise DomainError("base change matrix is singular")

    def inverse(self) -> "BaseChange":
        return _inverse_map(self)

    @property
    def det(self) -> GaussRat:
        return _det(self.matrix)


@lru_cache(maxsize=None)
def _inverse_map(bc: BaseChange) -> BaseChange:
    d = _det(bc.matrix)
    (a, b), (c, e) = bc.matrix
    inv = ((e / d, -b / d), (-c / d, a / d))
    return BaseChange(bc.target, bc.source, inv)


def compose_map(outer: BaseChange, inner: BaseChange) -> BaseChange:
    """The base change obtained by applying inner, then outer."""
    if inner.target != outer.source:
        raise ChartMismatchError(
            f"cannot compose: inner target {inner.target.name!r} differs "
            f"from outer source {outer.source.name!r}")
    a, b = outer.matrix, inner.matrix
    prod = tuple(tuple(sum((a[r][k] * b[k][c] for k in range(2)), GR_ZERO)
                       for c in range(2)) for r in range(2))
    return BaseChange(inner.source, outer.target, prod)


# -- the shipped maps --------------------------------------------------


def wirtinger_map() -> BaseChange:
    """xi = X + i*Y, eta = X - i*Y on the intermediate chart."""
    return BaseChange(INTERMEDIATE, HYPERBOLIC,
                      ((GR_ONE, GR_I), (GR_ONE, -GR_I)))


def sum_difference_map() -> BaseChange:
    """X = x + y, Y = x - y from the elliptic chart."""
    one = GR_ONE
    return BaseChange(ELLIPTIC, INTERMEDIATE, ((one, one), (one, -one)))


def ed_map(literal: bool = False) -> BaseChange:
    """The complexified contact transformation from the elliptic to the
    hyperbolic Euler-Darboux chart.

    The canonical form is rescaled by 1/2: xi = ((x+y) + i(x-y))/2 and its
    conjugate, which makes the hyperbolic defining function pull back to
    the elliptic one on the nose.  ``literal=True`` gives the unrescaled
    composition of the Wirtinger and sum/difference changes, under which
    images pick up documented scalar factors.
    """
    lit = compose_map(wirtinger_map(), sum_difference_map())
    if literal:
        return lit
    half = GaussRat(Fraction(1, 2))
    scaled = tuple(tuple(entry * half for entry in row) for row in lit.matrix)
    return BaseChange(ELLIPTIC, HYPERBOLIC, scaled)


# -- derivative transformation and blocks ------------------------------


def derivative_rows(bc: BaseChange) -> Matrix2:
    """Row r expresses the r-th target total derivative in the source
    total derivatives: the transpose-inverse of the base matrix."""
    d = _det(bc.matrix)
    (a, b), (c, e) = bc.matrix
    # (B^T)^{-1} = (B^{-1})^T
    return ((e / d, -c / d), (-b / d, a / d))


@lru_cache(maxsize=None)
def prolong_block(bc: BaseChange, k: int) -> tuple:
    """Order-k block of the prolonged change: entry (r, q) is the
    coefficient of the source jet with q second-variable derivatives in
    the image of the target jet with r second-variable derivatives."""
    if k < 0:
        raise DomainError("block order must be nonnegative")
    rows = derivative_rows(bc)
    block = []
    for r in range(k + 1):
        a = _binomial_expansion(rows[0], k - r)
        b = _binomial_expansion(rows[1], r)
        row = []
        for q in range(k + 1):
            acc = GR_ZERO
            for j in range(max(0, q - r), min(k - r, q) + 1):
                acc = acc + a[j] * b[q - j]
            row.append(acc)
        block.append(tuple(row))
    return tuple(block)


def _binomial_expansion(row: tuple[GaussRat, GaussRat], power: int) -> list:
    """Coefficient list of (c0*D1 + c1*D2)**power by second-variable count."""
    c0, c1 = row
    return [GaussRat(comb(power, j)) * c0 ** (power - j) * c1 ** j
            for j in range(power + 1)]


def closed_form_p(k: int, r: int, s: int) -> GaussRat:
    """Entry (r, s) of the canonical Wirtinger block of order k, by the
    explicit alternating-sum formula."""
    if not (0 <= r <= k and 0 <= s <= k):
        raise DomainError(f"block entry ({r}, {s}) out of range for order {k}")
    lo = max(0, k - r - s)
    hi = min(k - r, k - s)
    total = sum((-1) ** alpha * comb(k - s, alpha) * comb(s, k - r - alpha)
                for alpha in range(lo, hi + 1))
    scale = Fraction(factorial(r) * factorial(k - r) * total,
                     (2 ** k) * factorial(s) * factorial(k - s))
    if (k - r) % 2:
        scale = -scale
    return GaussRat(scale) * GR_I ** (s % 4)


def recurrence_blocks(k_max: int) -> list[tuple]:
    """Canonical Wirtinger blocks for orders 0..k_max via the two-term
    recurrence, as an independent route to the closed form."""
    blocks = [((GR_ONE,),)]
    half = GaussRat(Fraction(1, 2))
    for k in range(k_max):
        prev = blocks[-1]

        def entry(r, s):
            if 0 <= r <= k and 0 <= s <= k:
                return prev[r][s]
            return GR_ZERO

        nxt = []
        for r in range(k + 2):
            row = []
            for s in range(k + 2):
                if r <= k:
                    val = half * (entry(r, s) - GR_I * entry(r, s - 1))
                else:
                    val = half * (entry(k, s) + GR_I * entry(k, s - 1))
                row.append(val)
            nxt.append(tuple(row))
        blocks.append(tuple(nxt))
    return blocks


@lru_cache(maxsize=None)
def block_inverse(bc: BaseChange, k: int) -> tuple:
    """Exact inverse of the order-k block."""
    return _invert_matrix(prolong_block(bc, k))


def _invert_matrix(rows: tuple) -> tuple:
    n = len(rows)
    aug = [list(row) + [GR_ONE if i == j else GR_ZERO for j in range(n)]
           for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise DomainError("block is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = GR_ONE / aug[col][col]
        aug[col] = [entry * inv for entry in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [rc - factor * cc
                          for rc, cc in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# -- pullback of expressions and transport of operators ----------------


def _var_images(bc: BaseChange) -> tuple[Poly2, Poly2]:
    """Target variables written as linear source polynomials."""
    out = []
    for row in bc.matrix:
        terms = {}
        if row[0]:
            terms[(1, 0)] = row[0]
        if row[1]:
            terms[(0, 1)] = row[1]
        out.append(Poly2(bc.source.vars, terms))
    return tuple(out)


def _pull_coeff(bc: BaseChange, f: RatFunc) -> RatFunc:
    img1, img2 = _var_images(bc)
    return RatFunc(f.num.compose(img1, img2), f.den.compose(img1, img2))


def pullback_expr(bc: BaseChange, e: DiffExpr) -> DiffExpr:
    """Rewrite a target-chart expression in source-chart coordinates."""
    if e.chart != bc.target:
        raise ChartMismatchError(
            f"expression on {e.chart.name!r} is not in the target chart "
            f"{bc.target.name!r}")
    free = _pull_coeff(bc, e.free)
    terms = []
    for idx, coeff in e.terms.items():
        k = idx.order
        row = prolong_block(bc, k)[idx.d2]
        moved = _pull_coeff(bc, coeff)
        for q, p in enumerate(row):
            if p:
                terms.append((MultiIndex(k - q, q), moved.scale(p)))
    return DiffExpr(bc.source, free, terms)


def pushforward_expr(bc: BaseChange, e: DiffExpr) -> DiffExpr:
    """Rewrite a source-chart expression in target-chart coordinates."""
    return pullback_expr(bc.inverse(), e)


def transport_op(bc: BaseChange, op: CDiffOp) -> CDiffOp:
    """Conjugate a target-chart operator into the source chart: pull back
    the coefficients and expand each target derivative power in source
    total derivatives."""
    if op.chart != bc.target:
        raise ChartMismatchError(
            f"operator on {op.chart.name!r} is not in the target chart "
            f"{bc.target.name!r}")
    terms = []
    for idx, coeff in op.terms.items():
        k = idx.order
        row = prolong_block(bc, k)[idx.d2]
        moved = _pull_coeff(bc, coeff)
        for q, p in enumerate(row):
            if p:
                terms.append((MultiIndex(k - q, q), moved.scale(p)))
    return CDiffOp(bc.source, terms)


def split_re_im(value):
    """Split an expression or operator into real and imaginary parts
    (coefficients become real; the jet structure is untouched)."""
    if isinstance(value, DiffExpr):
        free_re, free_im = value.free.re_im()
        re_terms, im_terms = [], []
        for idx, coeff in value.terms.items():
            cre, cim = coeff.re_im()
            re_terms.append((idx, cre))
            im_terms.append((idx, cim))
        return (DiffExpr(value.chart, free_re, re_terms),
                DiffExpr(value.chart, free_im, im_terms))
    if isinstance(value, CDiffOp):
        re_terms, im_terms = [], []
        for idx, coeff in value.terms.items():
            cre, cim = coeff.re_im()
            re_terms.append((idx, cre))
            im_terms.append((idx, cim))
        return (CDiffOp(value.chart, re_terms), CDiffOp(value.chart, im_terms))
    raise TypeError(f"cannot split {value!r}")


# ----------------------------------------------------------------------
# tiny exact matrix helpers, enough for the block property checks

def mat_identity(n: int):
    return tuple(tuple(GR_ONE if r == s else GR_ZERO for s in range(n))
                 for r in range(n))


def mat_antidiagonal(n: int):
    return tuple(tuple(GR_ONE if r + s == n - 1 else GR_ZERO
                       for s in range(n)) for r in range(n))


def mat_mul(a, b):
    n, mid, m = len(a), len(b), len(b[0])
    out = []
    for r in range(n):
        row = []
        for s in range(m):
            acc = GR_ZERO
            for t in range(mid):
                acc = acc + a[r][t] * b[t][s]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_conj(a):
    return tuple(tuple(entry.conj() for entry in row) for row in a)


def block_property_checks(k: int) -> dict[str, bool]:
    """The four exact identities tying the canonical derivative blocks
    together: recurrence against closed form, the inverse scaling law,
    conjugation symmetry within a block, and the reality identity."""
    bc = wirtinger_map()
    p = prolong_block(bc, k)
    q = block_inverse(bc, k)
    closed = tuple(tuple(closed_form_p(k, r, s) for s in range(k + 1))
                   for r in range(k + 1))
    by_recurrence = recurrence_blocks(k)[k]
    two_pow = GaussRat(2) ** k
    scaling = all(
        q[r][s] == two_pow * gauss_pow_i(r + s) * p[r][s]
        for r in range(k + 1) for s in range(k + 1))
    return {
        "closed_form": p == closed,
        "recurrence": p == by_recurrence,
        "inverse_scaling": scaling and mat_mul(p, q) == mat_identity(k + 1),
        "conjugation": all(p[r][s].conj() == p[k - r][s]
                           for r in range(k + 1) for s in range(k + 1)),
        "reality": mat_mul(mat_conj(p), q) == mat_antidiagonal(k + 1),
    }
