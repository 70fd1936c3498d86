"""Jet-space calculus over two base variables.

A chart fixes the two base variable names.  A differential expression is a
finite linear combination of jet coordinates u_sigma with rational-function
coefficients, plus a jet-free term; a C-differential operator is the same
kind of combination of total-derivative powers D_sigma.  Both are immutable
and canonical: no zero coefficient is ever stored, so structural equality
is semantic equality.

Total derivatives act on expressions in the usual prolonged sense,
D_i(u_sigma) = u_{sigma+1_i}.  Evolutionary fields, the Jacobi bracket and
the universal linearization are the standard constructions on sections
that are linear in the jets, which is the only case this engine needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from . import limits
from .errors import ChartMismatchError, DomainError
from .rational import GR_ONE, Fraction, GaussRat, Poly2, RatFunc


class MultiIndex(NamedTuple):
    """Derivative counts along the two base variables."""

    d1: int
    d2: int

    @property
    def order(self) -> int:
        return self.d1 + self.d2

    def __add__(self, other) -> "MultiIndex":
        return MultiIndex(self.d1 + other[0], self.d2 + other[1])

    def __sub__(self, other) -> "MultiIndex":
        return MultiIndex(self.d1 - other[0], self.d2 - other[1])

    def bump(self, axis: int) -> "MultiIndex":
        if axis == 0:
            return MultiIndex(self.d1 + 1, self.d2)
        return MultiIndex(self.d1, self.d2 + 1)

    def dominates(self, other: "MultiIndex") -> bool:
        return self.d1 >= other[0] and self.d2 >= other[1]


def _canon_key(idx: MultiIndex) -> tuple[int, int]:
    return (idx.d1 + idx.d2, idx.d1)


_RESERVED_NAMES = frozenset({"i", "u", "D", "I"})


@dataclass(frozen=True)
class Chart:
    """Names for the two base variables of a jet space."""

    name: str
    vars: tuple[str, str]

    def __post_init__(self):
        a, b = self.vars
        if a == b:
            raise DomainError("chart variables must be distinct")
        for v in (a, b):
            if not v.isidentifier():
                raise DomainError(f"invalid base variable name {v!r}")
            if v in _RESERVED_NAMES:
                raise DomainError(
                    f"base variable name {v!r} is reserved by the expression grammar")

    def const(self, c) -> RatFunc:
        return RatFunc.const(self.vars, c)

    def coord(self, axis: int) -> RatFunc:
        return RatFunc.variable(self.vars, self.vars[axis])


ELLIPTIC = Chart("elliptic", ("x", "y"))
HYPERBOLIC = Chart("hyperbolic", ("xi", "eta"))
INTERMEDIATE = Chart("intermediate", ("X", "Y"))

CHARTS = {c.name: c for c in (ELLIPTIC, HYPERBOLIC, INTERMEDIATE)}


def _require_same_chart(a, b) -> None:
    if a.chart != b.chart:
        raise ChartMismatchError(
            f"cannot combine values on charts "
            f"{a.chart.name!r} and {b.chart.name!r}")


def _coerce_scalar(chart: Chart, c) -> RatFunc:
    if isinstance(c, RatFunc):
        if c.vars != chart.vars:
            raise ChartMismatchError(
                f"coefficient in variables {c.vars} does not live on chart "
                f"{chart.name!r}")
        return c
    if isinstance(c, (int, Fraction, GaussRat)):
        return RatFunc.const(chart.vars, c)
    raise TypeError(f"cannot use {c!r} as a scalar coefficient")


def _checked_terms(chart: Chart, raw: Iterable[tuple]) -> dict:
    terms: dict[MultiIndex, RatFunc] = {}
    for key, coeff in raw:
        idx = MultiIndex(*key)
        if idx.d1 < 0 or idx.d2 < 0:
            raise DomainError(f"negative entry in multi-index {tuple(idx)}")
        limits.check_order(idx.order)
        if coeff.vars != chart.vars:
            raise ChartMismatchError(
                f"coefficient in variables {coeff.vars} does not live on "
                f"chart {chart.name!r}")
        if coeff.is_zero:
            continue
        limits.check_degree(coeff.degree)
        prev = terms.get(idx)
        if prev is None:
            terms[idx] = coeff
        else:
            s = prev + coeff
            if s.is_zero:
                del terms[idx]
            else:
                terms[idx] = s
    return terms


class DiffExpr:
    """A jet-linear differential expression on a chart."""

    __slots__ = ("chart", "free", "terms")

    def __init__(self, chart: Chart, free: RatFunc, terms):
        if free.vars != chart.vars:
            raise ChartMismatchError(
                f"free term in variables {free.vars} does not live on chart "
                f"{chart.name!r}")
        limits.check_degree(free.degree)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "terms", _checked_terms(chart, terms.items()
                           if isinstance(terms, dict) else terms))

    def __setattr__(self, name, value):
        raise AttributeError("DiffExpr is immutable")

    # -- constructors -----------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "DiffExpr":
        return cls(chart, chart.const(0), {})

    @classmethod
    def jet(cls, chart: Chart, idx, coeff=1) -> "DiffExpr":
        return cls(chart, chart.const(0),
                   {MultiIndex(*idx): _coerce_scalar(chart, coeff)})

    @classmethod
    def from_free(cls, chart: Chart, free) -> "DiffExpr":
        return cls(chart, _coerce_scalar(chart, free), {})

    # -- views ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.free.is_zero and not self.terms

    @property
    def order(self) -> int:
        return max((idx.order for idx in self.terms), default=0)

    def coefficient(self, idx) -> RatFunc:
        return self.terms.get(MultiIndex(*idx), self.chart.const(0))

    def sorted_indices(self) -> list[MultiIndex]:
        return sorted(self.terms, key=_canon_key, reverse=True)

    # -- arithmetic -------------------------------------------------

    def __add__(self, other: "DiffExpr") -> "DiffExpr":
        _require_same_chart(self, other)
        merged = list(self.terms.items()) + list(other.terms.items())
        return DiffExpr(self.chart, self.free + other.free, merged)

    def __sub__(self, other: "DiffExpr") -> "DiffExpr":
        return self + (-other)

    def __neg__(self) -> "DiffExpr":
        return DiffExpr(self.chart, -self.free,
                        [(k, -c) for k, c in self.terms.items()])

    def scaled(self, c) -> "DiffExpr":
        f = _coerce_scalar(self.chart, c)
        return DiffExpr(self.chart, self.free * f,
                        [(k, v * f) for k, v in self.terms.items()])

    # -- identity ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffExpr):
            return NotImplemented
        return (self.chart == other.chart and self.free == other.free
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.chart, self.free,
                     tuple(sorted(self.terms.items()))))

    def __repr__(self):
        jets = ", ".join(f"u[{k.d1},{k.d2}]: {c}" for k, c in
                         sorted(self.terms.items()))
        return f"DiffExpr<{self.chart.name}>(free={self.free}, {{{jets}}})"


class CDiffOp:
    """A C-differential operator: a polynomial in total derivatives with
    rational-function coefficients.  The (0, 0) term is the identity."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms):
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", _checked_terms(chart, terms.items()
                           if isinstance(terms, dict) else terms))

    def __setattr__(self, name, value):
        raise AttributeError("CDiffOp is immutable")

    # -- constructors -----------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "CDiffOp":
        return cls(chart, {})

    @classmethod
    def identity(cls, chart: Chart, coeff=1) -> "CDiffOp":
        return cls(chart, {MultiIndex(0, 0): _coerce_scalar(chart, coeff)})

    @classmethod
    def d(cls, chart: Chart, idx, coeff=1) -> "CDiffOp":
        return cls(chart, {MultiIndex(*idx): _coerce_scalar(chart, coeff)})

    # -- views ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        return max((idx.order for idx in self.terms), default=0)

    def coefficient(self, idx) -> RatFunc:
        return self.terms.get(MultiIndex(*idx), self.chart.const(0))

    def sorted_indices(self) -> list[MultiIndex]:
        return sorted(self.terms, key=_canon_key, reverse=True)

    # -- arithmetic -------------------------------------------------

    def __add__(self, other: "CDiffOp") -> "CDiffOp":
        _require_same_chart(self, other)
        merged = list(self.terms.items()) + list(other.terms.items())
        return CDiffOp(self.chart, merged)

    def __sub__(self, other: "CDiffOp") -> "CDiffOp":
        return self + (-other)

    def __neg__(self) -> "CDiffOp":
        return CDiffOp(self.chart, [(k, -c) for k, c in self.terms.items()])

    def scaled(self, c) -> "CDiffOp":
        f = _coerce_scalar(self.chart, c)
        return CDiffOp(self.chart, [(k, v * f) for k, v in self.terms.items()])

    # -- identity ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CDiffOp):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        body = ", ".join(f"D[{k.d1},{k.d2}]: {c}" for k, c in
                         sorted(self.terms.items()))
        return f"CDiffOp<{self.chart.name}>({{{body}}})"


# ----------------------------------------------------------------------
# operations


def total_derivative(e: DiffExpr, axis: int) -> DiffExpr:
    """Total derivative along base variable 0 or 1."""
    if axis not in (0, 1):
        raise DomainError(f"axis must be 0 or 1, got {axis}")
    name = e.chart.vars[axis]
    out: list[tuple[MultiIndex, RatFunc]] = []
    for idx, c in e.terms.items():
        out.append((idx, c.partial(name)))
        out.append((idx.bump(axis), c))
    return DiffExpr(e.chart, e.free.partial(name), out)


def d_multi(e: DiffExpr, idx) -> DiffExpr:
    """Iterated total derivative D_sigma."""
    d1, d2 = idx
    for _ in range(d1):
        e = total_derivative(e, 0)
    for _ in range(d2):
        e = total_derivative(e, 1)
    return e


def evolutionary_apply(phi: DiffExpr, psi: DiffExpr) -> DiffExpr:
    """Apply the evolutionary field of phi to psi."""
    _require_same_chart(phi, psi)
    out = DiffExpr.zero(phi.chart)
    for idx, c in psi.terms.items():
        out = out + d_multi(phi, idx).scaled(c)
    return out


def jacobi_bracket(phi: DiffExpr, psi: DiffExpr) -> DiffExpr:
    """Jacobi bracket {phi, psi} of two generating sections."""
    return evolutionary_apply(phi, psi) - evolutionary_apply(psi, phi)


def op_apply(op: CDiffOp, e: DiffExpr) -> DiffExpr:
    if op.chart != e.chart:
        raise ChartMismatchError(
            f"operator on {op.chart.name!r} applied to expression on "
            f"{e.chart.name!r}")
    out = DiffExpr.zero(e.chart)
    for idx, c in op.terms.items():
        out = out + d_multi(e, idx).scaled(c)
    return out


def _iter_partials(f: RatFunc, chart: Chart, up_to: MultiIndex):
    """Yield (rho, partial^rho f) for all rho componentwise below up_to."""
    v1, v2 = chart.vars
    col = f
    for r1 in range(up_to.d1 + 1):
        g = col
        for r2 in range(up_to.d2 + 1):
            yield MultiIndex(r1, r2), g
            if r2 < up_to.d2:
                g = g.partial(v2)
        if r1 < up_to.d1:
            col = col.partial(v1)


def op_compose(a: CDiffOp, b: CDiffOp) -> CDiffOp:
    """Composition a after b, expanded by the Leibniz rule."""
    _require_same_chart(a, b)
    out: list[tuple[MultiIndex, RatFunc]] = []
    for sigma, ca in a.terms.items():
        for tau, cb in b.terms.items():
            for rho, df in _iter_partials(cb, a.chart, sigma):
                if df.is_zero:
                    continue
                weight = math.comb(sigma.d1, rho.d1) * math.comb(sigma.d2, rho.d2)
                coeff = (ca * df).scale(GaussRat(weight))
                out.append((sigma - rho + tau, coeff))
    return CDiffOp(a.chart, out)


def op_commutator(a: CDiffOp, b: CDiffOp) -> CDiffOp:
    return op_compose(a, b) - op_compose(b, a)


def linearization(F: DiffExpr) -> CDiffOp:
    """Universal linearization of a jet-linear expression: the operator
    whose coefficients are the jet coefficients of F."""
    return CDiffOp(F.chart, dict(F.terms))
