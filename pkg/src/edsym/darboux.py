"""Euler-Darboux equation models and their symmetry structure.

This module ties the engine together: the three shipped equation models
with their internal-coordinate restriction calculus, symmetry
verification by restricting the universal linearization, the transported
generator/operator dictionaries between the elliptic and hyperbolic
sides, and the commutator hierarchy built from the transported recursion
operators.

Internal coordinates follow the solved-for jet of each model.  The
elliptic and intermediate models are solved for the pure second
x-derivative, so internal jets carry at most one x-derivative; the
hyperbolic model is solved for the mixed derivative, so internal jets are
the pure ones.  Every excluded jet is rewritten by differentiating the
solved form, and the rewrite rules are memoized per model.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ChartMismatchError, DomainError
from .grammar import parse_coeff
from .jets import (CDiffOp, Chart, DiffExpr, ELLIPTIC, HYPERBOLIC,
                   INTERMEDIATE, MultiIndex, jacobi_bracket, linearization,
                   op_apply, op_commutator, op_compose, total_derivative)
from .rational import GR_ONE, GR_ZERO, GaussRat, RatFunc
from .wirtinger import ed_map, pullback_expr, pushforward_expr, split_re_im, transport_op


class EquationModel:
    """A linear scalar equation solved for one principal jet.

    The model knows which jets are internal (not differential
    consequences of the principal one) and can restrict any expression to
    the equation by rewriting the excluded jets.  Rewrite rules are
    derived on demand and memoized under a lock, so one model instance
    can serve several verification threads.
    """

    def __init__(self, name: str, chart: Chart, F: DiffExpr,
                 principal) -> None:
        principal = MultiIndex(*principal)
        if F.chart != chart:
            raise ChartMismatchError("defining function lives on the wrong chart")
        lead = F.terms.get(principal)
        if lead is None:
            raise DomainError(
                f"defining function has no u[{principal.d1},{principal.d2}] term")
        self.name = name
        self.chart = chart
        self.F = F
        self.principal = principal
        rest = F - DiffExpr.jet(chart, principal, lead)
        seed = rest.scaled(-(RatFunc.const(chart.vars, 1) / lead))
        for idx in seed.terms:
            if not self.is_internal(idx):
                raise DomainError(
                    "defining function cannot be solved for the principal "
                    "jet inside internal coordinates")
        self._rules: dict[MultiIndex, DiffExpr] = {principal: seed}
        self._busy: set[MultiIndex] = set()
        self._lock = threading.RLock()

    def is_internal(self, idx) -> bool:
        return not MultiIndex(*idx).dominates(self.principal)

    def rewrite(self, idx) -> DiffExpr:
        """Internal-coordinate form of a single jet."""
        idx = MultiIndex(*idx)
        if self.is_internal(idx):
            return DiffExpr.jet(self.chart, idx)
        with self._lock:
            cached = self._rules.get(idx)
            if cached is not None:
                return cached
            if idx in self._busy:
                raise DomainError(f"cyclic rewrite at u[{idx.d1},{idx.d2}]")
            self._busy.add(idx)
            try:
                tau = idx - self.principal
                axis = 0 if tau.d1 > 0 else 1
                prev = self.rewrite(MultiIndex(idx.d1 - 1, idx.d2)
                                    if axis == 0
                                    else MultiIndex(idx.d1, idx.d2 - 1))
                rule = self.restrict(total_derivative(prev, axis))
            finally:
                self._busy.discard(idx)
            self._rules[idx] = rule
            return rule

    def restrict(self, e: DiffExpr) -> DiffExpr:
        """Rewrite an expression in internal coordinates (fixpoint)."""
        if e.chart != self.chart:
            raise ChartMismatchError(
                f"cannot restrict an expression on chart {e.chart.name!r} "
                f"to the {self.name} equation")
        while True:
            excluded = [idx for idx in e.terms if not self.is_internal(idx)]
            if not excluded:
                return e
            kept = [(idx, c) for idx, c in e.terms.items()
                    if self.is_internal(idx)]
            out = DiffExpr(self.chart, e.free, kept)
            for idx in excluded:
                out = out + self.rewrite(idx).scaled(e.terms[idx])
            e = out

    def __repr__(self):
        return f"EquationModel({self.name!r})"


def _expr(chart: Chart, pairs, denominator: str | None = None) -> DiffExpr:
    total = DiffExpr.zero(chart)
    for coeff_text, idx in pairs:
        total = total + DiffExpr.jet(chart, idx, parse_coeff(coeff_text, chart))
    if denominator is not None:
        den = parse_coeff(denominator, chart)
        total = total.scaled(RatFunc.const(chart.vars, 1) / den)
    return total


def _op(chart: Chart, pairs) -> CDiffOp:
    return CDiffOp(chart, [(MultiIndex(*idx), parse_coeff(text, chart))
                           for text, idx in pairs])


@lru_cache(maxsize=1)
def elliptic_model() -> EquationModel:
    F = _expr(ELLIPTIC, [("x + y", (2, 0)), ("x + y", (0, 2)),
                         ("1", (1, 0)), ("1", (0, 1))])
    return EquationModel("elliptic", ELLIPTIC, F, (2, 0))


@lru_cache(maxsize=1)
def hyperbolic_model() -> EquationModel:
    F = _expr(HYPERBOLIC, [("2*(xi + eta)", (1, 1)),
                           ("1", (1, 0)), ("1", (0, 1))])
    return EquationModel("hyperbolic", HYPERBOLIC, F, (1, 1))


@lru_cache(maxsize=1)
def intermediate_model() -> EquationModel:
    F = _expr(INTERMEDIATE, [("1", (2, 0)), ("1", (0, 2)), ("1/X", (1, 0))])
    return EquationModel("intermediate", INTERMEDIATE, F, (2, 0))


_MODELS = {"elliptic": elliptic_model, "hyperbolic": hyperbolic_model,
           "intermediate": intermediate_model}


def equation_model(name: str) -> EquationModel:
    try:
        factory = _MODELS[name]
    except KeyError:
        raise DomainError(f"unknown equation {name!r}; expected one of "
                          f"{sorted(_MODELS)}") from None
    return factory()


# ----------------------------------------------------------------------
# symmetry verification


@dataclass(frozen=True)
class SymmetryReport:
    equation: str
    candidate: DiffExpr
    residual: DiffExpr

    @property
    def verdict(self) -> bool:
        return self.residual.is_zero


def is_symmetry(phi: DiffExpr, model: EquationModel) -> SymmetryReport:
    """Restrict the linearization of the defining function applied to the
    candidate; the candidate is a symmetry iff the residual vanishes."""
    reduced = model.restrict(phi)
    residual = model.restrict(op_apply(linearization(model.F), reduced))
    return SymmetryReport(model.name, phi, residual)


# ----------------------------------------------------------------------
# transport between the elliptic and hyperbolic sides


def theta(phi: DiffExpr) -> DiffExpr:
    """Hyperbolic generating section to elliptic one: real plus imaginary
    part of the pullback along the complexified contact transformation."""
    if phi.chart != HYPERBOLIC:
        raise ChartMismatchError("theta expects a hyperbolic expression")
    re, im = split_re_im(pullback_expr(ed_map(), phi))
    return re + im


def theta_prime(eta: DiffExpr) -> DiffExpr:
    """Inverse of theta: real minus imaginary part of the pushforward."""
    if eta.chart != ELLIPTIC:
        raise ChartMismatchError("theta_prime expects an elliptic expression")
    re, im = split_re_im(pushforward_expr(ed_map(), eta))
    return re - im


def psi(R: CDiffOp) -> CDiffOp:
    """Hyperbolic recursion operator to elliptic one."""
    if R.chart != HYPERBOLIC:
        raise ChartMismatchError("psi expects a hyperbolic operator")
    re, im = split_re_im(transport_op(ed_map(), R))
    return re + im


def psi_prime(S: CDiffOp) -> CDiffOp:
    """Inverse of psi."""
    if S.chart != ELLIPTIC:
        raise ChartMismatchError("psi_prime expects an elliptic operator")
    re, im = split_re_im(transport_op(ed_map().inverse(), S))
    return re - im


# ----------------------------------------------------------------------
# catalog


@lru_cache(maxsize=1)
def _catalog() -> dict:
    e, h = ELLIPTIC, HYPERBOLIC
    entries: dict[str, object] = {}

    entries["X1"] = _expr(e, [("1", (1, 0)), ("1", (0, 1)),
                              ("2*x", (1, 1)), ("2*y", (1, 1))], "x + y")
    entries["X2"] = _expr(e, [("-y", (1, 0)), ("3*x", (0, 1)),
                              ("-2*y^2", (1, 1)), ("2*x^2", (1, 1)),
                              ("2*x^2", (0, 2)), ("4*y*x", (0, 2)),
                              ("2*y^2", (0, 2)), ("x", (1, 0)),
                              ("y", (0, 1))], "x + y")
    entries["X3"] = _expr(e, [("-y*x", (1, 0)), ("-y^2", (0, 1)),
                              ("x^2", (0, 1)), ("-y*x", (0, 1)),
                              ("-2*y*x^2", (1, 1)), ("-2*y^2*x", (1, 1)),
                              ("x^3", (0, 2)), ("x^2*y", (0, 2)),
                              ("-x*y^2", (0, 2)), ("-y^3", (0, 2))], "x + y")
    entries["X4"] = _expr(e, [("3*x^2*y", (1, 0)), ("x^3", (1, 0)),
                              ("-3*y^3", (0, 1)), ("y^2", (0, 0)),
                              ("-x^2", (0, 0)), ("9*x^2*y", (0, 1)),
                              ("-3*x*y^2", (1, 0)), ("8*x^3*y", (1, 1)),
                              ("4*x^3*y", (0, 2)), ("4*y^3*x", (0, 2)),
                              ("-8*y^3*x", (1, 1)), ("12*x^2*y^2", (0, 2)),
                              ("2*x^4", (1, 1)), ("-2*y^4", (1, 1)),
                              ("-2*x^4", (0, 2)), ("-2*y^4", (0, 2)),
                              ("3*x*y^2", (0, 1)), ("-x^3", (0, 1)),
                              ("-y^3", (1, 0))], "x + y")
    entries["X5"] = _expr(e, [("y^3", (0, 0)), ("x^3", (0, 0)),
                              ("-12*x^2*y^3", (1, 1)), ("-12*x^3*y^2", (1, 1)),
                              ("-20*y^3*x", (0, 1)), ("12*x^3*y", (0, 1)),
                              ("-18*x^2*y^2", (0, 1)), ("4*y^3*x", (1, 0)),
                              ("-12*x^3*y", (1, 0)), ("-18*x^2*y^2", (1, 0)),
                              ("-5*x*y^2", (0, 0)), ("-5*x^2*y", (0, 0)),
                              ("y^4", (0, 1)), ("5*x^4", (0, 1)),
                              ("x^4", (1, 0)), ("5*y^4", (1, 0)),
                              ("-8*y^4*x", (0, 2)), ("-8*y^3*x^2", (0, 2)),
                              ("8*y^2*x^3", (0, 2)), ("8*y*x^4", (0, 2)),
                              ("2*y^4*x", (1, 1)), ("2*x^4*y", (1, 1)),
                              ("2*x^5", (1, 1)), ("2*y^5", (1, 1))], "x + y")
    entries["X6"] = _expr(e, [("-1", (1, 0)), ("1", (0, 1))])
    entries["X7"] = _expr(e, [("1", (0, 0)), ("2*x", (1, 0)), ("2*y", (0, 1))])
    entries["X8"] = _expr(e, [("x", (0, 0)), ("-y", (0, 0)),
                              ("-y^2", (1, 0)), ("x^2", (1, 0)),
                              ("-2*y*x", (1, 0)), ("x^2", (0, 1)),
                              ("-y^2", (0, 1)), ("2*y*x", (0, 1))])
    entries["X9"] = _expr(e, [("1", (0, 0))])

    entries["rho0"] = _expr(e, [("-1", (1, 0)), ("1", (0, 1))])
    entries["rho1"] = _expr(e, [("(x^2 - 2*x*y - y^2)/2", (1, 0)),
                                ("(x^2 + 2*x*y - y^2)/2", (0, 1)),
                                ("(x - y)/2", (0, 0))])
    entries["rho2"] = _expr(e, [("x + y", (0, 2)), ("x - y", (1, 1)),
                                ("(x - y)/(2*(x + y))", (1, 0)),
                                ("(3*x + y)/(2*(x + y))", (0, 1))])

    entries["phi0"] = _expr(h, [("1", (1, 0)), ("-1", (0, 1))])
    entries["phi1"] = _expr(h, [("xi^2", (1, 0)), ("-eta^2", (0, 1)),
                                ("(xi - eta)/2", (0, 0))])
    entries["phi2"] = _expr(h, [("xi", (2, 0)), ("-eta", (0, 2)),
                                ("xi/(xi + eta)", (1, 0)),
                                ("-eta/(xi + eta)", (0, 1))])

    entries["u"] = DiffExpr.jet(e, (0, 0))
    entries["u_hyp"] = DiffExpr.jet(h, (0, 0))

    entries["box"] = _op(h, [("1", (1, 0)), ("-1", (0, 1))])
    entries["sigma"] = _op(h, [("xi", (1, 0)), ("eta", (0, 1)),
                               ("1/2", (0, 0))])
    entries["tau"] = _op(h, [("xi^2", (1, 0)), ("-eta^2", (0, 1)),
                             ("(xi - eta)/2", (0, 0))])
    entries["box_tilde"] = _op(e, [("-1", (1, 0)), ("1", (0, 1))])
    entries["sigma_tilde"] = _op(e, [("x", (1, 0)), ("y", (0, 1)),
                                     ("1/2", (0, 0))])
    entries["tau_tilde"] = _op(e, [("x^2/2 - x*y - y^2/2", (1, 0)),
                                   ("x^2/2 + x*y - y^2/2", (0, 1)),
                                   ("(x - y)/2", (0, 0))])
    return entries


def catalog_names() -> list[str]:
    return sorted(_catalog())


def catalog(name: str):
    """Look up a built-in generating section or recursion operator."""
    try:
        return _catalog()[name]
    except KeyError:
        raise DomainError(f"unknown catalog name {name!r}; "
                          f"see catalog_names()") from None


def classical_family(c1, c2, c3, c4) -> DiffExpr:
    """The four-parameter family of contact symmetries of the hyperbolic
    model: every member is a generating section linear in first-order
    jets, and the recursion triple arises from c3, c2+2*c4, c1 slices."""
    ch = HYPERBOLIC
    xi = RatFunc.variable(ch.vars, "xi")
    eta = RatFunc.variable(ch.vars, "eta")

    def const(c):
        return RatFunc.const(ch.vars, GaussRat(c) if not isinstance(c, GaussRat) else c)

    half = const(Fraction(1, 2))
    cu = const(c1) * (eta - xi) * half + const(c4)
    cxi = -const(c1) * xi * xi + const(c2) * xi - const(c3)
    ceta = const(c1) * eta * eta + const(c2) * eta + const(c3)
    return DiffExpr(ch, ch.const(0),
                    [(MultiIndex(0, 0), cu), (MultiIndex(1, 0), cxi),
                     (MultiIndex(0, 1), ceta)])


# ----------------------------------------------------------------------
# the commutator hierarchy


@lru_cache(maxsize=None)
def hierarchy(m: int, j: int) -> CDiffOp:
    """Nested commutator of the m-th power of the transported first-order
    operator with the transported quadratic one, j times."""
    if m < 1 or j < 0:
        raise DomainError("hierarchy needs m >= 1 and j >= 0")
    if j == 0:
        box_t: CDiffOp = catalog("box_tilde")
        out = box_t
        for _ in range(m - 1):
            out = op_compose(out, box_t)
        return out
    return op_commutator(hierarchy(m, j - 1), catalog("tau_tilde"))


def restricted_generator(m: int, j: int) -> DiffExpr:
    """The hierarchy operator applied to u, restricted to the elliptic
    equation."""
    u = DiffExpr.jet(ELLIPTIC, (0, 0))
    return elliptic_model().restrict(op_apply(hierarchy(m, j), u))


def scalar_ratio(lhs, rhs):
    """The constant c with lhs == c * rhs, or None if there is none
    (vanishing rhs leaves the ratio undetermined)."""
    if rhs.is_zero:
        return None
    if lhs.is_zero:
        return GR_ZERO
    probe = rhs.sorted_indices()[0]
    top = lhs.terms.get(probe)
    if top is None:
        return None
    ratio = top / rhs.terms[probe]
    c = ratio.constant_value()
    if c is None:
        return None
    return c if lhs == rhs.scaled(c) else None


@dataclass(frozen=True)
class RelationCheck:
    family: str
    m: int
    j: int
    expected: Fraction
    measured: GaussRat | None
    holds: bool
    residual: CDiffOp | None


def hierarchy_relations_check(m: int) -> list[RelationCheck]:
    """Verify the three commutator relation families as exact operator
    identities, measuring the actual coefficients."""
    box_t = catalog("box_tilde")
    sigma_t = catalog("sigma_tilde")
    tau_t = catalog("tau_tilde")
    out = []

    def record(family, j, lhs, rhs, expected):
        expected = Fraction(expected)
        scaled = rhs.scaled(GaussRat(expected))
        holds = lhs == scaled
        measured = scalar_ratio(lhs, rhs)
        residual = None if holds else lhs - scaled
        out.append(RelationCheck(family, m, j, expected, measured, holds,
                                 residual))

    for j in range(1, 2 * m + 1):
        record("box", j, op_commutator(hierarchy(m, j), box_t),
               hierarchy(m, j - 1), j * (2 * m - j + 1))
    for j in range(0, 2 * m + 1):
        record("sigma", j, op_commutator(hierarchy(m, j), sigma_t),
               hierarchy(m, j), m - j)
    for j in range(0, 2 * m + 1):
        record("tau", j, op_commutator(hierarchy(m, j), tau_t),
               hierarchy(m, j + 1), 1)
    return out


def generator_chain(m: int, j: int) -> DiffExpr:
    """Bracket nesting of the three elliptic generating sections:
    starting from the first-order one, bracket with the second-order one
    j-1 times, then with the quadratic one m times, restricting after
    each step.  A cross-check against the hierarchy route, expected to
    agree up to a nonzero rational scalar."""
    if j < 1 or m < 0:
        raise DomainError("generator chain needs j >= 1 and m >= 0")
    model = elliptic_model()
    acc = catalog("rho0")
    rho1 = catalog("rho1")
    rho2 = catalog("rho2")
    for _ in range(j - 1):
        acc = model.restrict(jacobi_bracket(acc, rho2))
    for _ in range(m):
        acc = model.restrict(jacobi_bracket(acc, rho1))
    return acc
