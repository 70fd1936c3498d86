"""Exact scalar arithmetic: Gaussian rationals and canonical rational functions.

The coefficient field of the whole engine is Q(i).  Coefficients of
differential expressions are rational functions in the two base variables of
a chart, held in a canonical reduced form:

* numerator and denominator are coprime polynomials over Q(i),
* the denominator is monic with respect to the graded-lexicographic term
  order (total degree first, then the first variable),
* zero is represented as 0/1, and no zero coefficient is ever stored.

Two equal rational functions therefore always compare equal structurally.
Everything in this module is immutable and exact; there is no floating
point anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DomainError

Exponents = tuple[int, int]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot build an exact rational from {value!r}")


class GaussRat:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    # -- predicates -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_zero(self) -> bool:
        return not self

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic -------------------------------------------------

    def __add__(self, other: "GaussRat") -> "GaussRat":
        return GaussRat(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussRat") -> "GaussRat":
        return GaussRat(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other: "GaussRat") -> "GaussRat":
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussRat(a * c - b * d, a * d + b * c)

    def __truediv__(self, other: "GaussRat") -> "GaussRat":
        if not other:
            raise DomainError("division by zero in Q(i)")
        n = other.re * other.re + other.im * other.im
        a, b, c, d = self.re, self.im, other.re, -other.im
        return GaussRat((a * c - b * d) / n, (a * d + b * c) / n)

    def __pow__(self, e: int) -> "GaussRat":
        if e < 0:
            return GR_ONE / self ** (-e)
        out = GR_ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    # -- identity ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"

    # -- printing ---------------------------------------------------

    def _prints_negative(self) -> bool:
        """True when the canonical string starts with a minus sign."""
        if not self.im:
            return self.re < 0
        if not self.re:
            return self.im < 0
        return False

    def __str__(self) -> str:
        if not self:
            return "0"
        if not self.im:
            return str(self.re)
        if self.im == 1:
            im_s = "i"
        elif self.im == -1:
            im_s = "-i"
        else:
            im_s = f"{self.im}*i"
        if not self.re:
            return im_s
        sign = " - " if self.im < 0 else " + "
        mag = im_s.lstrip("-")
        return f"({self.re}{sign}{mag})"


GR_ZERO = GaussRat(0)
GR_ONE = GaussRat(1)
GR_I = GaussRat(0, 1)


def _grlex_key(exps: Exponents) -> tuple[int, int]:
    return (exps[0] + exps[1], exps[0])


# ----------------------------------------------------------------------
# dict-level polynomial helpers.  Terms are {(e1, e2): GaussRat} with no
# zero values stored; these run hot, so they stay plain functions.

def _tadd_into(acc: dict, key, c: GaussRat) -> None:
    cur = acc.get(key)
    if cur is None:
        if c:
            acc[key] = c
    else:
        s = cur + c
        if s:
            acc[key] = s
        else:
            del acc[key]


def _tadd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        _tadd_into(out, k, c)
    return out


def _tneg(a: dict) -> dict:
    return {k: -c for k, c in a.items()}


def _tscale(a: dict, c: GaussRat) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _tmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (a1, a2), ca in a.items():
        for (b1, b2), cb in b.items():
            _tadd_into(out, (a1 + b1, a2 + b2), ca * cb)
    return out


def _tlead(a: dict) -> tuple[Exponents, GaussRat]:
    key = max(a, key=_grlex_key)
    return key, a[key]


def _tdivexact(a: dict, g: dict) -> dict:
    """Exact multivariate division; raises if g does not divide a."""
    gk, gc = _tlead(g)
    out: dict = {}
    rem = dict(a)
    while rem:
        rk, rc = _tlead(rem)
        qk = (rk[0] - gk[0], rk[1] - gk[1])
        if qk[0] < 0 or qk[1] < 0:
            raise ArithmeticError("inexact polynomial division")
        qc = rc / gc
        out[qk] = qc
        for k, c in g.items():
            _tadd_into(rem, (k[0] + qk[0], k[1] + qk[1]), -(qc * c))
    return out


# ----------------------------------------------------------------------
# gcd kernel.  All pseudo-remainder work happens over Gaussian integers
# (pairs of plain ints) so coefficient growth stays additive instead of
# the quadratic blow-up a naive Euclid over Fraction suffers.

def _zmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _znorm(a) -> int:
    return a[0] * a[0] + a[1] * a[1]


def _zdivexact(a, b):
    n = _znorm(b)
    qr, rr = divmod(a[0] * b[0] + a[1] * b[1], n)
    qi, ri = divmod(a[1] * b[0] - a[0] * b[1], n)
    if rr or ri:
        raise ArithmeticError("inexact Gaussian division")
    return (qr, qi)


def _zpow(a, e: int):
    out = (1, 0)
    while e:
        if e & 1:
            out = _zmul(out, a)
        a = _zmul(a, a)
        e >>= 1
    return out


def _zgcd(a, b):
    """Euclidean gcd in Z[i] with rounding to the nearest lattice point."""
    while b != (0, 0):
        n = _znorm(b)
        pr = a[0] * b[0] + a[1] * b[1]
        pi = a[1] * b[0] - a[0] * b[1]
        q = ((2 * pr + n) // (2 * n), (2 * pi + n) // (2 * n))
        a, b = b, (a[0] - q[0] * b[0] + q[1] * b[1], a[1] - q[0] * b[1] - q[1] * b[0])
    return a


# univariate polynomials over Z[i], stored as {exponent: (re, im)}

def _zu_content(u):
    g = (0, 0)
    for c in u.values():
        g = _zgcd(g, c)
        if _znorm(g) == 1:
            break
    return g


def _zu_prim(u):
    g = _zu_content(u)
    if _znorm(g) == 1:
        return u
    return {e: _zdivexact(c, g) for e, c in u.items()}


def _zu_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            p = _zmul(ca, cb)
            cur = out.get(e)
            if cur is None:
                out[e] = p
            else:
                s = (cur[0] + p[0], cur[1] + p[1])
                if s == (0, 0):
                    del out[e]
                else:
                    out[e] = s
    return out


def _zu_prem(a: dict, b: dict) -> dict:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a  mod b over Z[i]."""
    db = max(b)
    lcb = b[db]
    r = dict(a)
    scale = max(a) - db + 1
    while r:
        dr = max(r)
        if dr < db:
            break
        lcr = r.pop(dr)
        nxt: dict = {}
        for e, c in r.items():
            nxt[e] = _zmul(c, lcb)
        for e, c in b.items():
            if e == db:
                continue
            ee = e + dr - db
            p = _zmul(c, lcr)
            cur = nxt.get(ee)
            if cur is None:
                nxt[ee] = (-p[0], -p[1])
            else:
                s = (cur[0] - p[0], cur[1] - p[1])
                if s == (0, 0):
                    del nxt[ee]
                else:
                    nxt[ee] = s
        r = nxt
        scale -= 1
    if r and scale > 0:
        f = _zpow(lcb, scale)
        r = {e: _zmul(c, f) for e, c in r.items()}
    return r


def _zu_gcd(a: dict, b: dict) -> dict:
    """Primitive gcd in Z[i][t] via the subresultant remainder sequence."""
    if not a:
        return _zu_prim(b)
    if not b:
        return _zu_prim(a)
    a = _zu_prim(a)
    b = _zu_prim(b)
    if max(a) < max(b):
        a, b = b, a
    if max(b) == 0:
        return {0: (1, 0)}
    g = (1, 0)
    h = (1, 0)
    while True:
        delta = max(a) - max(b)
        r = _zu_prem(a, b)
        if not r:
            return _zu_prim(b)
        d = _zmul(g, _zpow(h, delta))
        r = {e: _zdivexact(c, d) for e, c in r.items()}
        a, b = b, r
        if max(b) == 0:
            return {0: (1, 0)}
        g = a[max(a)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = _zdivexact(_zpow(g, delta), _zpow(h, delta - 1))


def _zu_divexact(a: dict, b: dict) -> dict:
    db = max(b)
    lcb = b[db]
    out: dict = {}
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            raise ArithmeticError("inexact univariate division")
        q = _zdivexact(r[dr], lcb)
        out[dr - db] = q
        for e, c in b.items():
            ee = e + dr - db
            p = _zmul(q, c)
            cur = r.get(ee)
            if cur is None:
                r[ee] = (-p[0], -p[1])
            else:
                s = (cur[0] - p[0], cur[1] - p[1])
                if s == (0, 0):
                    del r[ee]
                else:
                    r[ee] = s
    return out


# bivariate polynomials over Z[i], recursive in the first variable:
# {e1: {e2: (re, im)}}

def _zrec(terms: dict) -> dict:
    """Clear denominators of a GaussRat term dict into integer recursive form."""
    scale = 1
    for c in terms.values():
        for d in (c.re.denominator, c.im.denominator):
            scale = scale // gcd(scale, d) * d
    rec: dict = {}
    for (e1, e2), c in terms.items():
        rec.setdefault(e1, {})[e2] = (int(c.re * scale), int(c.im * scale))
    return rec


def _zrec_prim(rec: dict) -> tuple[dict, dict]:
    """Split off the content in the second variable, numeric part included."""
    content: dict = {}
    for u in rec.values():
        content = _zu_gcd(content, u)
        if len(content) == 1 and 0 in content:
            break
    if len(content) == 1 and 0 in content:
        rows = rec
    else:
        rows = {e: _zu_divexact(u, content) for e, u in rec.items()}
    zc = (0, 0)
    for u in rows.values():
        zc = _zgcd(zc, _zu_content(u))
        if _znorm(zc) == 1:
            break
    if _znorm(zc) != 1:
        rows = {e: {ee: _zdivexact(c, zc) for ee, c in u.items()} for e, u in rows.items()}
    return content, rows


def _zu_pow(a: dict, e: int) -> dict:
    out = {0: (1, 0)}
    while e:
        if e & 1:
            out = _zu_mul(out, a)
        e >>= 1
        if e:
            a = _zu_mul(a, a)
    return out


def _zrec_prem(a: dict, b: dict) -> dict:
    """Pseudo-remainder of a by b in the first variable, strict scaling."""
    db = max(b)
    lcb = b[db]
    r = {e: dict(u) for e, u in a.items()}
    scale = max(a) - db + 1
    while r:
        dr = max(r)
        if dr < db:
            break
        lcr = r.pop(dr)
        nxt: dict = {}
        for e, u in r.items():
            prod = _zu_mul(u, lcb)
            if prod:
                nxt[e] = prod
        for e, u in b.items():
            if e == db:
                continue
            prod = _zu_mul(u, lcr)
            ee = e + dr - db
            if ee in nxt:
                merged = dict(nxt[ee])
                for ue, uc in prod.items():
                    cur = merged.get(ue)
                    if cur is None:
                        merged[ue] = (-uc[0], -uc[1])
                    else:
                        s = (cur[0] - uc[0], cur[1] - uc[1])
                        if s == (0, 0):
                            del merged[ue]
                        else:
                            merged[ue] = s
                if merged:
                    nxt[ee] = merged
                else:
                    del nxt[ee]
            elif prod:
                nxt[ee] = {ue: (-uc[0], -uc[1]) for ue, uc in prod.items()}
        r = nxt
        scale -= 1
    if r and scale > 0:
        f = _zu_pow(lcb, scale)
        r = {e: _zu_mul(u, f) for e, u in r.items()}
    return r


def _zrec_gcd(pa: dict, pb: dict) -> dict:
    """Subresultant remainder sequence in the first variable.

    Both arguments must be primitive with respect to the second variable
    and have positive degree in the first; the result is the gcd up to a
    factor free of the first variable.
    """
    g: dict = {0: (1, 0)}
    h: dict = {0: (1, 0)}
    while True:
        delta = max(pa) - max(pb)
        r = _zrec_prem(pa, pb)
        if not r:
            return pb
        d = _zu_mul(g, _zu_pow(h, delta))
        r = {e: _zu_divexact(u, d) for e, u in r.items()}
        pa, pb = pb, r
        if max(pb) == 0:
            return {0: {0: (1, 0)}}
        g = pa[max(pa)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = _zu_divexact(_zu_pow(g, delta), _zu_pow(h, delta - 1))


# modular fast path: a single evaluation of the second variable over
# GF(p^2) can certify that the gcd has degree zero in the first variable,
# which is the overwhelmingly common outcome when reducing a fraction.
# p = 2^61 - 1 is 3 mod 4, so adjoining i really gives the field GF(p^2).

_P = (1 << 61) - 1
_EVAL_POINTS = (1103515245, 2654435761, 40503, 999331, 7368787)


class _FpFail(Exception):
    pass


def _fp_eval(terms: dict, r: int) -> dict:
    """Image of a GaussRat term dict at var2 = r, as {e1: GF(p^2) pair}."""
    out: dict = {}
    inv_cache: dict = {}
    pow_cache: dict = {}
    for (e1, e2), c in terms.items():
        vr = vi = 0
        if c.re:
            d = c.re.denominator % _P
            if d == 0:
                raise _FpFail
            inv = inv_cache.get(d)
            if inv is None:
                inv = inv_cache[d] = pow(d, _P - 2, _P)
            vr = c.re.numerator % _P * inv % _P
        if c.im:
            d = c.im.denominator % _P
            if d == 0:
                raise _FpFail
            inv = inv_cache.get(d)
            if inv is None:
                inv = inv_cache[d] = pow(d, _P - 2, _P)
            vi = c.im.numerator % _P * inv % _P
        rp = pow_cache.get(e2)
        if rp is None:
            rp = pow_cache[e2] = pow(r, e2, _P)
        vr = vr * rp % _P
        vi = vi * rp % _P
        cur = out.get(e1)
        if cur is None:
            out[e1] = (vr, vi)
        else:
            out[e1] = ((cur[0] + vr) % _P, (cur[1] + vi) % _P)
    return {e: c for e, c in out.items() if c != (0, 0)}


def _fp_gcd_degree(a: dict, b: dict) -> int:
    """Degree of gcd of two univariate polynomials over GF(p^2)."""
    while b:
        db = max(b)
        n = (b[db][0] * b[db][0] + b[db][1] * b[db][1]) % _P
        ninv = pow(n, _P - 2, _P)
        lr = b[db][0] * ninv % _P
        li = -b[db][1] * ninv % _P
        b = {e: ((c[0] * lr - c[1] * li) % _P, (c[0] * li + c[1] * lr) % _P)
             for e, c in b.items()}
        r = dict(a)
        while r:
            dr = max(r)
            if dr < db:
                break
            lc = r.pop(dr)
            for e, c in b.items():
                if e == db:
                    continue
                ee = e + dr - db
                pr = (lc[0] * c[0] - lc[1] * c[1]) % _P
                pi = (lc[0] * c[1] + lc[1] * c[0]) % _P
                cur = r.get(ee)
                if cur is None:
                    v = (-pr % _P, -pi % _P)
                else:
                    v = ((cur[0] - pr) % _P, (cur[1] - pi) % _P)
                if v == (0, 0):
                    r.pop(ee, None)
                else:
                    r[ee] = v
        a, b = b, r
    return max(a) if a else -1


def _gcd_free_of_var1(a: dict, b: dict, dxa: int, dxb: int) -> bool:
    """True only if the gcd provably has degree zero in the first variable."""
    for r in _EVAL_POINTS:
        try:
            ua = _fp_eval(a, r)
            ub = _fp_eval(b, r)
        except _FpFail:
            return False
        # the degree bound transfers only when neither leading coefficient
        # vanishes at the evaluation point
        if dxa not in ua or dxb not in ub:
            continue
        return _fp_gcd_degree(ua, ub) == 0
    return False


def _tgcd(a: dict, b: dict) -> dict:
    """Monic gcd of two term dicts (either may be empty)."""
    if not a:
        return _tmonic(b)
    if not b:
        return _tmonic(a)
    # pull out the common monomial factor first; it is cheap and keeps the
    # pseudo-remainder sequence working on deflated exponents
    da1 = min(e1 for e1, _ in a)
    da2 = min(e2 for _, e2 in a)
    db1 = min(e1 for e1, _ in b)
    db2 = min(e2 for _, e2 in b)
    s1 = min(da1, db1)
    s2 = min(da2, db2)
    if da1 or da2:
        a = {(e1 - da1, e2 - da2): c for (e1, e2), c in a.items()}
    if db1 or db2:
        b = {(e1 - db1, e2 - db2): c for (e1, e2), c in b.items()}
    if (0, 0) in a and len(a) == 1 or (0, 0) in b and len(b) == 1:
        return {(s1, s2): GR_ONE}
    if a == b:
        return _tmonic({(e1 + s1, e2 + s2): c for (e1, e2), c in a.items()})
    dxa = max(e1 for e1, _ in a)
    dxb = max(e1 for e1, _ in b)
    if dxa == 0 or dxb == 0 or _gcd_free_of_var1(a, b, dxa, dxb):
        # only the content in the second variable can contribute
        ca: dict = {}
        for u in _zrec(a).values():
            ca = _zu_gcd(ca, u)
            if len(ca) == 1 and 0 in ca:
                break
        if len(ca) == 1 and 0 in ca:
            return {(s1, s2): GR_ONE}
        cb: dict = {}
        for u in _zrec(b).values():
            cb = _zu_gcd(cb, u)
            if len(cb) == 1 and 0 in cb:
                break
        cg = _zu_gcd(ca, cb)
        return _tmonic({(s1, e2 + s2): GaussRat(c[0], c[1])
                        for e2, c in cg.items()})
    ca, pa = _zrec_prim(_zrec(a))
    cb, pb = _zrec_prim(_zrec(b))
    cg = _zu_gcd(ca, cb)
    if max(pa) < max(pb):
        pa, pb = pb, pa
    if max(pb) == 0:
        g = {0: {0: (1, 0)}}
    else:
        g = _zrec_prim(_zrec_gcd(pa, pb))[1]
    out: dict = {}
    for e1, u in g.items():
        for e2, c in _zu_mul(u, cg).items():
            out[(e1 + s1, e2 + s2)] = GaussRat(c[0], c[1])
    return _tmonic(out)


def _tmonic(a: dict) -> dict:
    if not a:
        return a
    _, lc = _tlead(a)
    if lc == GR_ONE:
        return a
    inv = GR_ONE / lc
    return {k: c * inv for k, c in a.items()}


# ----------------------------------------------------------------------


class Poly2:
    """A polynomial over Q(i) in two named variables, stored sparsely."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: tuple[str, str], terms: dict):
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly2 is immutable")

    # -- constructors -----------------------------------------------

    @classmethod
    def zero(cls, variables: tuple[str, str]) -> "Poly2":
        return cls(variables, {})

    @classmethod
    def const(cls, variables: tuple[str, str], c) -> "Poly2":
        if isinstance(c, (int, Fraction)):
            c = GaussRat(c)
        return cls(variables, {(0, 0): c} if c else {})

    @classmethod
    def variable(cls, variables: tuple[str, str], name: str) -> "Poly2":
        if name == variables[0]:
            return cls(variables, {(1, 0): GR_ONE})
        if name == variables[1]:
            return cls(variables, {(0, 1): GR_ONE})
        raise DomainError(f"unknown variable {name!r} for {variables}")

    @classmethod
    def monomial(cls, variables: tuple[str, str], exps: Exponents, c) -> "Poly2":
        if isinstance(c, (int, Fraction)):
            c = GaussRat(c)
        if exps[0] < 0 or exps[1] < 0:
            raise DomainError("negative exponent in monomial")
        return cls(variables, {tuple(exps): c} if c else {})

    # -- predicates and views ---------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_one(self) -> bool:
        return self.terms == {(0, 0): GR_ONE}

    @property
    def degree(self) -> int:
        """Total degree; zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(e1 + e2 for e1, e2 in self.terms)

    def leading(self) -> tuple[Exponents, GaussRat]:
        return _tlead(self.terms)

    def constant_value(self) -> GaussRat | None:
        if not self.terms:
            return GR_ZERO
        if len(self.terms) == 1 and (0, 0) in self.terms:
            return self.terms[(0, 0)]
        return None

    def _check(self, other: "Poly2") -> None:
        if self.vars != other.vars:
            raise DomainError(
                f"cannot mix polynomials in {self.vars} and {other.vars}")

    # -- arithmetic -------------------------------------------------

    def __add__(self, other: "Poly2") -> "Poly2":
        self._check(other)
        return Poly2(self.vars, _tadd(self.terms, other.terms))

    def __sub__(self, other: "Poly2") -> "Poly2":
        self._check(other)
        return Poly2(self.vars, _tadd(self.terms, _tneg(other.terms)))

    def __neg__(self) -> "Poly2":
        return Poly2(self.vars, _tneg(self.terms))

    def __mul__(self, other: "Poly2") -> "Poly2":
        self._check(other)
        return Poly2(self.vars, _tmul(self.terms, other.terms))

    def scale(self, c: GaussRat) -> "Poly2":
        return Poly2(self.vars, _tscale(self.terms, c))

    def __pow__(self, e: int) -> "Poly2":
        if e < 0:
            raise DomainError("negative power of a polynomial")
        out = Poly2.const(self.vars, GR_ONE)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def monic(self) -> "Poly2":
        return Poly2(self.vars, _tmonic(self.terms))

    def divexact(self, g: "Poly2") -> "Poly2":
        self._check(g)
        if g.is_zero:
            raise DomainError("division by the zero polynomial")
        if self.is_zero:
            return self
        return Poly2(self.vars, _tdivexact(self.terms, g.terms))

    def partial(self, name: str) -> "Poly2":
        if name == self.vars[0]:
            pos = 0
        elif name == self.vars[1]:
            pos = 1
        else:
            raise DomainError(f"unknown variable {name!r} for {self.vars}")
        out: dict = {}
        for (e1, e2), c in self.terms.items():
            e = (e1, e2)[pos]
            if e:
                key = (e1 - 1, e2) if pos == 0 else (e1, e2 - 1)
                _tadd_into(out, key, c * GaussRat(e))
        return Poly2(self.vars, out)

    def compose(self, img1: "Poly2", img2: "Poly2") -> "Poly2":
        """Substitute img1, img2 (over any variable pair) for the two
        variables of this polynomial."""
        img1._check(img2)
        out = Poly2.zero(img1.vars)
        pow1: dict[int, Poly2] = {0: Poly2.const(img1.vars, GR_ONE)}
        pow2: dict[int, Poly2] = {0: Poly2.const(img1.vars, GR_ONE)}

        def power(cache, base, e):
            if e not in cache:
                cache[e] = power(cache, base, e - 1) * base
            return cache[e]

        for (e1, e2), c in self.terms.items():
            out = out + (power(pow1, img1, e1) * power(pow2, img2, e2)).scale(c)
        return out

    def conj_coeffs(self) -> "Poly2":
        return Poly2(self.vars, {k: c.conj() for k, c in self.terms.items()})

    def real_coeffs(self) -> "Poly2":
        return Poly2(self.vars,
                     {k: GaussRat(c.re) for k, c in self.terms.items() if c.re})

    def imag_coeffs(self) -> "Poly2":
        return Poly2(self.vars,
                     {k: GaussRat(c.im) for k, c in self.terms.items() if c.im})

    # -- identity ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, tuple(sorted(self.terms.items(),
                                              key=lambda kv: kv[0]))))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Poly2({self.vars}, {self})"

    # -- printing ---------------------------------------------------

    def _mono_str(self, exps: Exponents) -> str:
        pieces = []
        for name, e in zip(self.vars, exps):
            if e == 1:
                pieces.append(name)
            elif e > 1:
                pieces.append(f"{name}^{e}")
        return "*".join(pieces)

    def _term_str(self, exps: Exponents, c: GaussRat) -> str:
        mono = self._mono_str(exps)
        if not mono:
            return str(c)
        if c == GR_ONE:
            return mono
        if c == GR_MINUS_ONE:
            return f"-{mono}"
        return f"{c}*{mono}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=_grlex_key, reverse=True)
        out = self._term_str(keys[0], self.terms[keys[0]])
        for key in keys[1:]:
            c = self.terms[key]
            if c._prints_negative():
                out += " - " + self._term_str(key, -c)
            else:
                out += " + " + self._term_str(key, c)
        return out

    @property
    def is_single_term(self) -> bool:
        return len(self.terms) == 1


GR_MINUS_ONE = GaussRat(-1)


class RatFunc:
    """A rational function num/den over Q(i) in canonical reduced form."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly2, den: Poly2, _trusted: bool = False):
        if not _trusted:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    # -- constructors -----------------------------------------------

    @classmethod
    def from_poly(cls, p: Poly2) -> "RatFunc":
        return cls(p, Poly2.const(p.vars, GR_ONE), _trusted=True)

    @classmethod
    def const(cls, variables: tuple[str, str], c) -> "RatFunc":
        return cls.from_poly(Poly2.const(variables, c))

    @classmethod
    def variable(cls, variables: tuple[str, str], name: str) -> "RatFunc":
        return cls.from_poly(Poly2.variable(variables, name))

    # -- predicates -------------------------------------------------

    @property
    def vars(self) -> tuple[str, str]:
        return self.num.vars

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def constant_value(self) -> GaussRat | None:
        if not self.den.is_one:
            return None
        return self.num.constant_value()

    def _check(self, other: "RatFunc") -> None:
        if self.vars != other.vars:
            raise DomainError(
                f"cannot mix rational functions in {self.vars} and {other.vars}")

    # -- arithmetic -------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        # both operands are canonical, so most of the reduction of the sum
        # can be recovered from a gcd of the denominators alone
        self._check(other)
        if self.den.is_one and other.den.is_one:
            return RatFunc.from_poly(self.num + other.num)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        if self.den.is_one:
            num = self.num * other.den + other.num
            return RatFunc(num, other.den, _trusted=True)
        if other.den.is_one:
            num = self.num + other.num * self.den
            return RatFunc(num, self.den, _trusted=True)
        g = Poly2(self.vars, _tgcd(self.den.terms, other.den.terms))
        if g.is_one:
            num = self.num * other.den + other.num * self.den
            if num.is_zero:
                return RatFunc.from_poly(Poly2.zero(self.vars))
            return RatFunc(num, self.den * other.den, _trusted=True)
        ds = self.den.divexact(g)
        do = other.den.divexact(g)
        num = self.num * do + other.num * ds
        if num.is_zero:
            return RatFunc.from_poly(Poly2.zero(self.vars))
        # whatever still cancels must divide g
        h = Poly2(self.vars, _tgcd(num.terms, g.terms))
        if h.is_one:
            return RatFunc(num, ds * other.den, _trusted=True)
        return RatFunc(num.divexact(h), ds * other.den.divexact(h),
                       _trusted=True)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _trusted=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        # cross-cancel before multiplying; the result is then already reduced
        self._check(other)
        if self.den.is_one and other.den.is_one:
            return RatFunc.from_poly(self.num * other.num)
        if self.is_zero or other.is_zero:
            return RatFunc.from_poly(Poly2.zero(self.vars))
        n1, d2 = _cross_cancel(self.num, other.den)
        n2, d1 = _cross_cancel(other.num, self.den)
        den = d1 * d2
        num = n1 * n2
        if den.is_one:
            return RatFunc.from_poly(num)
        return RatFunc(num, den, _trusted=True)

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise DomainError("division by the zero rational function")
        _, lc = self.num.leading()
        inv = GR_ONE / lc
        return RatFunc(self.den.scale(inv), self.num.scale(inv),
                       _trusted=True)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return RatFunc.const(self.vars, GR_ONE)
        if self.is_zero:
            return self
        # num and den are coprime, hence so are their powers
        num = self.num
        den = self.den
        out_n = Poly2.const(self.vars, GR_ONE)
        out_d = Poly2.const(self.vars, GR_ONE)
        while e:
            if e & 1:
                out_n = out_n * num
                out_d = out_d * den
            e >>= 1
            if e:
                num = num * num
                den = den * den
        return RatFunc(out_n, out_d, _trusted=True)

    def scale(self, c: GaussRat) -> "RatFunc":
        if not c:
            return RatFunc.from_poly(Poly2.zero(self.vars))
        return RatFunc(self.num.scale(c), self.den, _trusted=True)

    def partial(self, name: str) -> "RatFunc":
        dn = self.num.partial(name)
        if self.den.is_one:
            return RatFunc.from_poly(dn)
        dd = self.den.partial(name)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def conj(self) -> "RatFunc":
        # Conjugation is a field automorphism fixing the graded-lex
        # leading monomial, so the canonical form is preserved as-is.
        return RatFunc(self.num.conj_coeffs(), self.den.conj_coeffs(),
                       _trusted=True)

    def re_im(self) -> tuple["RatFunc", "RatFunc"]:
        """Split into real and imaginary parts with real coefficients."""
        if self.den.is_one:
            return (RatFunc.from_poly(self.num.real_coeffs()),
                    RatFunc.from_poly(self.num.imag_coeffs()))
        dc = self.den.conj_coeffs()
        big_num = self.num * dc
        big_den = self.den * dc
        return (RatFunc(big_num.real_coeffs(), big_den),
                RatFunc(big_num.imag_coeffs(), big_den))

    # -- identity ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self})"

    # -- printing ---------------------------------------------------

    def __str__(self) -> str:
        if self.den.is_one:
            return str(self.num)
        num_s = str(self.num)
        if not self.num.is_single_term:
            num_s = f"({num_s})"
        den_s = str(self.den)
        key, _ = self.den.leading()
        bare = self.den.is_single_term and (key[0] == 0 or key[1] == 0)
        if not bare:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def embedded_str(self) -> str:
        """Canonical string safe to splice into a product context."""
        s = str(self)
        if self.den.is_one and not self.num.is_single_term:
            return f"({s})"
        return s


def _cross_cancel(num: Poly2, den: Poly2) -> tuple[Poly2, Poly2]:
    """Divide gcd(num, den) out of both; den is assumed monic."""
    if den.is_one or num.is_zero:
        return num, den
    g = Poly2(num.vars, _tgcd(num.terms, den.terms))
    if g.is_one:
        return num, den
    return num.divexact(g), den.divexact(g)


def _normalize(num: Poly2, den: Poly2) -> tuple[Poly2, Poly2]:
    num._check(den)
    if den.is_zero:
        raise DomainError("zero denominator")
    one = Poly2.const(num.vars, GR_ONE)
    if num.is_zero:
        return Poly2.zero(num.vars), one
    if not den.is_one:
        g = Poly2(num.vars, _tgcd(num.terms, den.terms))
        if not g.is_one:
            num = num.divexact(g)
            den = den.divexact(g)
    _, lc = den.leading()
    if lc != GR_ONE:
        inv = GR_ONE / lc
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


# -- the operation names used in the rest of the engine ----------------

def ratfunc_normalize(num: Poly2, den: Poly2) -> RatFunc:
    """Reduce num/den to the canonical representative."""
    return RatFunc(num, den)


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Exact field arithmetic by operation name; result canonical."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError(f"unknown operation {op!r}; "
                      "expected add, sub, mul or div")


def conj_re_im(f: RatFunc) -> tuple[RatFunc, RatFunc, RatFunc]:
    """Return (complex conjugate, real part, imaginary part) of f."""
    re, im = f.re_im()
    return f.conj(), re, im


def partial(f: RatFunc, name: str) -> RatFunc:
    """Partial derivative of f with respect to a base variable."""
    return f.partial(name)


def gauss_pow_i(e: int) -> GaussRat:
    """i**e for any integer e."""
    return GR_I ** (e % 4)
