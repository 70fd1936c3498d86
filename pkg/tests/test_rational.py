"""Exact arithmetic layer: Gaussian rationals, polynomials, canonical
rational functions."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from edsym import DomainError, GaussRat, Poly2, RatFunc
from edsym.rational import (GR_I, GR_ONE, GR_ZERO, conj_re_im, gauss_pow_i,
                            partial, ratfunc_arith, ratfunc_normalize)

from _gen import rand_poly, rand_ratfunc

XY = ("x", "y")


def P(text_terms):
    """Poly2 from {(e1, e2): coeff} over (x, y)."""
    total = Poly2.zero(XY)
    for exps, c in text_terms.items():
        total = total + Poly2.monomial(XY, exps, c)
    return total


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRat, fractions, fractions)


class TestGaussRat:
    def test_basics(self):
        z = GaussRat(Fraction(1, 2), Fraction(-3, 4))
        assert z.re == Fraction(1, 2) and z.im == Fraction(-3, 4)
        assert GaussRat(5).im == 0
        assert GR_I * GR_I == GaussRat(-1)

    def test_division(self):
        # (1+i)/(1-i) = i
        assert GaussRat(1, 1) / GaussRat(1, -1) == GR_I
        with pytest.raises(DomainError):
            GR_ONE / GR_ZERO

    def test_conj_involution_fixed_points(self):
        z = GaussRat(Fraction(2, 3), Fraction(5, 7))
        assert z.conj().conj() == z
        assert (z * z.conj()).im == 0
        assert GaussRat(4).conj() == GaussRat(4)

    def test_powers(self):
        assert GaussRat(2) ** 5 == GaussRat(32)
        assert GR_I ** 4 == GR_ONE
        assert GaussRat(2) ** -2 == GaussRat(Fraction(1, 4))
        for e in range(8):
            assert gauss_pow_i(e) == GR_I ** e

    def test_str_forms(self):
        assert str(GR_ZERO) == "0"
        assert str(GaussRat(Fraction(-3, 2))) == "-3/2"
        assert str(GR_I) == "i"
        assert str(-GR_I) == "-i"
        assert str(GaussRat(0, Fraction(1, 2))) == "1/2*i"
        assert str(GaussRat(1, 1)) == "(1 + i)"
        assert str(GaussRat(1, -1)) == "(1 - i)"

    @given(gauss, gauss, gauss)
    @settings(max_examples=60, deadline=None)
    def test_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a

    @given(gauss, gauss)
    @settings(max_examples=60, deadline=None)
    def test_conj_is_automorphism(self, a, b):
        assert (a + b).conj() == a.conj() + b.conj()
        assert (a * b).conj() == a.conj() * b.conj()


class TestPoly2:
    def test_ring_ops(self):
        x = Poly2.variable(XY, "x")
        y = Poly2.variable(XY, "y")
        assert (x + y) * (x - y) == P({(2, 0): 1, (0, 2): -1})
        assert (x + y) ** 2 == P({(2, 0): 1, (1, 1): 2, (0, 2): 1})
        assert (x - x).is_zero

    def test_grlex_str(self):
        p = P({(0, 0): 1, (1, 1): 3, (2, 0): 1, (0, 2): -2})
        assert str(p) == "x^2 + 3*x*y - 2*y^2 + 1"

    def test_partial(self):
        p = P({(2, 1): 1})                       # x^2 y
        assert p.partial("x") == P({(1, 1): 2})
        assert p.partial("y") == P({(2, 0): 1})
        assert Poly2.variable(XY, "x").partial("y").is_zero

    def test_partials_commute(self):
        rng = random.Random(11)
        for _ in range(25):
            p = rand_poly(rng, XY, degree=4, terms=5)
            assert p.partial("x").partial("y") == p.partial("y").partial("x")

    def test_compose(self):
        # substitute x -> x+y, y -> x-y into x*y gives x^2 - y^2
        p = P({(1, 1): 1})
        img1 = P({(1, 0): 1, (0, 1): 1})
        img2 = P({(1, 0): 1, (0, 1): -1})
        assert p.compose(img1, img2) == P({(2, 0): 1, (0, 2): -1})

    def test_divexact(self):
        num = P({(2, 0): 1, (0, 2): -1})
        assert num.divexact(P({(1, 0): 1, (0, 1): 1})) == P({(1, 0): 1,
                                                             (0, 1): -1})

    def test_negative_power_rejected(self):
        with pytest.raises(DomainError):
            Poly2.variable(XY, "x") ** -1


class TestRatFunc:
    def test_normalize_gcd(self):
        # (x^2 - y^2)/(x + y) -> x - y
        f = ratfunc_normalize(P({(2, 0): 1, (0, 2): -1}),
                              P({(1, 0): 1, (0, 1): 1}))
        assert f == RatFunc.from_poly(P({(1, 0): 1, (0, 1): -1}))
        assert str(f) == "x - y"

    def test_normalize_content(self):
        f = ratfunc_normalize(P({(1, 0): 2, (0, 1): 2}), P({(0, 0): 2}))
        assert str(f) == "x + y"

    def test_normalize_complex_scalar(self):
        # ((1+i)x)/(1-i) = i*x
        f = ratfunc_normalize(P({(1, 0): GaussRat(1, 1)}),
                              P({(0, 0): GaussRat(1, -1)}))
        assert f == RatFunc.from_poly(P({(1, 0): GR_I}))

    def test_zero_den_rejected(self):
        with pytest.raises(DomainError):
            ratfunc_normalize(P({(0, 0): 1}), Poly2.zero(XY))

    def test_arith(self):
        x = RatFunc.variable(XY, "x")
        y = RatFunc.variable(XY, "y")
        one = RatFunc.const(XY, 1)
        inv = one / (x + y)
        assert inv + inv == RatFunc.const(XY, 2) / (x + y)
        assert (x / (x + y)) * ((x + y) / x) == one
        f = (x - y) / (x + y)
        assert str(f) == "(x - y)/(x + y)"        # stays irreducible
        with pytest.raises(DomainError):
            one / (x - x)

    def test_arith_by_name(self):
        x = RatFunc.variable(XY, "x")
        y = RatFunc.variable(XY, "y")
        assert ratfunc_arith(x, y, "add") == x + y
        assert ratfunc_arith(x, y, "sub") == x - y
        assert ratfunc_arith(x, y, "mul") == x * y
        assert ratfunc_arith(x, x + y, "div") == x / (x + y)
        with pytest.raises(DomainError):
            ratfunc_arith(x, y, "pow")
        with pytest.raises(DomainError):
            ratfunc_arith(x, x - x, "div")

    def test_canonical_uniqueness(self):
        rng = random.Random(23)
        for _ in range(30):
            f = rand_ratfunc(rng, XY, degree=2)
            g = rand_poly(rng, XY, degree=2, nonzero=True)
            assert ratfunc_normalize(f.num * g, f.den * g) == f

    def test_den_monic_and_coprime(self):
        rng = random.Random(5)
        for _ in range(30):
            f = rand_ratfunc(rng, XY, degree=2, allow_den=True)
            if f.den.is_one:
                continue
            assert f.den.leading()[1] == GR_ONE

    def test_field_axioms_random(self):
        rng = random.Random(17)
        for _ in range(20):
            a = rand_ratfunc(rng, XY)
            b = rand_ratfunc(rng, XY)
            c = rand_ratfunc(rng, XY)
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)

    def test_conj_re_im(self):
        x = RatFunc.variable(XY, "x")
        y = RatFunc.variable(XY, "y")
        i = RatFunc.const(XY, GR_I)
        cj, re, im = conj_re_im(i * x)
        assert cj == -(i * x) and re.is_zero and im == x

        # 1/(x + iy): re = x/(x^2+y^2), im = -y/(x^2+y^2)
        f = RatFunc.const(XY, 1) / (x + i * y)
        cj, re, im = conj_re_im(f)
        denom = x * x + y * y
        assert re == x / denom
        assert im == -(y / denom)
        assert re + i * im == f
        assert cj == RatFunc.const(XY, 1) / (x - i * y)

        cj, re, im = conj_re_im((x + y) / (x - y))
        assert im.is_zero and re == (x + y) / (x - y)

    def test_conj_re_im_random(self):
        rng = random.Random(31)
        i = RatFunc.const(XY, GR_I)
        for _ in range(25):
            f = rand_ratfunc(rng, XY, imag=True)
            cj, re, im = conj_re_im(f)
            assert re + i * im == f
            assert conj_re_im(cj)[0] == f

    def test_partial(self):
        x = RatFunc.variable(XY, "x")
        y = RatFunc.variable(XY, "y")
        assert partial(x * x * y, "x") == RatFunc.const(XY, 2) * x * y
        one = RatFunc.const(XY, 1)
        f = one / (x + y)
        assert partial(f, "x") == -(one / ((x + y) * (x + y)))
        assert partial(x, "y").is_zero

    def test_partials_commute_random(self):
        rng = random.Random(41)
        for _ in range(20):
            f = rand_ratfunc(rng, XY, degree=3, allow_den=True)
            assert partial(partial(f, "x"), "y") == partial(partial(f, "y"), "x")

    def test_str_den_forms(self):
        x = RatFunc.variable(XY, "x")
        y = RatFunc.variable(XY, "y")
        one = RatFunc.const(XY, 1)
        assert str(one / (x + y)) == "1/(x + y)"
        assert str(one / (x * x)) == "1/x^2"
        assert str((x + y) / (x - y)) == "(x + y)/(x - y)"
