"""Parsing, printing and JSON document round-trips."""
import random

import pytest

from edsym.grammar import (CHART_MISMATCH, LEXICAL, NONLINEARITY, ParseError,
                           SYNTACTIC, UNKNOWN_VARIABLE, from_json, parse_coeff,
                           parse_expr, parse_op, print_expr, print_op, to_json)
from edsym.jets import (CDiffOp, DiffExpr, ELLIPTIC, HYPERBOLIC, INTERMEDIATE,
                        MultiIndex)
from edsym.rational import GaussRat, RatFunc

from _gen import rand_expr, rand_op

CHARTS = (ELLIPTIC, HYPERBOLIC, INTERMEDIATE)


def err(fn, *args):
    with pytest.raises(ParseError) as info:
        fn(*args)
    return info.value


class TestParseExpr:
    def test_single_jet(self):
        assert parse_expr("u[1,0]", ELLIPTIC) == DiffExpr.jet(ELLIPTIC, (1, 0))

    def test_bare_u_is_the_zeroth_jet(self):
        assert parse_expr("u", ELLIPTIC) == DiffExpr.jet(ELLIPTIC, (0, 0))

    def test_signs_and_merging(self):
        got = parse_expr("u[1,0] - u[1,0] + 2*u[0,1]", ELLIPTIC)
        assert got == DiffExpr.jet(ELLIPTIC, (0, 1)).scaled(GaussRat(2))

    def test_coefficient_chain(self):
        got = parse_expr("3/2*x*u[1,1]", ELLIPTIC)
        x = RatFunc.variable(ELLIPTIC.vars, "x")
        want = DiffExpr.jet(ELLIPTIC, (1, 1)).scaled(
            x.scale(GaussRat(3) / GaussRat(2)))
        assert got == want

    def test_division_in_coefficient(self):
        got = parse_expr("1/(x + y)*u[2,0]", ELLIPTIC)
        x = RatFunc.variable(ELLIPTIC.vars, "x")
        y = RatFunc.variable(ELLIPTIC.vars, "y")
        assert got == DiffExpr.jet(ELLIPTIC, (2, 0)).scaled((x + y).inverse())

    def test_division_after_jet_rejected(self):
        e = err(parse_expr, "u[2,0]/(x + y)", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_imaginary_unit(self):
        got = parse_expr("i*u[0,1]", HYPERBOLIC)
        assert got == DiffExpr.jet(HYPERBOLIC, (0, 1)).scaled(GaussRat(0, 1))

    def test_free_term(self):
        got = parse_expr("x^2 - u[1,0]", ELLIPTIC)
        x = RatFunc.variable(ELLIPTIC.vars, "x")
        assert got.free == x * x
        assert got.coefficient((1, 0)) == ELLIPTIC.const(-1)

    def test_hyperbolic_variables(self):
        got = parse_expr("xi*u[1,0] + eta*u[0,1]", HYPERBOLIC)
        assert got.coefficient((1, 0)) == RatFunc.variable(
            HYPERBOLIC.vars, "xi")


class TestParseOp:
    def test_plain_derivative(self):
        assert parse_op("D[1,0]", ELLIPTIC) == CDiffOp.d(ELLIPTIC, (1, 0))

    def test_identity_symbol(self):
        got = parse_op("x*I + D[0,1]", ELLIPTIC)
        want = (CDiffOp.identity(ELLIPTIC,
                                 RatFunc.variable(ELLIPTIC.vars, "x"))
                + CDiffOp.d(ELLIPTIC, (0, 1)))
        assert got == want

    def test_difference(self):
        got = parse_op("D[1,0] - D[0,1]", HYPERBOLIC)
        assert got == (CDiffOp.d(HYPERBOLIC, (1, 0))
                       - CDiffOp.d(HYPERBOLIC, (0, 1)))


class TestParseErrors:
    def test_lexical(self):
        e = err(parse_expr, "u[1,0] $", ELLIPTIC)
        assert e.kind == LEXICAL
        assert (e.span.start, e.span.end) == (7, 8)
        assert e.span.line == 1 and e.span.col == 8

    def test_syntactic_dangling_plus(self):
        e = err(parse_expr, "u[1,0] +", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_syntactic_unclosed_index(self):
        e = err(parse_expr, "u[1,", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_negative_index_is_syntactic(self):
        e = err(parse_expr, "x*u[-1,0]", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_nonlinearity_product(self):
        e = err(parse_expr, "u[0,0]*u[1,0]", ELLIPTIC)
        assert e.kind == NONLINEARITY
        # span points at the offending '*'
        assert (e.span.start, e.span.end) == (6, 7)

    def test_nonlinearity_power(self):
        e = err(parse_expr, "u[1,0]^2", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_nonlinearity_operator_product(self):
        e = err(parse_op, "D[1,0]*D[0,1]", ELLIPTIC)
        assert e.kind == NONLINEARITY

    def test_jet_inside_coefficient(self):
        e = err(parse_expr, "1/u[1,0]", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_unknown_variable(self):
        e = err(parse_expr, "z*u[1,0]", ELLIPTIC)
        assert e.kind == UNKNOWN_VARIABLE
        assert (e.span.start, e.span.end) == (0, 1)

    def test_variables_do_not_cross_charts(self):
        e = err(parse_expr, "xi*u[1,0]", ELLIPTIC)
        assert e.kind == UNKNOWN_VARIABLE
        e = err(parse_expr, "x*u[1,0]", HYPERBOLIC)
        assert e.kind == UNKNOWN_VARIABLE

    def test_wrong_head_symbol(self):
        assert err(parse_expr, "D[1,0]", ELLIPTIC).kind == UNKNOWN_VARIABLE
        assert err(parse_op, "u[1,0]", ELLIPTIC).kind == UNKNOWN_VARIABLE

    def test_operator_with_free_term(self):
        e = err(parse_op, "x + D[1,0]", ELLIPTIC)
        assert e.kind == SYNTACTIC

    def test_spans_stay_inside_input(self):
        bad = ["u[1,0] $", "u[1,", "u[0,0]*u[1,0]", "z*u[1,0]", "1/u[1,0]",
               "x*u[-1,0]", "u[1,0]^2", "u[1,0] +"]
        for text in bad:
            e = err(parse_expr, text, ELLIPTIC)
            assert 0 <= e.span.start <= e.span.end <= len(text) + 1
            assert e.span.line >= 1 and e.span.col >= 1

    def test_message_carries_location(self):
        e = err(parse_expr, "z*u[1,0]", ELLIPTIC)
        assert "line 1" in str(e) and "col 1" in str(e)


class TestParseCoeff:
    def test_full_arithmetic(self):
        got = parse_coeff("(x+y)^2/(x-y)", ELLIPTIC)
        x = RatFunc.variable(ELLIPTIC.vars, "x")
        y = RatFunc.variable(ELLIPTIC.vars, "y")
        assert got == (x + y) * (x + y) / (x - y)

    def test_jets_rejected(self):
        assert err(parse_coeff, "u[1,0]", ELLIPTIC).kind == SYNTACTIC

    def test_trailing_garbage_rejected(self):
        assert err(parse_coeff, "x*", ELLIPTIC).kind == SYNTACTIC


class TestPrinting:
    def test_canonical_order(self):
        e = parse_expr("u[0,1] - u[1,0]", ELLIPTIC)
        assert print_expr(e) == "-1*u[1,0] + u[0,1]"

    def test_zero_expression(self):
        assert print_expr(DiffExpr.zero(ELLIPTIC)) == "0"
        assert print_op(CDiffOp.zero(ELLIPTIC)) == "0"

    def test_identity_prints_as_i(self):
        op = parse_op("2*I + D[1,0]", ELLIPTIC)
        assert print_op(op) == "D[1,0] + 2*I"

    def test_denominator_forms(self):
        e = parse_expr("1/(x + y)*u[1,0] + x/(x - y)*u[0,1]", ELLIPTIC)
        text = print_expr(e)
        assert parse_expr(text, ELLIPTIC) == e

    def test_print_parse_round_trip(self):
        rng = random.Random(55)
        for chart in CHARTS:
            for _ in range(12):
                e = rand_expr(rng, chart, max_order=4, terms=4)
                text = print_expr(e)
                again = parse_expr(text, chart)
                assert again == e
                assert print_expr(again) == text

    def test_print_parse_round_trip_operators(self):
        rng = random.Random(56)
        for chart in CHARTS:
            for _ in range(8):
                a = rand_op(rng, chart, max_order=3, terms=3)
                text = print_op(a)
                again = parse_op(text, chart)
                assert again == a
                assert print_op(again) == text


class TestJson:
    def test_expr_document_shape(self):
        e = parse_expr("x*u[1,0] + 2", ELLIPTIC)
        doc = to_json(e)
        assert doc == {
            "kind": "expr",
            "chart": "elliptic",
            "free": "2",
            "terms": [{"d1": 1, "d2": 0, "coeff": "x"}],
        }

    def test_op_document_shape(self):
        op = parse_op("D[1,0] + x*I", ELLIPTIC)
        doc = to_json(op)
        assert doc == {
            "kind": "op",
            "chart": "elliptic",
            "terms": [{"d1": 1, "d2": 0, "coeff": "1"},
                      {"d1": 0, "d2": 0, "coeff": "x"}],
        }

    def test_round_trip(self):
        rng = random.Random(57)
        for chart in CHARTS:
            for _ in range(10):
                e = rand_expr(rng, chart, max_order=3, terms=4)
                assert from_json(to_json(e)) == e
                a = rand_op(rng, chart, max_order=3, terms=3)
                assert from_json(to_json(a)) == a

    def test_expect_chart(self):
        e = parse_expr("u[1,0]", ELLIPTIC)
        assert from_json(to_json(e), expect_chart=ELLIPTIC) == e
        exc = err(from_json, to_json(e), HYPERBOLIC)
        assert exc.kind == CHART_MISMATCH

    def base_doc(self):
        return {"kind": "expr", "chart": "elliptic", "free": "0",
                "terms": [{"d1": 1, "d2": 0, "coeff": "1"}]}

    def test_rejects_non_object(self):
        assert err(from_json, ["not", "a", "dict"]).kind == SYNTACTIC

    def test_rejects_bad_kind(self):
        doc = self.base_doc()
        doc["kind"] = "matrix"
        assert err(from_json, doc).kind == SYNTACTIC

    def test_rejects_unknown_chart(self):
        doc = self.base_doc()
        doc["chart"] = "polar"
        assert err(from_json, doc).kind == UNKNOWN_VARIABLE

    def test_rejects_missing_and_extra_keys(self):
        doc = self.base_doc()
        del doc["free"]
        assert err(from_json, doc).kind == SYNTACTIC
        doc = self.base_doc()
        doc["note"] = "hi"
        assert err(from_json, doc).kind == SYNTACTIC
        # operators must not carry a free key
        op_doc = {"kind": "op", "chart": "elliptic", "free": "0",
                  "terms": [{"d1": 1, "d2": 0, "coeff": "1"}]}
        assert err(from_json, op_doc).kind == SYNTACTIC

    def test_rejects_bad_indices(self):
        for d1 in (-1, True, "1", 1.0):
            doc = self.base_doc()
            doc["terms"] = [{"d1": d1, "d2": 0, "coeff": "1"}]
            assert err(from_json, doc).kind == SYNTACTIC

    def test_rejects_duplicate_index(self):
        doc = self.base_doc()
        doc["terms"] = [{"d1": 1, "d2": 0, "coeff": "1"},
                        {"d1": 1, "d2": 0, "coeff": "2"}]
        assert err(from_json, doc).kind == SYNTACTIC

    def test_rejects_non_string_coefficients(self):
        doc = self.base_doc()
        doc["terms"] = [{"d1": 1, "d2": 0, "coeff": 1}]
        assert err(from_json, doc).kind == SYNTACTIC
        doc = self.base_doc()
        doc["free"] = 7
        assert err(from_json, doc).kind == SYNTACTIC

    def test_rejects_bad_terms_container(self):
        doc = self.base_doc()
        doc["terms"] = {"d1": 1}
        assert err(from_json, doc).kind == SYNTACTIC

    def test_coefficient_errors_surface(self):
        doc = self.base_doc()
        doc["terms"] = [{"d1": 1, "d2": 0, "coeff": "z + 1"}]
        assert err(from_json, doc).kind == UNKNOWN_VARIABLE
