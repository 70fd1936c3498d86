"""Text and JSON forms for differential expressions and operators.

The textual grammar is a sum of terms, each an optional rational
coefficient times a jet factor:

    expr   := [sign] term { sign term }
    term   := jet | coeff [ "*" jet ]
    jet    := "u" [ "[" int "," int "]" ]        (bare "u" means u[0,0])
    coeff  := factor { ("*" | "/") factor }      (stops before "* u")
    factor := atom [ "^" int ]
    atom   := int | base variable | "i" | "(" full arithmetic ")"

Coefficients are rational expressions over the chart's two base variables
and the imaginary unit ``i``; full additive arithmetic is available inside
parentheses.  Products of jet factors are rejected with a dedicated
nonlinearity error.  Operators use the same shape with ``D[h,k]`` in place
of ``u[h,k]`` and ``I`` for the identity term.

Printing is canonical: jet terms in descending graded-lexicographic order
of the multi-index, free term last, coefficients in the canonical
reduced form of :mod:`edsym.rational`.  ``parse_expr(print_expr(e)) == e``
holds for every expression.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .jets import CHARTS, CDiffOp, Chart, DiffExpr, MultiIndex
from .rational import GR_I, RatFunc

LEXICAL = "lexical"
SYNTACTIC = "syntactic"
NONLINEARITY = "nonlinearity"
UNKNOWN_VARIABLE = "unknown-variable"
CHART_MISMATCH = "chart-mismatch"


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets plus 1-based line/column of an input region."""

    start: int
    end: int
    line: int
    col: int


class ParseError(Exception):
    def __init__(self, kind: str, message: str, span: SourceSpan):
        super().__init__(f"{kind}: {message} (line {span.line}, col {span.col})")
        self.kind = kind
        self.message = message
        self.span = span


_OPS = "+-*/^()[],"


@dataclass(frozen=True)
class _Token:
    kind: str          # INT, IDENT, one of _OPS, or EOF
    text: str
    start: int
    end: int


def _lex(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            end = pos
            while end < n and text[end].isdigit():
                end += 1
            tokens.append(_Token("INT", text[pos:end], pos, end))
            pos = end
        elif ch.isalpha() or ch == "_":
            end = pos
            while end < n and (text[end].isalnum() or text[end] == "_"):
                end += 1
            tokens.append(_Token("IDENT", text[pos:end], pos, end))
            pos = end
        elif ch in _OPS:
            tokens.append(_Token(ch, ch, pos, pos + 1))
            pos += 1
        else:
            raise ParseError(LEXICAL, f"unexpected character {ch!r}",
                             _span_at(text, pos, pos + 1))
    tokens.append(_Token("EOF", "", n, n))
    return tokens


def _span_at(text: str, start: int, end: int) -> SourceSpan:
    if text and start >= len(text):
        start = len(text) - 1
        end = len(text)
    line = text.count("\n", 0, start) + 1
    nl = text.rfind("\n", 0, start)
    col = start - nl if nl >= 0 else start + 1
    return SourceSpan(start, max(end, start + 1) if text else 0, line, col)


class _Parser:
    """Recursive-descent parser over the token stream."""

    def __init__(self, text: str, chart: Chart, symbol: str):
        self.text = text
        self.chart = chart
        self.symbol = symbol          # "u" for expressions, "D" for operators
        self.tokens = _lex(text)
        self.pos = 0

    # -- token plumbing ---------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(SYNTACTIC, f"expected {kind!r}, found {tok.text or 'end of input'!r}")
        return self.next()

    def fail(self, kind: str, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(kind, message, _span_at(self.text, tok.start, tok.end))

    def _is_jet_symbol(self, tok: _Token) -> bool:
        if tok.kind != "IDENT":
            return False
        if tok.text == self.symbol:
            return True
        return self.symbol == "D" and tok.text == "I"

    # -- grammar ----------------------------------------------------

    def parse_linear(self) -> tuple[RatFunc, list[tuple[MultiIndex, RatFunc]]]:
        free = self.chart.const(0)
        terms: list[tuple[MultiIndex, RatFunc]] = []
        sign = 1
        if self.peek().kind in "+-":
            sign = -1 if self.next().kind == "-" else 1
        while True:
            coeff, idx = self.element()
            if sign < 0:
                coeff = -coeff
            if idx is None:
                free = free + coeff
            else:
                terms.append((idx, coeff))
            tok = self.peek()
            if tok.kind == "EOF":
                return free, terms
            if tok.kind in "+-":
                sign = -1 if self.next().kind == "-" else 1
                continue
            if tok.kind == "*" and self._is_jet_symbol(self.peek(1)):
                self.fail(NONLINEARITY,
                          "product of jet factors is not allowed", tok)
            self.fail(SYNTACTIC, f"unexpected {tok.text!r} after a term", tok)

    def element(self) -> tuple[RatFunc, MultiIndex | None]:
        tok = self.peek()
        if self._is_jet_symbol(tok):
            return self.chart.const(1), self.jet()
        coeff = self.mul_chain(depth=0)
        if self.peek().kind == "*" and self._is_jet_symbol(self.peek(1)):
            self.next()
            return coeff, self.jet()
        return coeff, None

    def jet(self) -> MultiIndex:
        tok = self.next()
        if tok.text == "I":
            return MultiIndex(0, 0)
        if self.peek().kind != "[":
            return MultiIndex(0, 0)
        self.next()
        d1 = int(self.expect("INT").text)
        self.expect(",")
        d2 = int(self.expect("INT").text)
        self.expect("]")
        return MultiIndex(d1, d2)

    def mul_chain(self, depth: int) -> RatFunc:
        value = self.factor(depth)
        while True:
            tok = self.peek()
            if tok.kind == "*":
                if depth == 0 and self._is_jet_symbol(self.peek(1)):
                    return value
                self.next()
                value = value * self.factor(depth)
            elif tok.kind == "/":
                self.next()
                rhs = self.factor(depth)
                try:
                    value = value / rhs
                except DomainError:
                    self.fail(SYNTACTIC, "division by zero in coefficient", tok)
            else:
                return value

    def factor(self, depth: int) -> RatFunc:
        value = self.atom(depth)
        if self.peek().kind == "^":
            caret = self.next()
            tok = self.peek()
            if tok.kind != "INT":
                self.fail(SYNTACTIC, "exponent must be a nonnegative integer",
                          tok if tok.kind != "EOF" else caret)
            self.next()
            value = value ** int(tok.text)
        return value

    def atom(self, depth: int) -> RatFunc:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return self.chart.const(int(tok.text))
        if tok.kind == "IDENT":
            if self._is_jet_symbol(tok):
                self.fail(SYNTACTIC,
                          f"jet factor {tok.text!r} is not allowed inside a "
                          "coefficient", tok)
            self.next()
            if tok.text == "i":
                return self.chart.const(GR_I)
            if tok.text in self.chart.vars:
                return RatFunc.variable(self.chart.vars, tok.text)
            self.fail(UNKNOWN_VARIABLE,
                      f"unknown variable {tok.text!r} on chart "
                      f"{self.chart.name!r}", tok)
        if tok.kind == "(":
            self.next()
            value = self.additive(depth + 1)
            self.expect(")")
            return value
        self.fail(SYNTACTIC,
                  f"expected a coefficient, found {tok.text or 'end of input'!r}")

    def additive(self, depth: int) -> RatFunc:
        sign = 1
        if self.peek().kind in "+-":
            sign = -1 if self.next().kind == "-" else 1
        value = self.mul_chain(depth)
        if sign < 0:
            value = -value
        while self.peek().kind in "+-":
            neg = self.next().kind == "-"
            rhs = self.mul_chain(depth)
            value = value - rhs if neg else value + rhs
        return value


def parse_expr(text: str, chart: Chart) -> DiffExpr:
    """Parse a differential expression on the given chart."""
    parser = _Parser(text, chart, "u")
    free, terms = parser.parse_linear()
    return DiffExpr(chart, free, terms)


def parse_op(text: str, chart: Chart) -> CDiffOp:
    """Parse a C-differential operator; free terms are rejected."""
    parser = _Parser(text, chart, "D")
    free, terms = parser.parse_linear()
    if not free.is_zero:
        parser.fail(SYNTACTIC, "operator has a term with no D factor",
                    parser.tokens[-1])
    return CDiffOp(chart, terms)


def parse_coeff(text: str, chart: Chart) -> RatFunc:
    """Parse a standalone coefficient (full arithmetic, no jets)."""
    parser = _Parser(text, chart, "u")
    value = parser.additive(depth=1)
    tok = parser.peek()
    if tok.kind != "EOF":
        parser.fail(SYNTACTIC, f"unexpected {tok.text!r} in coefficient", tok)
    return value


# ----------------------------------------------------------------------
# printing


def _joined(parts: list[str]) -> str:
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


def _term_text(coeff: RatFunc, factor: str) -> str:
    if coeff.is_one:
        return factor
    return f"{coeff.embedded_str()}*{factor}"


def print_expr(e: DiffExpr) -> str:
    parts = [_term_text(e.terms[idx], f"u[{idx.d1},{idx.d2}]")
             for idx in e.sorted_indices()]
    if not e.free.is_zero or not parts:
        parts.append(str(e.free))
    return _joined(parts)


def print_op(op: CDiffOp) -> str:
    parts = []
    for idx in op.sorted_indices():
        factor = "I" if idx == (0, 0) else f"D[{idx.d1},{idx.d2}]"
        parts.append(_term_text(op.terms[idx], factor))
    if not parts:
        parts.append("0")
    return _joined(parts)


# ----------------------------------------------------------------------
# JSON documents

_DOC_SPAN = SourceSpan(0, 0, 1, 1)


def to_json(value) -> dict:
    """Serializable document for an expression or operator."""
    if isinstance(value, DiffExpr):
        return {
            "kind": "expr",
            "chart": value.chart.name,
            "free": str(value.free),
            "terms": [{"d1": idx.d1, "d2": idx.d2,
                       "coeff": str(value.terms[idx])}
                      for idx in value.sorted_indices()],
        }
    if isinstance(value, CDiffOp):
        return {
            "kind": "op",
            "chart": value.chart.name,
            "terms": [{"d1": idx.d1, "d2": idx.d2,
                       "coeff": str(value.terms[idx])}
                      for idx in value.sorted_indices()],
        }
    raise TypeError(f"cannot serialize {value!r}")


def _doc_fail(message: str, kind: str = SYNTACTIC):
    raise ParseError(kind, message, _DOC_SPAN)


def from_json(doc, expect_chart: Chart | None = None):
    """Rebuild a DiffExpr or CDiffOp from its document form."""
    if not isinstance(doc, dict):
        _doc_fail("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("expr", "op"):
        _doc_fail("document kind must be 'expr' or 'op'")
    required = {"kind", "chart", "terms"} | ({"free"} if kind == "expr" else set())
    if set(doc) != required:
        extra = set(doc) ^ required
        _doc_fail(f"unexpected or missing document keys: {sorted(extra)}")
    chart_name = doc.get("chart")
    chart = CHARTS.get(chart_name)
    if chart is None:
        _doc_fail(f"unknown chart {chart_name!r}", UNKNOWN_VARIABLE)
    if expect_chart is not None and chart != expect_chart:
        _doc_fail(f"document chart {chart.name!r} does not match expected "
                  f"chart {expect_chart.name!r}", CHART_MISMATCH)
    raw = doc.get("terms")
    if not isinstance(raw, list):
        _doc_fail("terms must be a list")
    seen = set()
    terms = []
    for entry in raw:
        if not isinstance(entry, dict) or set(entry) != {"d1", "d2", "coeff"}:
            _doc_fail("each term needs exactly the keys d1, d2, coeff")
        d1, d2 = entry["d1"], entry["d2"]
        if not isinstance(d1, int) or not isinstance(d2, int) \
                or isinstance(d1, bool) or isinstance(d2, bool) \
                or d1 < 0 or d2 < 0:
            _doc_fail(f"multi-index entries must be nonnegative integers, "
                      f"got ({d1!r}, {d2!r})")
        if (d1, d2) in seen:
            _doc_fail(f"duplicate multi-index ({d1}, {d2})")
        seen.add((d1, d2))
        coeff = entry["coeff"]
        if not isinstance(coeff, str):
            _doc_fail("coefficients must be strings")
        terms.append((MultiIndex(d1, d2), parse_coeff(coeff, chart)))
    if kind == "expr":
        free = doc.get("free")
        if not isinstance(free, str):
            _doc_fail("free term must be a string")
        return DiffExpr(chart, parse_coeff(free, chart), terms)
    return CDiffOp(chart, terms)
