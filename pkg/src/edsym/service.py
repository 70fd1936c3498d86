"""Request/response models, pure handlers, and the HTTP facade.

The handlers are ordinary functions on pydantic models; the FastAPI app
and the command line driver both call them in process, so every report
has a single source of truth.  Handlers raise the engine's own error
types; the app maps them to HTTP statuses and the driver maps them to
exit codes.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Literal, Optional

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from .darboux import (catalog, catalog_names, classical_family,
                      equation_model, hierarchy, hierarchy_relations_check,
                      is_symmetry, psi, psi_prime, restricted_generator,
                      theta, theta_prime)
from .errors import ChartMismatchError, DomainError, LimitError
from .grammar import (ParseError, from_json, parse_expr, parse_op,
                      print_expr, print_op, to_json)
from .jets import CDiffOp, Chart, DiffExpr, ELLIPTIC, HYPERBOLIC, jacobi_bracket
from .limits import scoped_limits
from .wirtinger import (block_inverse, block_property_checks, ed_map,
                        mat_identity, mat_mul, prolong_block, pullback_expr,
                        pushforward_expr, wirtinger_map)

EquationName = Literal["elliptic", "hyperbolic", "intermediate"]
TransformMode = Literal["theta", "theta_prime", "psi", "psi_prime",
                        "pullback", "pushforward"]


class ObjectView(BaseModel):
    """Canonical rendering of an expression or operator: printed text
    plus the interchange document."""
    kind: Literal["expr", "op"]
    chart: str
    text: str
    doc: dict


def object_view(value) -> ObjectView:
    if isinstance(value, DiffExpr):
        return ObjectView(kind="expr", chart=value.chart.name,
                          text=print_expr(value), doc=to_json(value))
    if isinstance(value, CDiffOp):
        return ObjectView(kind="op", chart=value.chart.name,
                          text=print_op(value), doc=to_json(value))
    raise TypeError(f"cannot render {value!r}")


class SourceModel(BaseModel):
    """One way of naming an input object: grammar text, an interchange
    document, or a catalog name."""
    text: Optional[str] = None
    doc: Optional[dict] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = sum(v is not None for v in (self.text, self.doc, self.name))
        if given != 1:
            raise ValueError("provide exactly one of text, doc, name")
        return self


def _resolve(source: SourceModel, chart: Chart, kind: str):
    """Turn a source into a DiffExpr or CDiffOp on the given chart."""
    if source.name is not None:
        value = catalog(source.name)
    elif source.text is not None:
        value = (parse_expr(source.text, chart) if kind == "expr"
                 else parse_op(source.text, chart))
    else:
        value = from_json(source.doc, expect_chart=chart)
    wanted = DiffExpr if kind == "expr" else CDiffOp
    if not isinstance(value, wanted):
        noun = "an expression" if kind == "expr" else "an operator"
        raise DomainError(f"expected {noun}, got {type(value).__name__}")
    if value.chart != chart:
        raise ChartMismatchError(
            f"expected an object on chart {chart.name!r}, "
            f"got {value.chart.name!r}")
    return value


def _label(source: SourceModel, value) -> str:
    if source.name is not None:
        return source.name
    if source.text is not None:
        return source.text
    return print_expr(value) if isinstance(value, DiffExpr) else print_op(value)


# ----------------------------------------------------------------------
# verify


class VerifyRequest(BaseModel):
    equation: EquationName
    candidates: list[SourceModel] = Field(min_length=1)
    parallel: bool = False
    max_order: Optional[int] = None
    max_degree: Optional[int] = None


class VerifyCheck(BaseModel):
    label: str
    candidate: ObjectView
    symmetry: bool
    residual: ObjectView


class VerifyResponse(BaseModel):
    equation: str
    checks: list[VerifyCheck]
    ok: bool


def verify_handler(req: VerifyRequest) -> VerifyResponse:
    with scoped_limits(req.max_order, req.max_degree):
        model = equation_model(req.equation)

        def one(source: SourceModel) -> VerifyCheck:
            phi = _resolve(source, model.chart, "expr")
            report = is_symmetry(phi, model)
            return VerifyCheck(label=_label(source, phi),
                               candidate=object_view(phi),
                               symmetry=report.verdict,
                               residual=object_view(report.residual))

        if req.parallel and len(req.candidates) > 1:
            with ThreadPoolExecutor() as pool:
                checks = list(pool.map(one, req.candidates))
        else:
            checks = [one(s) for s in req.candidates]
    return VerifyResponse(equation=req.equation, checks=checks,
                          ok=all(c.symmetry for c in checks))


# ----------------------------------------------------------------------
# transform


class TransformRequest(BaseModel):
    mode: TransformMode
    source: SourceModel
    literal: bool = False
    max_order: Optional[int] = None
    max_degree: Optional[int] = None


class TransformResponse(BaseModel):
    mode: str
    input: ObjectView
    result: ObjectView


_MODE_TABLE = {
    # mode: (input kind, input chart)
    "theta": ("expr", HYPERBOLIC),
    "theta_prime": ("expr", ELLIPTIC),
    "psi": ("op", HYPERBOLIC),
    "psi_prime": ("op", ELLIPTIC),
    "pullback": ("expr", HYPERBOLIC),
    "pushforward": ("expr", ELLIPTIC),
}


def transform_handler(req: TransformRequest) -> TransformResponse:
    kind, chart = _MODE_TABLE[req.mode]
    if req.literal and req.mode not in ("pullback", "pushforward"):
        raise DomainError("the literal base change applies only to raw "
                          "pullback and pushforward")
    with scoped_limits(req.max_order, req.max_degree):
        value = _resolve(req.source, chart, kind)
        if req.mode == "theta":
            result = theta(value)
        elif req.mode == "theta_prime":
            result = theta_prime(value)
        elif req.mode == "psi":
            result = psi(value)
        elif req.mode == "psi_prime":
            result = psi_prime(value)
        elif req.mode == "pullback":
            result = pullback_expr(ed_map(literal=req.literal), value)
        else:
            result = pushforward_expr(ed_map(literal=req.literal), value)
    return TransformResponse(mode=req.mode, input=object_view(value),
                             result=object_view(result))


# ----------------------------------------------------------------------
# blocks


class BlocksRequest(BaseModel):
    k: int = Field(ge=0)
    map: Literal["canonical", "ed"] = "canonical"
    max_order: Optional[int] = None
    max_degree: Optional[int] = None


class BlocksResponse(BaseModel):
    k: int
    map: str
    p: list[list[str]]
    q: list[list[str]]
    checks: dict[str, bool]
    ok: bool


def blocks_handler(req: BlocksRequest) -> BlocksResponse:
    with scoped_limits(req.max_order, req.max_degree):
        base = wirtinger_map() if req.map == "canonical" else ed_map()
        p = prolong_block(base, req.k)
        q = block_inverse(base, req.k)
        if req.map == "canonical":
            checks = block_property_checks(req.k)
        else:
            checks = {"inverse": mat_mul(p, q) == mat_identity(req.k + 1)}
    return BlocksResponse(
        k=req.k, map=req.map,
        p=[[str(entry) for entry in row] for row in p],
        q=[[str(entry) for entry in row] for row in q],
        checks=checks, ok=all(checks.values()))


# ----------------------------------------------------------------------
# hierarchy


class HierarchyRequest(BaseModel):
    m: int = Field(ge=1)
    max_j: Optional[int] = Field(default=None, ge=0)
    relations: bool = False
    max_order: Optional[int] = None
    max_degree: Optional[int] = None


class HierarchyRow(BaseModel):
    j: int
    operator: ObjectView
    generator: ObjectView
    vanishes: bool
    expected_vanishes: bool
    ok: bool


class RelationRecord(BaseModel):
    family: Literal["box", "sigma", "tau"]
    j: int
    expected: str
    measured: Optional[str]
    holds: bool
    residual: Optional[ObjectView]


class HierarchyResponse(BaseModel):
    m: int
    rows: list[HierarchyRow]
    relations: Optional[list[RelationRecord]]
    ok: bool


def hierarchy_handler(req: HierarchyRequest) -> HierarchyResponse:
    with scoped_limits(req.max_order, req.max_degree):
        max_j = req.max_j if req.max_j is not None else 2 * req.m + 1
        rows = []
        ok = True
        for j in range(max_j + 1):
            op = hierarchy(req.m, j)
            gen = restricted_generator(req.m, j)
            vanishes = gen.is_zero
            expected = j >= 2 * req.m + 1
            row_ok = vanishes == expected
            ok = ok and row_ok
            rows.append(HierarchyRow(j=j, operator=object_view(op),
                                     generator=object_view(gen),
                                     vanishes=vanishes,
                                     expected_vanishes=expected, ok=row_ok))
        relations = None
        if req.relations:
            relations = []
            for rc in hierarchy_relations_check(req.m):
                relations.append(RelationRecord(
                    family=rc.family, j=rc.j, expected=str(rc.expected),
                    measured=None if rc.measured is None else str(rc.measured),
                    holds=rc.holds,
                    residual=None if rc.residual is None
                    else object_view(rc.residual)))
                ok = ok and rc.holds
    return HierarchyResponse(m=req.m, rows=rows, relations=relations, ok=ok)


# ----------------------------------------------------------------------
# bracket


class BracketRequest(BaseModel):
    equation: EquationName
    a: SourceModel
    b: SourceModel
    max_order: Optional[int] = None
    max_degree: Optional[int] = None


class BracketResponse(BaseModel):
    equation: str
    bracket: ObjectView
    symmetry: bool
    residual: ObjectView
    ok: bool


def bracket_handler(req: BracketRequest) -> BracketResponse:
    with scoped_limits(req.max_order, req.max_degree):
        model = equation_model(req.equation)
        a = _resolve(req.a, model.chart, "expr")
        b = _resolve(req.b, model.chart, "expr")
        raw = jacobi_bracket(a, b)
        report = is_symmetry(raw, model)
        restricted = model.restrict(raw)
    return BracketResponse(equation=req.equation,
                           bracket=object_view(restricted),
                           symmetry=report.verdict,
                           residual=object_view(report.residual),
                           ok=report.verdict)


# ----------------------------------------------------------------------
# catalog


class CatalogInfo(BaseModel):
    name: str
    kind: Literal["expr", "op", "family"]
    chart: str


class CatalogListResponse(BaseModel):
    entries: list[CatalogInfo]


class CatalogEntryResponse(BaseModel):
    name: str
    entry: ObjectView


def catalog_list_handler() -> CatalogListResponse:
    entries = []
    for name in catalog_names():
        value = catalog(name)
        kind = "expr" if isinstance(value, DiffExpr) else "op"
        entries.append(CatalogInfo(name=name, kind=kind,
                                   chart=value.chart.name))
    entries.append(CatalogInfo(name="classical", kind="family",
                               chart="hyperbolic"))
    return CatalogListResponse(entries=entries)


def catalog_entry_handler(name: str,
                          params: Optional[list[str]] = None
                          ) -> CatalogEntryResponse:
    if name == "classical":
        if params is None or len(params) != 4:
            raise DomainError(
                "the classical family needs four rational parameters")
        try:
            cs = [Fraction(p) for p in params]
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad rational parameter: {exc}") from None
        value = classical_family(*cs)
    else:
        if params is not None:
            raise DomainError("parameters apply only to the classical family")
        value = catalog(name)
    return CatalogEntryResponse(name=name, entry=object_view(value))


# ----------------------------------------------------------------------
# the app


def create_app() -> FastAPI:
    app = FastAPI(
        title="edsym",
        description="Exact symmetry calculus for the Euler-Darboux "
                    "equations over Gaussian rationals.")

    @app.exception_handler(ParseError)
    async def _parse_error(request, exc: ParseError):
        span = exc.span
        return JSONResponse(status_code=422, content={
            "error": {"kind": exc.kind, "message": str(exc),
                      "span": {"start": span.start, "end": span.end,
                               "line": span.line, "col": span.col}}})

    @app.exception_handler(LimitError)
    async def _limit_error(request, exc: LimitError):
        return JSONResponse(status_code=413, content={
            "error": {"kind": "limit", "message": str(exc)}})

    @app.exception_handler(DomainError)
    async def _domain_error(request, exc: DomainError):
        return JSONResponse(status_code=400, content={
            "error": {"kind": "domain", "message": str(exc)}})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/verify", response_model=VerifyResponse)
    def route_verify(req: VerifyRequest) -> VerifyResponse:
        return verify_handler(req)

    @app.post("/transform", response_model=TransformResponse)
    def route_transform(req: TransformRequest) -> TransformResponse:
        return transform_handler(req)

    @app.post("/blocks", response_model=BlocksResponse)
    def route_blocks(req: BlocksRequest) -> BlocksResponse:
        return blocks_handler(req)

    @app.post("/hierarchy", response_model=HierarchyResponse)
    def route_hierarchy(req: HierarchyRequest) -> HierarchyResponse:
        return hierarchy_handler(req)

    @app.post("/bracket", response_model=BracketResponse)
    def route_bracket(req: BracketRequest) -> BracketResponse:
        return bracket_handler(req)

    @app.get("/catalog", response_model=CatalogListResponse)
    def route_catalog_list() -> CatalogListResponse:
        return catalog_list_handler()

    @app.get("/catalog/{name}", response_model=CatalogEntryResponse)
    def route_catalog_entry(
        name: str,
        params: Optional[list[str]] = Query(default=None),
    ) -> CatalogEntryResponse:
        return catalog_entry_handler(name, params)

    return app


app = create_app()
