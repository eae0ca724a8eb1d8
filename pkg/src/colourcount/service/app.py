"""FastAPI app: one POST endpoint per verification pipeline."""
from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .._version import VERSION
from ..counting import ListAssignment, parse_lists
from ..errors import CapacityError, GenerationError, ToolkitError
from ..generators import format_spec, generate, parse_spec
from ..graphs import Graph, format_graph, parse_graph
from ..reports import VerificationReport
from ..verify import (GRID_FIELDS, bounds_grid, check_lemma2, check_markov,
                      run_experiment, verify_thm1, verify_thm4)
from . import schemas


def _instance(payload: schemas.InstancePayload) -> tuple[Graph, ListAssignment | None]:
    g = parse_graph(payload.graph)
    if payload.lists is not None:
        return g, parse_lists(payload.lists, g.n)
    if payload.uniform is not None:
        return g, ListAssignment.uniform(g.n, payload.uniform)
    return g, None


def _report(rep: VerificationReport) -> dict:
    return {"report": rep.to_jsonable(include_runtime=True),
            "passed": rep.passed, "exit_code": rep.exit_code}


def create_app() -> FastAPI:
    app = FastAPI(title="colourcount", version=VERSION)

    @app.exception_handler(ToolkitError)
    async def _toolkit_error(request: Request, exc: ToolkitError) -> JSONResponse:
        body: dict = {"error": type(exc).__name__, "detail": str(exc)}
        status = 400
        if isinstance(exc, (CapacityError, GenerationError)):
            status = 409
        if isinstance(exc, CapacityError):
            body["budget"] = exc.budget
            body["needed"] = exc.needed
        return JSONResponse(status_code=status, content=body)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> dict:
        return {"status": "ok", "version": VERSION}

    @app.post("/verify/thm1", response_model=schemas.ReportResponse)
    def post_verify_thm1(req: schemas.Thm1Request) -> dict:
        g, lists = _instance(req)
        rep = verify_thm1(g, req.ell, lists, req.order,
                          budget=req.budget.to_budget(), source=req.source)
        return _report(rep)

    @app.post("/verify/thm4", response_model=schemas.ReportResponse)
    def post_verify_thm4(req: schemas.Thm4Request) -> dict:
        g, lists = _instance(req)
        rep = verify_thm4(g, lists, req.order,
                          budget=req.budget.to_budget(), source=req.source)
        return _report(rep)

    @app.post("/check/lemma2", response_model=schemas.ReportResponse)
    def post_check_lemma2(req: schemas.Lemma2Request) -> dict:
        g, lists = _instance(req)
        if lists is None:
            raise ToolkitError("lemma2 needs lists or uniform")
        rep = check_lemma2(g, lists, req.colours,
                           budget=req.budget.to_budget(), source=req.source)
        return _report(rep)

    @app.post("/check/markov", response_model=schemas.ReportResponse)
    def post_check_markov(req: schemas.MarkovRequest) -> dict:
        g, lists = _instance(req)
        if lists is None:
            raise ToolkitError("markov check needs lists or uniform")
        rep = check_markov(g, lists, req.ell, req.vertex,
                           budget=req.budget.to_budget(), source=req.source)
        return _report(rep)

    @app.post("/experiment", response_model=schemas.ExperimentResponse)
    def post_experiment(req: schemas.ExperimentRequest) -> dict:
        g, lists = _instance(req)
        if lists is None:
            raise ToolkitError("experiment needs lists or uniform")
        rep, traces = run_experiment(
            g, req.vertex, lists, ell=req.ell, trials=req.trials,
            exact=req.exact, seed=req.seed, thresholds=req.thresholds,
            keep_traces=req.include_traces, budget=req.budget.to_budget(),
            source=req.source)
        out = _report(rep)
        out["traces"] = [json.loads(t.to_json_line()) for t in traces]
        return out

    @app.post("/bounds", response_model=schemas.BoundsResponse)
    def post_bounds(req: schemas.BoundsRequest) -> dict:
        rows = bounds_grid(req.deltas, req.fs, req.qs,
                           n_ref=req.n_ref, jobs=req.jobs)
        return {"fields": GRID_FIELDS, "rows": rows}

    @app.post("/generate", response_model=schemas.GenerateResponse)
    def post_generate(req: schemas.GenerateRequest) -> dict:
        spec = parse_spec(req.spec)
        g, profile = generate(spec)
        return {"graph": format_graph(g), "spec": format_spec(spec),
                "n": g.n, "m": g.m, "profile": profile.summary()}

    return app


app = create_app()
