"""Request and response bodies for the verification service."""
from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, model_validator

from ..counting import DEFAULT_BUDGET, CountBudget


class BudgetModel(BaseModel):
    """Resource limits; defaults mirror the library-wide defaults."""

    nodes: int = DEFAULT_BUDGET.nodes
    subset_vertices: int = DEFAULT_BUDGET.subset_vertices
    memory_bytes: int = DEFAULT_BUDGET.memory_bytes
    enumeration: int = DEFAULT_BUDGET.enumeration

    def to_budget(self) -> CountBudget:
        return CountBudget(nodes=self.nodes,
                           subset_vertices=self.subset_vertices,
                           memory_bytes=self.memory_bytes,
                           enumeration=self.enumeration)


class InstancePayload(BaseModel):
    """A graph in text form plus an optional list assignment.

    lists is the "v: c1 c2 ..." text format; uniform is a single size.
    At most one of the two may be given.
    """

    graph: str
    lists: str | None = None
    uniform: int | None = Field(default=None, ge=1)
    source: str = "<request>"
    budget: BudgetModel = Field(default_factory=BudgetModel)

    @model_validator(mode="after")
    def _one_list_mode(self):
        if self.lists is not None and self.uniform is not None:
            raise ValueError("give lists or uniform, not both")
        return self


class Thm1Request(InstancePayload):
    ell: float
    order: list[int] | None = None


class Thm4Request(InstancePayload):
    order: list[int] | None = None


class Lemma2Request(InstancePayload):
    colours: list[int] | None = None


class MarkovRequest(InstancePayload):
    ell: float
    vertex: int | None = None


class ExperimentRequest(InstancePayload):
    vertex: int
    ell: float | None = None
    trials: int = Field(default=0, ge=0)
    exact: bool = False
    seed: int = 0
    thresholds: dict[int, float] | None = None
    include_traces: bool = False


class BoundsRequest(BaseModel):
    deltas: list[int]
    fs: list[float]
    qs: list[int]
    n_ref: int = Field(default=1000, ge=1)
    jobs: int = Field(default=1, ge=1)


class GenerateRequest(BaseModel):
    spec: str                     # generator-spec text (flat key=value lines)


class ReportResponse(BaseModel):
    report: dict[str, Any]
    passed: bool
    exit_code: int


class ExperimentResponse(ReportResponse):
    traces: list[dict[str, Any]] = Field(default_factory=list)


class BoundsResponse(BaseModel):
    fields: list[str]
    rows: list[dict[str, Any]]


class GenerateResponse(BaseModel):
    graph: str
    spec: str
    n: int
    m: int
    profile: dict[str, Any]


class HealthResponse(BaseModel):
    status: str
    version: str
