"""HTTP service exposing the certificate pipeline.

A thin FastAPI layer over the same report builders the CLI uses.  Request
bodies either name a bundled preset or carry a full diagram payload in the
diagram JSON schema.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, model_validator

from . import __version__
from .jsonio import SCHEMA
from .reports import (
    InputError,
    InvariantError,
    check_report,
    enumerate_report,
    homology_full_report,
    presets_report,
    property_p_report,
    prym_scan_report,
)

app = FastAPI(
    title="flatkern",
    version=__version__,
    description="Exact certificates for cylinder decompositions of translation surfaces",
)


class DiagramSource(BaseModel):
    preset: Optional[str] = None
    diagram: Optional[dict] = None
    metric: str = "unit-rational"

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.preset is None) == (self.diagram is None):
            raise ValueError("provide exactly one of 'preset' or 'diagram'")
        return self

    @property
    def source(self):
        return self.preset if self.preset is not None else self.diagram


class EnumerateRequest(BaseModel):
    base: str | dict = Field(description="preset id or base prediagram payload")
    fixed_cylinders: int = 2
    kind: Optional[str] = None


class PropertyPRequest(DiagramSource):
    metric: str = "golden-irrational"
    locus: str = "prym"
    explicit_basis: Optional[list[list[dict]]] = None


class Report(BaseModel):
    schema_id: str = Field(default=SCHEMA, alias="schema")
    payload: dict[str, Any]

    model_config = {"populate_by_name": True}


def _guard(builder) -> Report:
    try:
        return Report(payload=builder())
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    except InvariantError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


@app.get("/presets", response_model=Report)
def get_presets() -> Report:
    return _guard(presets_report)


@app.post("/check", response_model=Report)
def post_check(req: DiagramSource) -> Report:
    return _guard(lambda: check_report(req.source, req.metric))


@app.post("/enumerate", response_model=Report)
def post_enumerate(req: EnumerateRequest) -> Report:
    return _guard(lambda: enumerate_report(req.base, req.fixed_cylinders, req.kind))


@app.post("/prym-scan", response_model=Report)
def post_prym_scan(req: DiagramSource) -> Report:
    return _guard(lambda: prym_scan_report(req.source, req.metric))


@app.post("/property-p", response_model=Report)
def post_property_p(req: PropertyPRequest) -> Report:
    return _guard(
        lambda: property_p_report(req.source, req.metric, req.locus, req.explicit_basis)
    )


@app.post("/homology", response_model=Report)
def post_homology(req: DiagramSource) -> Report:
    return _guard(lambda: homology_full_report(req.source, req.metric))
