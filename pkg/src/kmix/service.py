"""HTTP service exposing the sweep runner and the analysis reports.

The CLI talks to these endpoints (in-process by default); a long-running
deployment serves the same API over the network.  Request and response
bodies are the pydantic models below; computation stays in the core
modules.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .experiments import (
    DEFAULT_SCAN_BETAS,
    ExperimentConfig,
    census_report,
    error_scan_report,
    run_to_csv,
    tsp_check_report,
)

MIXER_NAMES = ("x", "xy-full", "xy-blocked", "xy-ring")


class RunRequest(BaseModel):
    problem: str
    sizes: list[int] = Field(default_factory=list)
    instances: int = 10
    base_seed: int = 1
    delta_ts: list[float] = Field(default_factory=list)
    steps: list[int] = Field(default_factory=list)
    mixers: list[str] = ["xy", "x"]
    mode: str = "trotterized"
    penalty: float | None = None
    portfolio_scale: float | None = None
    mcps_ensembles: int | None = None
    mcfp_path_cap: int = 8
    state_qubit_cap: int = 24


class RunResponse(BaseModel):
    csv: str
    rows: int
    failed_rows: int


class CensusRequest(BaseModel):
    mixer: str = "xy-full"
    n: int
    k: int | None = None
    blocks: list[str] | None = None


class CensusResponse(BaseModel):
    mixer: str
    n: int
    groups: int
    commuting_pairs: int
    non_commuting_pairs: int
    total_commutator_norm: float | None
    norms_available: bool


class ErrorScanRequest(BaseModel):
    mixer: str = "xy-full"
    n: int
    k: int | None = None
    blocks: list[str] | None = None
    betas: list[float] = list(DEFAULT_SCAN_BETAS)


class ErrorScanPoint(BaseModel):
    beta: float
    empirical: float
    bound: float


class ErrorScanResponse(BaseModel):
    mixer: str
    n: int
    rows: list[ErrorScanPoint]
    exponent: float | None


class TspCheckRequest(BaseModel):
    cities: int
    steps: int = 100
    beta: float = 0.1


class TspCheckResponse(BaseModel):
    cities: int
    steps: int
    beta: float
    commutation_norm: float
    leakage: float


app = FastAPI(title="kmix", version="0.1.0")


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/run", response_model=RunResponse)
def run(req: RunRequest) -> RunResponse:
    try:
        config = ExperimentConfig.from_dict({**req.model_dump(), "output": "results.csv"})
        text, failed = run_to_csv(config)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    rows = text.count("\n") - 1
    return RunResponse(csv=text, rows=rows, failed_rows=failed)


@app.post("/census", response_model=CensusResponse)
def census_endpoint(req: CensusRequest) -> CensusResponse:
    if req.mixer not in MIXER_NAMES:
        raise HTTPException(status_code=422, detail=f"mixer must be one of {MIXER_NAMES}")
    try:
        return CensusResponse(**census_report(req.mixer, req.n, req.k, req.blocks))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/error-scan", response_model=ErrorScanResponse)
def error_scan_endpoint(req: ErrorScanRequest) -> ErrorScanResponse:
    if req.mixer not in MIXER_NAMES:
        raise HTTPException(status_code=422, detail=f"mixer must be one of {MIXER_NAMES}")
    try:
        report = error_scan_report(req.mixer, req.n, req.k, req.blocks, tuple(req.betas))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return ErrorScanResponse(
        mixer=report["mixer"],
        n=report["n"],
        rows=[ErrorScanPoint(**r) for r in report["rows"]],
        exponent=report["exponent"],
    )


@app.post("/tsp-check", response_model=TspCheckResponse)
def tsp_check_endpoint(req: TspCheckRequest) -> TspCheckResponse:
    try:
        return TspCheckResponse(**tsp_check_report(req.cities, req.steps, req.beta))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
