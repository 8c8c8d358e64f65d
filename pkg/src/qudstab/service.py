"""HTTP wrapper: POST /simulate runs a circuit, GET /health pings.

Error mapping: parse diagnostics -> 422, impossible fixed outcome -> 409,
branch-cap overflow -> 413.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .circuit import (
    ResourceLimitError,
    parse_program,
    result_dict,
    run_program,
)
from .measurement import UnsupportedOutcomeError


class SimulateRequest(BaseModel):
    circuit: str
    mode: str = "enumerate"
    shots: int = 1
    seed: int = 0
    fix: dict[str, int] = Field(default_factory=dict)
    oracle: bool = False
    emit_tableau: bool = False
    branch_cap: int = 4096


class SimulateResponse(BaseModel):
    dim: int
    qudits: int
    trajectories: list[dict]


app = FastAPI(title="qudstab", version="0.1.0")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    program, diags = parse_program(req.circuit)
    if diags:
        raise HTTPException(status_code=422, detail=[str(d) for d in diags])
    try:
        trajectories = run_program(
            program,
            mode=req.mode,
            shots=req.shots,
            seed=req.seed,
            fix=req.fix,
            branch_cap=req.branch_cap,
        )
    except UnsupportedOutcomeError as e:
        raise HTTPException(status_code=409, detail=str(e))
    except ResourceLimitError as e:
        raise HTTPException(status_code=413, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    out = result_dict(
        program, trajectories, emit_tableau=req.emit_tableau, with_oracle=req.oracle
    )
    return SimulateResponse(**out)
