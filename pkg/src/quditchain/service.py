"""HTTP service exposing the simulator.

The CLI is a thin client of this app; run it standalone with

    uvicorn quditchain.service:app

Complex numbers cross the wire as [re, im] pairs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from fastapi import FastAPI, Path
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .engine import (
    PSTNotFoundError,
    TransferConfig,
    TransferTrace,
    find_pst_time,
    run_noiseless,
    run_noisy,
    transfer_probe_fidelity,
)
from .generators import generator_set
from .hamiltonian import ChainSpec
from .linalg import PureState
from .noise import phase_damping
from .states import BellLabel, generalized_bell

Pair = tuple[float, float]


class ServiceInfo(BaseModel):
    name: str
    version: str


class GeneratorMatrix(BaseModel):
    name: str
    matrix: list[list[Pair]]


class GeneratorsResponse(BaseModel):
    d: int
    generators: list[GeneratorMatrix]


class PstTimeRequest(BaseModel):
    d: int = Field(ge=2)
    n: int = Field(ge=2)
    couplings: list[float] | None = None


class PstTimeResponse(BaseModel):
    t_star: float
    fidelity: float


class TransferRequest(BaseModel):
    d: int = Field(ge=2)
    n: int = Field(ge=2)
    couplings: list[float] | None = None
    bell: tuple[int, int] | None = None
    single: list[Pair] | None = None
    input_site: int = Field(default=0, ge=0)
    steps: int | None = Field(default=None, ge=1)
    total_time: float | None = Field(default=None, gt=0.0)
    noise_p: float | None = Field(default=None, ge=0.0, le=1.0)


class StepRecordModel(BaseModel):
    step: int
    time: float
    fidelity_raw: float
    fidelity_arrival: float
    fidelity_bell: float
    bell_label: tuple[int, int] | None
    entropy: float
    support: list[tuple[int, float]]


class TransferResponse(BaseModel):
    d: int
    n: int
    steps: int
    total_time: float
    input_site: int
    target_sites: list[int]
    noisy: bool
    records: list[StepRecordModel]
    arrival_amplitudes: list[Pair] | None
    arrival_leakage: float | None


class SweepRequest(BaseModel):
    d: int = Field(ge=2)
    n: int = Field(ge=2)
    couplings: list[float] | None = None
    bell: tuple[int, int] | None = None
    single: list[Pair] | None = None
    input_site: int = Field(default=0, ge=0)
    steps: int | None = Field(default=None, ge=1)
    total_time: float | None = Field(default=None, gt=0.0)
    p_grid: list[float] = Field(min_length=1)
    jobs: int = Field(default=1, ge=1, le=32)


class SweepStep(BaseModel):
    step: int
    time: float
    fidelity: float


class SweepPoint(BaseModel):
    p: float
    records: list[SweepStep]


class SweepResponse(BaseModel):
    d: int
    n: int
    steps: int
    total_time: float
    points: list[SweepPoint]


def _pairs(values: np.ndarray) -> list[Pair]:
    return [(float(v.real), float(v.imag)) for v in values]


def _matrix_pairs(matrix: np.ndarray) -> list[list[Pair]]:
    return [_pairs(row) for row in matrix]


def _chain_spec(d: int, n: int, couplings: list[float] | None) -> ChainSpec:
    return ChainSpec(d=d, n=n, couplings=tuple(couplings) if couplings else None)


def _input_state(d: int, bell: tuple[int, int] | None, single: list[Pair] | None) -> PureState:
    if (bell is None) == (single is None):
        raise ValueError("specify exactly one of 'bell' and 'single'")
    if bell is not None:
        return generalized_bell(BellLabel(p=bell[0], q=bell[1], d=d))
    amps = np.array([complex(re, im) for re, im in single])
    if len(amps) != d:
        raise ValueError(f"single-qudit input needs {d} amplitudes, got {len(amps)}")
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise ValueError("single-qudit input amplitudes are all zero")
    return PureState(d=d, n=1, amplitudes=amps / norm)


def _record_models(trace: TransferTrace) -> list[StepRecordModel]:
    return [
        StepRecordModel(
            step=r.step,
            time=r.time,
            fidelity_raw=r.fidelity_raw,
            fidelity_arrival=r.fidelity_arrival,
            fidelity_bell=r.fidelity_bell,
            bell_label=(r.bell_label.p, r.bell_label.q) if r.bell_label else None,
            entropy=r.entropy,
            support=list(r.support),
        )
        for r in trace.records
    ]


def _transfer_response(trace: TransferTrace) -> TransferResponse:
    return TransferResponse(
        d=trace.spec.d,
        n=trace.spec.n,
        steps=trace.steps,
        total_time=trace.total_time,
        input_site=trace.input_site,
        target_sites=list(trace.target_sites),
        noisy=trace.noisy,
        records=_record_models(trace),
        arrival_amplitudes=_pairs(trace.arrival_state.amplitudes) if trace.arrival_state else None,
        arrival_leakage=trace.arrival_leakage,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="quditchain", version=__version__)

    @app.exception_handler(PSTNotFoundError)
    async def _pst_handler(request, exc: PSTNotFoundError):
        return JSONResponse(
            status_code=409,
            content={
                "detail": {
                    "error": "pst_not_found",
                    "message": str(exc),
                    "best_time": exc.best_time,
                    "best_fidelity": exc.best_fidelity,
                }
            },
        )

    @app.exception_handler(ValueError)
    async def _value_handler(request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/", response_model=ServiceInfo)
    def info() -> ServiceInfo:
        return ServiceInfo(name="quditchain", version=__version__)

    @app.get("/generators/{d}", response_model=GeneratorsResponse)
    def generators(d: int = Path(ge=2, le=6)) -> GeneratorsResponse:
        gens = generator_set(d)
        return GeneratorsResponse(
            d=d,
            generators=[
                GeneratorMatrix(name=name, matrix=_matrix_pairs(matrix))
                for name, matrix in gens.ordered()
            ],
        )

    @app.post("/pst-time", response_model=PstTimeResponse)
    def pst_time(req: PstTimeRequest) -> PstTimeResponse:
        spec = _chain_spec(req.d, req.n, req.couplings)
        t_star = find_pst_time(spec)
        return PstTimeResponse(t_star=t_star, fidelity=transfer_probe_fidelity(spec, t_star))

    @app.post("/transfer", response_model=TransferResponse)
    def transfer(req: TransferRequest) -> TransferResponse:
        spec = _chain_spec(req.d, req.n, req.couplings)
        config = TransferConfig(
            spec=spec,
            input_state=_input_state(req.d, req.bell, req.single),
            input_site=req.input_site,
            steps=req.steps,
            total_time=req.total_time,
            noise=phase_damping(req.noise_p, req.d) if req.noise_p is not None else None,
        )
        trace = run_noisy(config) if config.noise is not None else run_noiseless(config)
        return _transfer_response(trace)

    @app.post("/noisy-sweep", response_model=SweepResponse)
    def noisy_sweep(req: SweepRequest) -> SweepResponse:
        spec = _chain_spec(req.d, req.n, req.couplings)
        input_state = _input_state(req.d, req.bell, req.single)
        for p in req.p_grid:
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"p values must lie in [0, 1], got {p}")
        # pin the schedule once so every grid point shares it
        total_time = req.total_time if req.total_time is not None else find_pst_time(spec)
        steps = req.steps if req.steps is not None else 16

        def run_point(p: float) -> SweepPoint:
            config = TransferConfig(
                spec=spec,
                input_state=input_state,
                input_site=req.input_site,
                steps=steps,
                total_time=total_time,
                noise=phase_damping(p, req.d),
            )
            trace = run_noisy(config)
            return SweepPoint(
                p=p,
                records=[
                    SweepStep(step=r.step, time=r.time, fidelity=r.fidelity_arrival)
                    for r in trace.records
                ],
            )

        if req.jobs > 1:
            with ThreadPoolExecutor(max_workers=req.jobs) as pool:
                points = list(pool.map(run_point, req.p_grid))
        else:
            points = [run_point(p) for p in req.p_grid]
        return SweepResponse(d=req.d, n=req.n, steps=steps, total_time=total_time, points=points)

    return app


app = create_app()
