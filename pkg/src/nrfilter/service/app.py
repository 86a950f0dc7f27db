"""HTTP service exposing the filter analysis pipeline.

Requests carry the raw design-file text plus optional overrides; the
server owns parsing and CSV rendering so that results are byte-identical
no matter which client submitted the job. Configuration problems map to
HTTP 422, numeric failures (singular systems, non-settling transients)
to HTTP 409; both carry a single-line machine-parsable detail.
"""

from __future__ import annotations

import dataclasses
import io
import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..designfile import Design, parse_design, render_design
from ..errors import ConfigError, NumericError
from ..harmonic import MODES, assemble_modulated
from ..metrics import convergence_study, harmonic_power_budget, summarize
from ..network import scale
from ..optimize import optimize_modulation
from ..oracle import TransientConfig, transient_sparams_batch
from ..solve import SweepGrid, solve_at, extract_sparams, sweep

_DB_FLOOR = 1e-300


class DesignRequest(BaseModel):
    """Raw design text plus per-request overrides."""

    design: str
    mode: str | None = None
    nhar: int | None = None
    points: int | None = None


class ConvergeRequest(DesignRequest):
    nhar_values: list[int] = Field(default_factory=list)


class OracleRequest(DesignRequest):
    frequencies: list[float] = Field(default_factory=list)
    samples_per_cycle: int = 60


class MetricsRequest(DesignRequest):
    rl_level_db: float = 11.0


def _resolve(req: DesignRequest) -> Design:
    d = parse_design(req.design)
    if req.mode is not None:
        if req.mode not in MODES:
            raise ConfigError(f"mode override must be one of {MODES}")
        d = dataclasses.replace(d, mode=req.mode)
    if req.nhar is not None:
        if d.mod is None:
            raise ConfigError("nhar override requires a [modulation] section")
        d = dataclasses.replace(d, mod=dataclasses.replace(d.mod, nhar=req.nhar))
    if req.points is not None:
        g = d.sweep_grid()
        d = dataclasses.replace(
            d, grid=SweepGrid(g.f_start, g.f_stop, req.points)
        )
    return d


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(
            ",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row)
            + "\n"
        )
    return out.getvalue()


def create_app() -> FastAPI:
    app = FastAPI(title="nrfilter", version="1.0")

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError):
        return JSONResponse(
            status_code=422, content={"kind": "config", "error": str(exc)}
        )

    @app.exception_handler(NumericError)
    async def _numeric_error(request: Request, exc: NumericError):
        return JSONResponse(
            status_code=409, content={"kind": "numeric", "error": str(exc)}
        )

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/sweep")
    async def run_sweep(req: DesignRequest):
        d = _resolve(req)
        s = sweep(
            d.m, d.spec, d.mod, d.sweep_grid(), mode=d.mode, impairments=d.impairments
        )
        return {"csv": s.to_csv(), "design_echo": render_design(d)}

    @app.post("/metrics")
    async def run_metrics(req: MetricsRequest):
        d = _resolve(req)
        s = sweep(
            d.m, d.spec, d.mod, d.sweep_grid(), mode=d.mode, impairments=d.impairments
        )
        met = summarize(s, d.spec.f0, rl_level_db=req.rl_level_db)
        budget = harmonic_power_budget(s, d.spec.f0)
        return {
            "metrics": met.as_dict(),
            "harmonic_power_budget": [
                {"port": p, "k": k, "power_fraction": v} for p, k, v in budget
            ],
        }

    @app.post("/converge")
    async def run_converge(req: ConvergeRequest):
        d = _resolve(req)
        if d.mod is None:
            raise ConfigError("convergence study requires a [modulation] section")
        nhar_values = req.nhar_values or [3, 5, 7, 9, 11]
        grid = d.sweep_grid()

        def sweep_fn(nh):
            mod = dataclasses.replace(d.mod, nhar=nh)
            return sweep(
                d.m, d.spec, mod, grid, mode=d.mode, impairments=d.impairments
            )

        records = convergence_study(sweep_fn, nhar_values)
        csv = _rows_to_csv(
            ["nhar_from", "nhar_to", "max_delta_dB", "converged"],
            [
                [r["nhar_from"], r["nhar_to"], float(r["max_delta_dB"]), r["converged"]]
                for r in records
            ],
        )
        return {"records": records, "csv": csv}

    @app.post("/optimize")
    async def run_optimize(req: DesignRequest):
        d = _resolve(req)
        if d.optimize is None:
            raise ConfigError("design file has no [optimize] section")
        result = optimize_modulation(d.m, d.spec, d.optimize)
        return {"result": result.as_dict()}

    @app.post("/oracle")
    async def run_oracle(req: OracleRequest):
        d = _resolve(req)
        if d.mod is None:
            raise ConfigError("oracle comparison requires a [modulation] section")
        if d.impairments is not None:
            m, elems = d.impairments.apply(d.m, d.spec)
        else:
            m, elems = d.m, scale(d.m, d.spec)
        freqs = req.frequencies
        if not freqs:
            half = 0.4 * d.spec.bandwidth
            step = half / 2.0
            freqs = [d.spec.f0 + i * step for i in range(-2, 3)]
        config = TransientConfig(samples_per_cycle=req.samples_per_cycle)
        cases = [(f, p) for f in freqs for p in ("P1", "P2")]
        transient = transient_sparams_batch(elems, d.mod, cases, config)

        rows = []
        worst = 0.0
        for (f, port), tr in zip(cases, transient):
            system = assemble_modulated(elems, d.mod, 2.0 * math.pi * f, "rigorous")
            v = solve_at(system, port, frequency=f)
            fd = extract_sparams(v, system, port)
            a = 1 if port == "P1" else 2
            for (b, k), mag_t in sorted(tr.items()):
                if (b, k) not in fd:
                    continue
                mag_f = abs(fd[(b, k)])
                if max(mag_t, mag_f) < 1e-4:
                    continue
                delta = abs(
                    20.0 * math.log10(max(mag_t, _DB_FLOOR))
                    - 20.0 * math.log10(max(mag_f, _DB_FLOOR))
                )
                if min(mag_t, mag_f) > 1e-3:
                    worst = max(worst, delta)
                rows.append([float(f), f"S{b}{a}_k{k}", mag_t, mag_f, delta])
        csv = _rows_to_csv(
            ["f_Hz", "quantity", "transient_mag", "freq_domain_mag", "delta_dB"], rows
        )
        return {"csv": csv, "worst_delta_dB": worst}

    return app


app = create_app()
