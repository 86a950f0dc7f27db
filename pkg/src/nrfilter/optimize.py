"""Search over modulation settings (fm, Dm, dphi) for a fixed filter.

A deterministic coarse grid scan seeds a Nelder-Mead refinement.
Constraints (minimum in-band return loss, maximum forward insertion
loss) enter the refined objective as linear dB penalties, so the
simplex can cross briefly infeasible regions while being pulled back.
The best feasible point wins; if nothing feasible is found the least
infeasible point is returned together with its constraint violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigError
from .harmonic import ModulationSpec
from .metrics import bandwidth_at_level, db, summarize
from .network import BandpassSpec
from .solve import SweepGrid, sweep
from .synthesis import CouplingMatrix

OBJECTIVES = ("d0", "d_bandwidth_product")

_PENALTY_PER_DB = 50.0


@dataclass(frozen=True)
class OptimizeSpec:
    """Bounds, constraints and objective of a modulation search.

    Bounds are (low, high) pairs; ``dphi`` is the progressive phase step
    in radians. ``min_return_loss_db`` applies over the band used for
    the objective; ``max_insertion_loss_db`` to the forward passband
    transmission.
    """

    fm_bounds: tuple
    delta_m_bounds: tuple
    dphi_bounds: tuple
    objective: str = "d0"
    min_return_loss_db: float | None = None
    max_insertion_loss_db: float | None = None
    nhar: int = 7
    grid_points: int = 201
    coarse_steps: tuple = (5, 5, 5)
    directivity_level_db: float | None = None

    def __post_init__(self):
        for name, bounds in (
            ("fm", self.fm_bounds),
            ("delta_m", self.delta_m_bounds),
            ("dphi", self.dphi_bounds),
        ):
            lo, hi = bounds
            if not lo < hi:
                raise ConfigError(f"{name} bounds must satisfy low < high")
        if self.fm_bounds[0] <= 0:
            raise ConfigError("modulation frequency bounds must be positive")
        if not 0.0 <= self.delta_m_bounds[0] < self.delta_m_bounds[1] < 1.0:
            raise ConfigError("modulation index bounds must lie in [0, 1)")
        if self.objective not in OBJECTIVES:
            raise ConfigError(f"objective must be one of {OBJECTIVES}")
        if len(self.coarse_steps) != 3 or any(s < 2 for s in self.coarse_steps):
            raise ConfigError("coarse_steps needs three entries >= 2")


@dataclass(frozen=True)
class OptimizeResult:
    """Best modulation found, its metrics and any constraint violations."""

    fm: float
    delta_m: float
    dphi: float
    objective: str
    objective_value: float
    feasible: bool
    violations: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    evaluations: int = 0

    def as_dict(self) -> dict:
        return {
            "fm_Hz": self.fm,
            "delta_m": self.delta_m,
            "dphi_deg": math.degrees(self.dphi),
            "objective": self.objective,
            "objective_value": self.objective_value,
            "feasible": self.feasible,
            "violations": self.violations,
            "metrics": self.metrics,
            "evaluations": self.evaluations,
        }


def _evaluate(
    m: CouplingMatrix,
    spec: BandpassSpec,
    opt: OptimizeSpec,
    grid: SweepGrid,
    x,
) -> dict:
    fm, delta_m, dphi = x
    mod = ModulationSpec.progressive(fm, delta_m, dphi, m.order, opt.nhar)
    s = sweep(m, spec, mod, grid, mode="cm_approx")
    met = summarize(s, spec.f0)
    if opt.objective == "d0":
        value = met.d0_db
    else:
        level = opt.directivity_level_db
        if level is None:
            level = 10.0
        dbw = bandwidth_at_level(s, level, "directivity", f_center=spec.f0)
        value = level * dbw / spec.bandwidth
    violations = {}
    if opt.min_return_loss_db is not None:
        i0 = s.at(spec.f0)
        rl = -float(db(s.s11)[i0])
        if rl < opt.min_return_loss_db:
            violations["return_loss_dB"] = opt.min_return_loss_db - rl
    if opt.max_insertion_loss_db is not None:
        il = met.il_forward_db
        if il > opt.max_insertion_loss_db:
            violations["insertion_loss_dB"] = il - opt.max_insertion_loss_db
    return {
        "value": value,
        "violations": violations,
        "metrics": met.as_dict(),
    }


def optimize_modulation(
    m: CouplingMatrix,
    spec: BandpassSpec,
    opt: OptimizeSpec,
    grid: SweepGrid | None = None,
) -> OptimizeResult:
    """Deterministic coarse scan plus Nelder-Mead refinement."""
    if grid is None:
        grid = SweepGrid.around(spec, points=opt.grid_points)
    count = [0]

    def penalized(x) -> float:
        # clip into bounds; Nelder-Mead itself is unconstrained
        xc = np.clip(
            x,
            [opt.fm_bounds[0], opt.delta_m_bounds[0], opt.dphi_bounds[0]],
            [opt.fm_bounds[1], opt.delta_m_bounds[1], opt.dphi_bounds[1]],
        )
        count[0] += 1
        res = _evaluate(m, spec, opt, grid, xc)
        penalty = _PENALTY_PER_DB * sum(res["violations"].values())
        return -(res["value"]) + penalty

    axes = [
        np.linspace(*opt.fm_bounds, opt.coarse_steps[0]),
        np.linspace(*opt.delta_m_bounds, opt.coarse_steps[1]),
        np.linspace(*opt.dphi_bounds, opt.coarse_steps[2]),
    ]
    best_x, best_cost = None, math.inf
    for fm in axes[0]:
        for dm in axes[1]:
            for dphi in axes[2]:
                cost = penalized((fm, dm, dphi))
                if cost < best_cost:
                    best_cost, best_x = cost, (fm, dm, dphi)

    # scale variables to comparable magnitudes for the simplex
    scales = np.array([opt.fm_bounds[1], opt.delta_m_bounds[1], max(abs(opt.dphi_bounds[0]), abs(opt.dphi_bounds[1]))])
    res = minimize(
        lambda z: penalized(z * scales),
        np.asarray(best_x) / scales,
        method="Nelder-Mead",
        options={"xatol": 1e-4, "fatol": 1e-3, "maxiter": 200},
    )
    x_final = np.clip(
        res.x * scales,
        [opt.fm_bounds[0], opt.delta_m_bounds[0], opt.dphi_bounds[0]],
        [opt.fm_bounds[1], opt.delta_m_bounds[1], opt.dphi_bounds[1]],
    )
    final = _evaluate(m, spec, opt, grid, x_final)
    return OptimizeResult(
        fm=float(x_final[0]),
        delta_m=float(x_final[1]),
        dphi=float(x_final[2]),
        objective=opt.objective,
        objective_value=float(final["value"]),
        feasible=not final["violations"],
        violations=final["violations"],
        metrics=final["metrics"],
        evaluations=count[0],
    )
