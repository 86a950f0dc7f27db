import math

import pytest

from nrfilter import (
    ConfigError,
    OptimizeSpec,
    SweepGrid,
    optimize_modulation,
)

FAST = dict(nhar=5, grid_points=41, coarse_steps=(3, 2, 3))


def _spec(**kw):
    base = dict(
        fm_bounds=(18e6, 26e6),
        delta_m_bounds=(0.03, 0.07),
        dphi_bounds=(math.radians(20.0), math.radians(60.0)),
        objective="d0",
        **FAST,
    )
    base.update(kw)
    return OptimizeSpec(**base)


def test_spec_validation():
    with pytest.raises(ConfigError):
        _spec(fm_bounds=(26e6, 18e6))
    with pytest.raises(ConfigError):
        _spec(fm_bounds=(-1e6, 1e6))
    with pytest.raises(ConfigError):
        _spec(delta_m_bounds=(0.5, 1.5))
    with pytest.raises(ConfigError):
        _spec(objective="ripple")
    with pytest.raises(ConfigError):
        _spec(coarse_steps=(1, 2, 2))


def test_optimize_improves_on_nominal(m3, spec3):
    opt = _spec()
    result = optimize_modulation(m3, spec3, opt)
    assert opt.fm_bounds[0] <= result.fm <= opt.fm_bounds[1]
    assert opt.delta_m_bounds[0] <= result.delta_m <= opt.delta_m_bounds[1]
    assert opt.dphi_bounds[0] <= result.dphi <= opt.dphi_bounds[1]
    # the nominal design reaches ~14.8 dB; the optimizer must do better
    assert result.objective_value > 15.0
    assert result.evaluations > 0
    d = result.as_dict()
    assert d["objective"] == "d0"
    assert "D0_dB" in d["metrics"]


def test_optimize_reports_constraint_violations(m3, spec3):
    # an unreachable insertion-loss bound forces an infeasible result
    opt = _spec(max_insertion_loss_db=0.01, coarse_steps=(2, 2, 2))
    result = optimize_modulation(m3, spec3, opt)
    assert not result.feasible
    assert "insertion_loss_dB" in result.violations
    assert result.violations["insertion_loss_dB"] > 0


def test_optimize_respects_feasibility(m3, spec3):
    opt = _spec(min_return_loss_db=10.0, max_insertion_loss_db=3.5)
    result = optimize_modulation(m3, spec3, opt)
    assert result.feasible
    assert result.metrics["IL_forward_dB"] <= 3.5 + 1e-6


def test_optimize_deterministic(m3, spec3):
    opt = _spec(coarse_steps=(2, 2, 2))
    grid = SweepGrid.around(spec3, points=41)
    a = optimize_modulation(m3, spec3, opt, grid)
    b = optimize_modulation(m3, spec3, opt, grid)
    assert a.fm == b.fm
    assert a.delta_m == b.delta_m
    assert a.dphi == b.dphi
    assert a.objective_value == b.objective_value


def test_bandwidth_product_objective(m3, spec3):
    opt = _spec(objective="d_bandwidth_product", directivity_level_db=10.0)
    result = optimize_modulation(m3, spec3, opt)
    assert result.objective_value > 0.0
