import math
from dataclasses import replace

import numpy as np
import pytest

from nrfilter import (
    ConfigError,
    ModulationSpec,
    NumericError,
    SweepGrid,
    scale,
    solve_at,
    sweep,
)
from nrfilter.metrics import db


def test_grid_validation(spec3):
    with pytest.raises(ConfigError):
        SweepGrid(1e9, 1e9, 11)
    with pytest.raises(ConfigError):
        SweepGrid(1e9, 2e9, 1)
    with pytest.raises(ConfigError):
        SweepGrid(-1e9, 2e9, 11)
    g = SweepGrid.around(spec3, points=11, span_factor=2.0)
    assert g.frequencies[0] == pytest.approx(975e6 - 46.8e6)
    assert g.frequencies[-1] == pytest.approx(975e6 + 46.8e6)
    assert len(g.frequencies) == 11


def test_unmodulated_losslessness(m3, spec3):
    """|S11|^2 + |S21|^2 = 1 for the lossless static network."""
    s = sweep(m3, spec3, grid=SweepGrid.around(spec3, points=101))
    total = np.abs(s.s11) ** 2 + np.abs(s.s21) ** 2
    np.testing.assert_allclose(total, 1.0, atol=1e-10)


def test_unmodulated_return_loss_floor(m3, spec3):
    # published order-3 prototype is a 13 dB equiripple design
    s = sweep(m3, spec3, grid=SweepGrid.around(spec3, points=101))
    i0 = s.at(spec3.f0)
    assert db(s.s11)[i0] <= -13.0


def test_modulated_zero_index_matches_static(m3, spec3, mod3):
    mod0 = replace(mod3, delta_m=0.0)
    grid = SweepGrid.around(spec3, points=21)
    s_static = sweep(m3, spec3, grid=grid)
    s_mod = sweep(m3, spec3, mod0, grid=grid, mode="rigorous")
    for key in ((1, 1, 0), (2, 1, 0), (1, 2, 0), (2, 2, 0)):
        np.testing.assert_allclose(s_mod.data[key], s_static.data[key], atol=1e-12)


def test_symmetric_network_equal_reflections(m3, spec3, mod3):
    """S11 = S22 for the mirror-symmetric prototype with progressive phases."""
    s = sweep(m3, spec3, mod3, SweepGrid.around(spec3, points=51))
    np.testing.assert_allclose(s.s11, s.s22, atol=1e-10)


def test_zero_phase_step_is_reciprocal(m3, spec3):
    mod = ModulationSpec.progressive(22.8e6, 0.05, 0.0, 3, 7)
    s = sweep(m3, spec3, mod, SweepGrid.around(spec3, points=51))
    np.testing.assert_allclose(s.s21, s.s12, atol=1e-10)


def test_phase_reversal_duality(m3, spec3):
    """Reversing the phase progression swaps the transmission directions."""
    grid = SweepGrid.around(spec3, points=51)
    mod_p = ModulationSpec.progressive(22.8e6, 0.05, math.radians(35.0), 3, 7)
    mod_m = ModulationSpec.progressive(22.8e6, 0.05, math.radians(-35.0), 3, 7)
    s_p = sweep(m3, spec3, mod_p, grid)
    s_m = sweep(m3, spec3, mod_m, grid)
    np.testing.assert_allclose(s_p.s21, s_m.s12, atol=1e-10)
    np.testing.assert_allclose(s_p.s12, s_m.s21, atol=1e-10)


def test_sweep_determinism(m3, spec3, mod3):
    grid = SweepGrid.around(spec3, points=31)
    a = sweep(m3, spec3, mod3, grid)
    b = sweep(m3, spec3, mod3, grid)
    assert a.to_csv() == b.to_csv()
    for key in a.data:
        assert np.array_equal(a.data[key], b.data[key])


def test_csv_schema(m3, spec3, mod3):
    s = sweep(m3, spec3, mod3, SweepGrid.around(spec3, points=5))
    header = s.to_csv().splitlines()[0].split(",")
    assert header[0] == "f_Hz"
    # reflections only at the fundamental, transmissions at every harmonic
    assert "S11_k0_re" in header and "S11_k1_re" not in header
    assert "S21_k-3_re" in header and "S21_k3_im" in header
    assert "S12_k0_re" in header and "S22_k0_im" in header
    assert len(s.to_csv().splitlines()) == 6


def test_solver_flags_singular_system():
    # a disconnected resonator node makes the nodal matrix singular at
    # its resonance
    y = np.zeros((4, 4), dtype=complex)
    y[0, 0] = 1.0
    y[3, 3] = 1.0
    y[1, 2] = y[2, 1] = 1j
    # node 1/2 coupled to each other but not to any port: singular when
    # the 2x2 inner block loses rank
    y[1, 1] = 1j
    y[2, 2] = 1j
    with pytest.raises(NumericError):
        solve_at(y, "P1", frequency=1e9)


def test_solver_rejects_unknown_port(m3, spec3):
    elems = scale(m3, spec3)
    from nrfilter import assemble_static

    y = assemble_static(elems, spec3.omega0)
    with pytest.raises(ConfigError):
        solve_at(y, "P3")


def test_reflections_symmetric_while_transmissions_differ(m3, spec3, mod3):
    # reflections at the fundamental are identical from both ports even
    # though transmissions differ strongly
    s = sweep(m3, spec3, mod3, SweepGrid.around(spec3, points=51))
    i0 = s.at(spec3.f0)
    assert abs(s.s21[i0]) != pytest.approx(abs(s.s12[i0]), rel=0.05)
    assert abs(s.s11[i0]) == pytest.approx(abs(s.s22[i0]), abs=1e-12)
