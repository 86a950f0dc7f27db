import numpy as np
import pytest

from nrfilter import (
    ConfigError,
    ImpairmentSpec,
    SweepGrid,
    apply_loss,
    apply_parasitics,
    scale,
    sweep,
)
from nrfilter.metrics import db

# measured parasitic couplings of the two prototypes
PARASITICS_3 = ((0, 2, 0.26), (2, 4, 0.26), (1, 3, 0.09))
PARASITICS_4 = (
    (0, 2, 0.23),
    (3, 5, 0.23),
    (0, 3, 0.1),
    (2, 5, 0.1),
    (1, 3, 0.12),
    (2, 4, 0.12),
    (1, 4, 0.06),
)


def test_loss_conductance_value(m3, spec3):
    elems = apply_loss(scale(m3, spec3), qu=114.0)
    expected = spec3.omega0 * elems.cp / 114.0
    np.testing.assert_allclose(elems.g_loss, expected, rtol=1e-12)
    with pytest.raises(ConfigError):
        apply_loss(elems, qu=0.0)


def test_loss_reduces_transmission(m3, spec3):
    grid = SweepGrid.around(spec3, points=101)
    clean = sweep(m3, spec3, grid=grid)
    lossy = sweep(m3, spec3, grid=grid, impairments=ImpairmentSpec(qu=114.0))
    i0 = clean.at(spec3.f0)
    assert abs(lossy.s21[i0]) < abs(clean.s21[i0])
    # loss breaks losslessness but not reciprocity of the static network
    np.testing.assert_allclose(lossy.s21, lossy.s12, atol=1e-12)
    total = np.abs(lossy.s11) ** 2 + np.abs(lossy.s21) ** 2
    assert np.all(total < 1.0)


def test_unmodulated_qu114_insertion_loss(m3, spec3):
    """Loss model reproduces the measured midband dissipation level."""
    s = sweep(
        m3,
        spec3,
        grid=SweepGrid.around(spec3, points=401),
        impairments=ImpairmentSpec(qu=114.0),
    )
    il = -db(s.s21)[s.at(spec3.f0)]
    assert il == pytest.approx(2.8, abs=0.3)


def test_parasitics_added_symmetrically(m3):
    m2 = apply_parasitics(m3, PARASITICS_3)
    assert m2.entry(0, 2) == 0.26
    assert m2.entry(2, 0) == 0.26
    assert m2.entry(1, 3) == 0.09
    # original entries untouched
    assert m2.entry(0, 1) == m3.entry(0, 1)
    assert m3.entry(0, 2) == 0.0  # input not mutated


def test_parasitics_reject_overwrite_and_bad_indices(m3):
    with pytest.raises(ConfigError):
        apply_parasitics(m3, ((0, 1, 0.1),))  # main-line entry exists
    with pytest.raises(ConfigError):
        apply_parasitics(m3, ((0, 9, 0.1),))
    with pytest.raises(ConfigError):
        apply_parasitics(m3, ((2, 2, 0.1),))


def test_parasitics_degrade_lower_skirt(m3, spec3, mod3):
    """Cross couplings lift the lower stopband floor of the modulated filter."""
    grid = SweepGrid.around(spec3, points=401)
    clean = sweep(m3, spec3, mod3, grid)
    dirty = sweep(
        m3, spec3, mod3, grid, impairments=ImpairmentSpec(extra_couplings=PARASITICS_3)
    )
    f_probe = spec3.f0 - 1.5 * spec3.bandwidth
    i = clean.at(f_probe)
    rise = db(dirty.s21)[i] - db(clean.s21)[i]
    assert rise > 3.0


def test_impairment_spec_validation():
    with pytest.raises(ConfigError):
        ImpairmentSpec(qu=-5.0)
    spec = ImpairmentSpec(qu=100.0, extra_couplings=[(0, 2, 0.1)])
    assert spec.extra_couplings == ((0, 2, 0.1),)
