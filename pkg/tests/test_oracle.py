import math
from dataclasses import replace

import numpy as np
import pytest

from nrfilter import (
    BandpassSpec,
    ConfigError,
    ModulationSpec,
    TransientConfig,
    assemble_modulated,
    assemble_static,
    chebyshev_inline,
    load_matrix,
    scale,
    solve_at,
    transient_sparams,
    transient_sparams_batch,
)
from nrfilter.solve import extract_sparams


def _db(x):
    return 20.0 * math.log10(max(x, 1e-300))


def test_unmodulated_n2_matches_static_solver():
    """Transient magnitudes of the static N=2 network agree to 0.05 dB."""
    m = chebyshev_inline(2, 20.0)
    spec = BandpassSpec(f0=1e9, fb=0.05)
    elems = scale(m, spec)
    # with Dm = 0 the modulation frequency only sets the projection
    # window; a coarse one keeps the run short
    mod = ModulationSpec(fm=100e6, delta_m=0.0, phases=(0.0, 0.0), nhar=3)
    freqs = (0.98e9, 1.0e9, 1.02e9)
    cases = [(f, "P1") for f in freqs]
    results = transient_sparams_batch(elems, mod, cases, TransientConfig(kmax=1))
    for f, tr in zip(freqs, results):
        y = assemble_static(elems, 2.0 * math.pi * f)
        v = solve_at(y, "P1", frequency=f)
        fd = extract_sparams(v, y, "P1")
        for b in (1, 2):
            ref = abs(fd[(b, 0)])
            if ref > 1e-3:
                assert abs(_db(tr[(b, 0)]) - _db(ref)) < 0.05
            # no spurious harmonic content without modulation
            assert tr[(b, 1)] < 1e-4
            assert tr[(b, -1)] < 1e-4


@pytest.fixture(scope="module")
def order3_transient(m3, spec3):
    """One shared transient batch for the modulated order-3 design."""
    elems = scale(m3, spec3)
    mod = ModulationSpec.progressive(
        fm=22.8e6, delta_m=0.050, dphi=math.radians(35.0), n=3, nhar=11
    )
    cases = [(975e6, "P1"), (975e6, "P2"), (990e6, "P1")]
    results = transient_sparams_batch(elems, mod, cases, TransientConfig())
    return elems, mod, cases, results


def test_modulated_order3_matches_rigorous_solver(order3_transient):
    """Harmonic magnitudes agree with the frequency-domain model."""
    elems, mod, cases, results = order3_transient
    worst = 0.0
    for (f, port), tr in zip(cases, results):
        system = assemble_modulated(elems, mod, 2.0 * math.pi * f, "rigorous")
        v = solve_at(system, port, frequency=f)
        fd = extract_sparams(v, system, port)
        for (b, k), mag in tr.items():
            ref = abs(fd[(b, k)])
            if min(ref, mag) > 1e-3:
                worst = max(worst, abs(_db(mag) - _db(ref)))
    assert worst < 0.2


def test_oracle_sees_the_nonreciprocity(order3_transient):
    _, _, _, results = order3_transient
    fwd, back = results[0], results[1]
    # directivity at center: forward fundamental well above backward
    assert _db(fwd[(2, 0)]) - _db(back[(1, 0)]) > 10.0


def test_rejects_unrealizable_networks(spec3, mod3):
    # same-parity coupling cannot be represented by the gyrator ladder
    entries = np.zeros((5, 5))
    for i in range(4):
        entries[i, i + 1] = entries[i + 1, i] = 0.9
    entries[1, 3] = entries[3, 1] = 0.1
    elems = scale(load_matrix(entries), spec3)
    with pytest.raises(ConfigError):
        transient_sparams(elems, mod3, 975e6)

    # frequency-invariant susceptances have no time-domain element
    detuned = np.zeros((5, 5))
    for i in range(4):
        detuned[i, i + 1] = detuned[i + 1, i] = 0.9
    detuned[2, 2] = 0.3
    elems2 = scale(load_matrix(detuned), spec3)
    with pytest.raises(ConfigError):
        transient_sparams(elems2, mod3, 975e6)


def test_config_validation(m3, spec3, mod3):
    with pytest.raises(ConfigError):
        TransientConfig(samples_per_cycle=10)
    with pytest.raises(ConfigError):
        TransientConfig(settle_periods=0)
    elems = scale(m3, spec3)
    with pytest.raises(ConfigError):
        transient_sparams(elems, mod3, 975e6, "P3")
    bad_mod = replace(mod3, phases=(0.0, 0.1))
    with pytest.raises(ConfigError):
        transient_sparams(elems, bad_mod, 975e6)
