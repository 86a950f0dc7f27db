"""Scalar figures of merit derived from a frequency sweep.

Directivity D = |S21|^2 / |S12|^2 in dB, insertion losses, bandwidths
referenced to an explicit return-loss (or directivity) level, the
harmonic power budget, and the convergence of the response with the
number of represented harmonics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .solve import SParamSet

_DB_FLOOR = 1e-300


def db(x) -> np.ndarray:
    """Magnitude in dB with a floor against log(0)."""
    return 20.0 * np.log10(np.maximum(np.abs(x), _DB_FLOOR))


@dataclass(frozen=True)
class FilterMetrics:
    """Headline figures of one modulated (or static) sweep."""

    d0_db: float
    d_min_passband_db: float
    il_forward_db: float
    il_forward_max_db: float
    il_backward_center_db: float
    bw_at_rl_hz: float
    rl_level_db: float

    def as_dict(self) -> dict:
        return {
            "D0_dB": self.d0_db,
            "D_min_passband_dB": self.d_min_passband_db,
            "IL_forward_dB": self.il_forward_db,
            "IL_forward_max_dB": self.il_forward_max_db,
            "IL_backward_center_dB": self.il_backward_center_db,
            "BW_at_RL_Hz": self.bw_at_rl_hz,
            "RL_level_dB": self.rl_level_db,
        }


def directivity(s: SParamSet, f: float) -> float:
    """Directivity 10 log10(|S21|^2/|S12|^2) at the grid point nearest f."""
    i = s.at(f)
    s12 = abs(s.s12[i])
    if s12 == 0.0:
        return math.inf
    return 20.0 * math.log10(abs(s.s21[i]) / s12)


def _band_edges(
    f: np.ndarray, margin: np.ndarray, center_idx: int, ripple_db: float
) -> tuple[int, int] | None:
    """Index range of the band containing center_idx where margin >= 0.

    Interior dips where the criterion is violated by less than ripple_db
    are bridged, so a ripple peak grazing the level does not split the
    band; this matches how a bandwidth is read off a plotted response.
    """
    ok = margin >= 0.0
    if not ok[center_idx]:
        return None

    def extend(idx: int, step: int) -> int:
        while True:
            while 0 <= idx + step < len(ok) and ok[idx + step]:
                idx += step
            # attempt to bridge a shallow violation to the next passing run
            probe = idx + step
            while 0 <= probe < len(ok) and not ok[probe] and margin[probe] > -ripple_db:
                probe += step
            if 0 <= probe < len(ok) and ok[probe]:
                idx = probe
            else:
                return idx

    return extend(center_idx, -1), extend(center_idx, +1)


def bandwidth_at_level(
    s: SParamSet,
    level_db: float,
    which: str = "S11",
    f_center: float | None = None,
    ripple_db: float = 0.5,
) -> float:
    """Width of the band around the center where a criterion holds.

    ``which`` = "S11": |S11| <= -level_db. ``which`` = "directivity":
    D >= level_db. Band edges are refined by linear interpolation of the
    dB criterion between grid points; interior ripple grazing the level
    by less than ripple_db does not split the band. Returns 0.0 when the
    criterion fails at the center.
    """
    if which == "S11":
        value = db(s.s11)
        margin = -level_db - value  # >= 0 inside the band
    elif which == "directivity":
        value = db(s.s21) - db(s.s12)
        margin = value - level_db
    else:
        raise ConfigError("which must be 'S11' or 'directivity'")
    center = s.at(f_center) if f_center is not None else len(s.f) // 2
    edges = _band_edges(s.f, margin, center, ripple_db)
    if edges is None:
        return 0.0
    i_lo, i_hi = edges
    f_lo, f_hi = s.f[i_lo], s.f[i_hi]
    # interpolate across the crossing just outside the band, when present
    if i_lo > 0:
        m0, m1 = margin[i_lo - 1], margin[i_lo]
        f_lo = s.f[i_lo] - (s.f[i_lo] - s.f[i_lo - 1]) * m1 / (m1 - m0)
    if i_hi < len(s.f) - 1:
        m0, m1 = margin[i_hi], margin[i_hi + 1]
        f_hi = s.f[i_hi] + (s.f[i_hi + 1] - s.f[i_hi]) * m0 / (m0 - m1)
    return float(f_hi - f_lo)


def harmonic_power_budget(s: SParamSet, f: float, excite: str = "P1") -> list:
    """Fractional power emitted at each (port, harmonic) for unit incident power.

    Diagnostic only; no conservation is asserted.
    """
    a = 1 if excite == "P1" else 2
    i = s.at(f)
    out = []
    for port in (1, 2):
        for k in s.k_values:
            key = (port, a, int(k))
            if key in s.data:
                out.append((port, int(k), float(abs(s.data[key][i]) ** 2)))
    return out


def summarize(
    s: SParamSet,
    f0: float,
    rl_level_db: float = 11.0,
) -> FilterMetrics:
    """Headline metrics of a modulated sweep at center frequency f0."""
    i0 = s.at(f0)
    bw = bandwidth_at_level(s, rl_level_db, "S11", f_center=f0)
    # in-band values over the RL-referenced band
    if bw > 0.0:
        half = bw / 2.0
        in_band = (s.f >= s.f[i0] - half) & (s.f <= s.f[i0] + half)
    else:
        in_band = np.zeros(len(s.f), dtype=bool)
        in_band[i0] = True
    d_all = db(s.s21) - db(s.s12)
    return FilterMetrics(
        d0_db=float(d_all[i0]),
        d_min_passband_db=float(np.min(d_all[in_band])),
        il_forward_db=float(-db(s.s21)[i0]),
        il_forward_max_db=float(np.max(-db(s.s21)[in_band])),
        il_backward_center_db=float(-db(s.s12)[i0]),
        bw_at_rl_hz=bw,
        rl_level_db=rl_level_db,
    )


def convergence_study(sweep_fn, nhar_list) -> list[dict]:
    """Max |dS|_dB between successive Nhar values.

    ``sweep_fn(nhar)`` must return an SParamSet on a fixed grid. Returns
    one record per consecutive pair with the maximum dB change over the
    grid and over {S11, S21, S12, S22}, plus a convergence flag at the
    default 0.1 dB threshold.
    """
    nhar_list = list(nhar_list)
    if any(nh % 2 == 0 or nh < 1 for nh in nhar_list):
        raise ConfigError("Nhar values must be odd and positive")
    if sorted(nhar_list) != nhar_list:
        raise ConfigError("Nhar values must be ascending")
    sweeps = {nh: sweep_fn(nh) for nh in nhar_list}
    records = []
    for prev, cur in zip(nhar_list, nhar_list[1:]):
        delta = 0.0
        for key in ((1, 1, 0), (2, 1, 0), (1, 2, 0), (2, 2, 0)):
            d = np.max(np.abs(db(sweeps[cur].data[key]) - db(sweeps[prev].data[key])))
            delta = max(delta, float(d))
        records.append(
            {
                "nhar_from": prev,
                "nhar_to": cur,
                "max_delta_dB": delta,
                "converged": delta < 0.1,
            }
        )
    return records
