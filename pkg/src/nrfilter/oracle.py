"""Independent validation path: transient simulation of the modulated ladder.

The ideal admittance inverters of the frequency-domain model are not
time-domain elements, but replacing every inverter jJ between nodes a
and b by a gyrator of ratio J is a diagonal phase similarity of the
nodal system (multiply node u's voltage by j^u): all S-parameter
magnitudes are preserved, at every harmonic. The oracle therefore
integrates the real L / C(t) / gyrator / conductance network in time
and compares magnitudes only.

The network is excited with a complex exponential source current; by
linearity of the (time-varying) network the steady state contains only
components at w + k wm, so projecting the port voltages onto
e^{j(w + k wm) t} over one exact modulation period recovers the
harmonic S-parameters without windowing error.

Integration is fixed-step classical Runge-Kutta; the system is
non-stiff at the loaded Q values of interest. Multiple (frequency,
excitation) columns are integrated side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericError
from .harmonic import ModulationSpec
from .network import BandpassElements

_MAX_ORDER = 4


@dataclass(frozen=True)
class TransientConfig:
    """Settings of one transient run.

    ``samples_per_cycle`` applies to the highest projected frequency
    f + kmax*fm; ``settle_periods`` and ``record_periods`` are counted
    in modulation periods. The steady state is accepted when the
    projections of two consecutive record windows agree within
    ``steady_tol_db``.
    """

    samples_per_cycle: int = 60
    settle_periods: int = 10
    record_periods: int = 1
    max_extra_windows: int = 20
    steady_tol_db: float = 1e-3
    kmax: int = 4

    def __post_init__(self):
        if self.samples_per_cycle < 50:
            raise ConfigError("time step must resolve the fastest tone by >= 50 samples")
        if self.settle_periods < 1 or self.record_periods < 1:
            raise ConfigError("settle and record periods must be positive")


def _gyrator_matrix(elems: BandpassElements) -> np.ndarray:
    """Antisymmetric gyrator ratio matrix equivalent to the inverter set.

    The phase-similarity argument requires every coupling to connect
    nodes of opposite parity (odd node distance); same-parity couplings
    cannot be gyratorized without altering magnitudes.
    """
    j = elems.j
    rows, cols = np.nonzero(np.triu(j, 1))
    for a, b in zip(rows, cols):
        if (b - a) % 2 == 0:
            raise ConfigError(
                f"coupling ({a},{b}) connects same-parity nodes; "
                "not realizable as a gyrator ladder"
            )
    upper = np.triu(j, 1)
    return upper - upper.T


def transient_sparams(
    elems: BandpassElements,
    mod: ModulationSpec,
    f: float,
    excite: str = "P1",
    config: TransientConfig | None = None,
) -> dict:
    """Harmonic S-parameter magnitudes at one source frequency.

    Returns a dict (port, k) -> |S|, for ports 1 and 2 and harmonics
    -kmax..kmax, with the source at the given port.
    """
    res = transient_sparams_batch(elems, mod, [(f, excite)], config)
    return res[0]


def transient_sparams_batch(
    elems: BandpassElements,
    mod: ModulationSpec,
    cases,
    config: TransientConfig | None = None,
) -> list[dict]:
    """Vectorized transient runs for a list of (frequency, excite) cases."""
    if config is None:
        config = TransientConfig()
    n = elems.order
    if n > _MAX_ORDER:
        raise ConfigError(f"transient oracle supports at most {_MAX_ORDER} resonators")
    if np.any(elems.b != 0.0):
        raise ConfigError(
            "frequency-invariant susceptances are not time-domain realizable; "
            "the oracle requires synchronously tuned resonators"
        )
    if len(mod.phases) != n:
        raise ConfigError("modulation phase count does not match the network order")
    gam = _gyrator_matrix(elems)

    freqs = np.array([f for f, _ in cases], dtype=float)
    ports = [p for _, p in cases]
    if any(p not in ("P1", "P2") for p in ports):
        raise ConfigError("excitation must be 'P1' or 'P2'")
    ncol = len(cases)

    wm = mod.omega_m
    w = 2.0 * math.pi * freqs  # per column
    kmax = config.kmax
    ks = np.arange(-kmax, kmax + 1)

    # common fixed step: integer number of samples per modulation period,
    # resolving the highest projected tone of any column
    f_fast = float(np.max(freqs)) + kmax * mod.fm
    t_mod = 1.0 / mod.fm
    steps_per_period = int(math.ceil(config.samples_per_cycle * f_fast * t_mod))
    dt = t_mod / steps_per_period

    cp, lp = elems.cp, elems.lp
    phases = np.asarray(mod.phases)
    g_loss = np.asarray(elems.g_loss)
    g_p1, g_p2 = elems.g_p1, elems.g_p2
    src_row = np.array([0 if p == "P1" else n + 1 for p in ports])
    src_p1 = (src_row == 0).astype(float)
    src_p2 = (src_row == n + 1).astype(float)

    gam_p1 = gam[0, 1 : n + 1]
    gam_p2 = gam[n + 1, 1 : n + 1]
    gam_res = gam[1 : n + 1, :]

    def deriv(t, y):
        # y rows: q_1..q_N, iL_1..iL_N; columns: cases
        q = y[:n]
        i_l = y[n:]
        c_t = cp * (1.0 + mod.delta_m * np.cos(wm * t + phases))
        v_res = q / c_t[:, None]
        src = np.exp(1j * w * t)
        v = np.empty((n + 2, ncol), dtype=complex)
        v[1 : n + 1] = v_res
        v[0] = (src * src_p1 - gam_p1 @ v_res) / g_p1
        v[n + 1] = (src * src_p2 - gam_p2 @ v_res) / g_p2
        dq = -i_l - g_loss[:, None] * v_res - gam_res @ v
        di_l = v_res / lp
        return np.concatenate([dq, di_l]), v

    def rk4_step(t, y):
        k1, _ = deriv(t, y)
        k2, _ = deriv(t + 0.5 * dt, y + (0.5 * dt) * k1)
        k3, _ = deriv(t + 0.5 * dt, y + (0.5 * dt) * k2)
        k4, _ = deriv(t + dt, y + dt * k3)
        return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def record_window(t, y):
        """Trapezoid projection of port voltages onto e^{j(w+k wm)t}."""
        nsteps = config.record_periods * steps_per_period
        acc = np.zeros((2, len(ks), ncol), dtype=complex)
        for i in range(nsteps + 1):
            _, v = deriv(t, y)
            weight = 0.5 if i in (0, nsteps) else 1.0
            # kern[k, col] = e^{-j (w_col + k wm) t}
            kern = np.exp(-1j * (w[None, :] + ks[:, None] * wm) * t)
            acc[0] += weight * v[0] * kern
            acc[1] += weight * v[n + 1] * kern
            if i < nsteps:
                y = rk4_step(t, y)
                t += dt
        return t, y, acc / nsteps

    y = np.zeros((2 * n, ncol), dtype=complex)
    t = 0.0
    for _ in range(config.settle_periods * steps_per_period):
        y = rk4_step(t, y)
        t += dt

    t, y, prev = record_window(t, y)
    for _ in range(config.max_extra_windows):
        t, y, cur = record_window(t, y)
        delta = np.abs(np.abs(cur) - np.abs(prev))
        if float(np.max(delta)) < config.steady_tol_db * 0.1:
            break
        prev = cur
    else:
        raise NumericError(
            "transient oracle did not reach a steady state "
            f"(projection still varying after {config.max_extra_windows} extra windows)"
        )

    results = []
    g_port = {1: g_p1, 2: g_p2}
    for col in range(ncol):
        a = 1 if ports[col] == "P1" else 2
        out = {}
        for b, row in ((1, 0), (2, 1)):
            for ki, k in enumerate(ks):
                s = 2.0 * math.sqrt(g_port[a] * g_port[b]) * cur[row, ki, col]
                if b == a and k == 0:
                    s -= 1.0
                out[(b, int(k))] = abs(s)
        results.append(out)
    return results
