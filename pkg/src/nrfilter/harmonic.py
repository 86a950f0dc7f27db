"""Multi-harmonic block admittance assembly for time-modulated capacitors.

Each resonator capacitor is modulated as

    Cp_u(t) = Cp [1 + Dm cos(wm t + phi_u)],

which couples the voltage component at w + k wm to its neighbours at
w + (k +- 1) wm. The full nodal system has one (Nhar x Nhar) block per
coupling-matrix entry. Two assembly modes are supported:

* ``rigorous`` - frequency-dependent conversion-matrix form. Resonator
  block row k has diagonal Y_r(k) + jB_u and off-diagonal entries
  j (w + k wm) D at column k+1 and j (w + k wm) E at column k-1 with
  D = (Dm Cp / 2) e^{-j phi_u}, E = conj(D).
* ``cm_approx`` - frequency-invariant coupling-matrix form. Resonator
  diagonals become the static resonator admittance plus a harmonic
  susceptance Bhat_k = 2 k wm C / (w0 FB); the off-diagonal couplings
  are the rigorous ones evaluated at w0 instead of w.

Nodes couple to each other only through same-order harmonics (the
unmodulated inverters), so node-off-diagonal blocks are diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericError
from .network import BandpassElements, BandpassSpec

MODES = ("rigorous", "cm_approx")


@dataclass(frozen=True)
class ModulationSpec:
    """Sinusoidal capacitor modulation: frequency, index, per-resonator phases."""

    fm: float
    delta_m: float
    phases: tuple
    nhar: int

    def __post_init__(self):
        if self.fm <= 0:
            raise ConfigError("modulation frequency must be positive")
        if not 0.0 <= self.delta_m < 1.0:
            raise ConfigError("modulation index must lie in [0, 1)")
        if self.nhar < 1 or self.nhar % 2 == 0:
            raise ConfigError("number of harmonics must be odd and >= 1")
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))

    @classmethod
    def progressive(cls, fm: float, delta_m: float, dphi: float, n: int, nhar: int):
        """Progressive phasing phi_u = (u-1) dphi for n resonators (radians)."""
        return cls(fm=fm, delta_m=delta_m, phases=tuple((u * dphi) for u in range(n)), nhar=nhar)

    @property
    def omega_m(self) -> float:
        return 2.0 * math.pi * self.fm

    @property
    def kmax(self) -> int:
        return (self.nhar - 1) // 2

    @property
    def k_values(self) -> np.ndarray:
        return np.arange(-self.kmax, self.kmax + 1)


@dataclass(frozen=True)
class HarmonicSystem:
    """Assembled (N+2)*Nhar complex block admittance matrix."""

    matrix: np.ndarray
    order: int
    nhar: int
    mode: str
    omega: float
    g_p1: float
    g_p2: float

    @property
    def size(self) -> int:
        return (self.order + 2) * self.nhar

    @property
    def kmax(self) -> int:
        return (self.nhar - 1) // 2

    def index(self, node: int, k: int) -> int:
        """Row index of (node, harmonic k); nodes 0..N+1, k in -K..K."""
        if not 0 <= node <= self.order + 1:
            raise IndexError(f"node {node} out of range")
        if abs(k) > self.kmax:
            raise IndexError(f"harmonic {k} outside represented range")
        return node * self.nhar + (k + self.kmax)

    def port_conductance(self, node: int) -> float:
        return self.g_p1 if node == 0 else self.g_p2


def harmonic_susceptance(k: int, spec: BandpassSpec, mod: ModulationSpec) -> float:
    """Frequency-invariant susceptance of the k-th harmonic resonator.

    Bhat_k = 2 k wm C / (w0 FB), odd in k and zero at k = 0.
    """
    return 2.0 * k * mod.omega_m * spec.c / (spec.omega0 * spec.fb)


def nonreciprocal_inverter_lowpass(
    u: int, k: int, direction: str, spec: BandpassSpec, mod: ModulationSpec
) -> complex:
    """Frequency-invariant non-reciprocal inverter between harmonics k-1 and k.

    ``direction`` selects the conversion sense within physical resonator u
    (1-based): "up" couples the k-1 component into the k balance equation,
    "down" the k component into the k-1 equation. Both evaluate the
    conversion term at the passband center w0:

        up:   (Dm/2) (C / (w0 FB)) e^{+j phi_u} (w0 + k wm)
        down: (Dm/2) (C / (w0 FB)) e^{-j phi_u} (w0 + (k-1) wm)

    The phase attachment matches the conversion-matrix derivation of the
    rigorous resonator block (up-conversion carries e^{+j phi_u}).
    """
    if not 1 <= u <= len(mod.phases):
        raise ConfigError(f"resonator index {u} out of range")
    if direction not in ("up", "down"):
        raise ConfigError("direction must be 'up' or 'down'")
    cp_norm = spec.c / (spec.omega0 * spec.fb)
    phi = mod.phases[u - 1]
    amp = 0.5 * mod.delta_m * cp_norm
    if direction == "up":
        return amp * np.exp(+1j * phi) * (spec.omega0 + k * mod.omega_m)
    return amp * np.exp(-1j * phi) * (spec.omega0 + (k - 1) * mod.omega_m)


def assemble_modulated(
    elems: BandpassElements, mod: ModulationSpec, omega: float, mode: str = "cm_approx"
) -> HarmonicSystem:
    """Assemble the (N+2)*Nhar block admittance system at angular frequency omega."""
    if mode not in MODES:
        raise ConfigError(f"unknown assembly mode {mode!r}")
    if len(mod.phases) != elems.order:
        raise ConfigError(
            f"modulation carries {len(mod.phases)} phases for {elems.order} resonators"
        )
    if omega <= 0:
        raise ConfigError("angular frequency must be positive")
    n = elems.order
    nhar = mod.nhar
    kmax = (nhar - 1) // 2
    k_vals = np.arange(-kmax, kmax + 1)
    wm = mod.omega_m
    w_shift = omega + k_vals * wm
    if mode == "rigorous" and np.any(w_shift <= 0.0):
        bad = int(k_vals[np.argmin(w_shift)])
        raise NumericError(
            f"shifted frequency w + k*wm is non-positive for harmonic k={bad}",
            frequency=omega / (2.0 * math.pi),
        )

    size = (n + 2) * nhar
    y = np.zeros((size, size), dtype=complex)
    ident = np.eye(nhar)

    def block(a: int, b: int) -> tuple[slice, slice]:
        return (slice(a * nhar, (a + 1) * nhar), slice(b * nhar, (b + 1) * nhar))

    # Port loads: constant resistive termination for every harmonic.
    y[block(0, 0)] += elems.g_p1 * ident
    y[block(n + 1, n + 1)] += elems.g_p2 * ident

    # Unmodulated inverters couple same-order harmonics between nodes.
    for a in range(n + 2):
        for b in range(n + 2):
            if a != b and elems.j[a, b] != 0.0:
                y[block(a, b)] += 1j * elems.j[a, b] * ident

    # Resonator diagonal blocks: tridiagonal in harmonic index.
    cp, lp = elems.cp, elems.lp
    conv = 0.5 * mod.delta_m * cp
    for u in range(1, n + 1):
        phi = mod.phases[u - 1]
        d_u = conv * np.exp(-1j * phi)
        e_u = conv * np.exp(+1j * phi)
        sub = np.zeros((nhar, nhar), dtype=complex)
        if mode == "rigorous":
            y_r = 1j * cp * w_shift + 1.0 / (1j * lp * w_shift)
            np.fill_diagonal(sub, y_r + 1j * elems.b[u - 1] + elems.g_loss[u - 1])
            row_w = w_shift
        else:
            y_static = 1j * omega * cp + 1.0 / (1j * omega * lp)
            bhat = 2.0 * k_vals * wm * cp
            np.fill_diagonal(
                sub, y_static + 1j * (elems.b[u - 1] + bhat) + elems.g_loss[u - 1]
            )
            row_w = elems.omega0 + k_vals * wm
        if mod.delta_m != 0.0:
            for i in range(nhar):
                if i + 1 < nhar:
                    sub[i, i + 1] = 1j * d_u * row_w[i]
                if i - 1 >= 0:
                    sub[i, i - 1] = 1j * e_u * row_w[i]
        y[block(u, u)] += sub

    return HarmonicSystem(
        matrix=y,
        order=n,
        nhar=nhar,
        mode=mode,
        omega=omega,
        g_p1=elems.g_p1,
        g_p2=elems.g_p2,
    )
