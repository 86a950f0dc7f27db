"""Bandpass scaling of the normalized prototype and static nodal assembly.

The normalized coupling matrix is scaled to physical admittance
inverters and resonator elements:

    J_{P1,1}  = M_{P1,1} sqrt(G_P1 C)      J_{u,u+1} = M_{u,u+1} C
    J_{N,P2}  = M_{N,P2} sqrt(C G_P2)      B_u       = M_{u,u} C
    Cp        = C / (w0 FB)                Lp        = FB / (w0 C)

and the unmodulated bandpass network is assembled as the (N+2) nodal
admittance matrix G + Y_inv + Y_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .synthesis import CouplingMatrix


@dataclass(frozen=True)
class BandpassSpec:
    """Center frequency, fractional bandwidth and terminations."""

    f0: float
    fb: float
    c: float = 1.0
    g_p1: float = 1.0
    g_p2: float = 1.0

    def __post_init__(self):
        if self.f0 <= 0:
            raise ConfigError("center frequency must be positive")
        if not 0.0 < self.fb < 1.0:
            raise ConfigError("fractional bandwidth must lie in (0, 1)")
        if self.c <= 0 or self.g_p1 <= 0 or self.g_p2 <= 0:
            raise ConfigError("capacitance and port conductances must be positive")

    @property
    def omega0(self) -> float:
        return 2.0 * math.pi * self.f0

    @property
    def bandwidth(self) -> float:
        """Absolute passband width in Hz."""
        return self.fb * self.f0


@dataclass(frozen=True)
class BandpassElements:
    """Physical element values of the scaled bandpass network.

    ``j`` is the full (N+2)x(N+2) symmetric inverter matrix in Siemens
    (zero diagonal); ``b`` holds the per-resonator frequency-invariant
    susceptances; ``g_loss`` an optional per-resonator loss conductance
    added by the impairment model.
    """

    cp: float
    lp: float
    j: np.ndarray
    b: np.ndarray
    g_p1: float
    g_p2: float
    omega0: float
    g_loss: np.ndarray = field(default=None)

    def __post_init__(self):
        j = np.asarray(self.j, dtype=float)
        b = np.asarray(self.b, dtype=float)
        g_loss = self.g_loss
        if g_loss is None:
            g_loss = np.zeros_like(b)
        g_loss = np.asarray(g_loss, dtype=float)
        if j.shape != (self.order + 2, self.order + 2):
            raise ConfigError("inverter matrix has inconsistent shape")
        if not np.allclose(j, j.T, atol=1e-12, rtol=0.0):
            raise ConfigError("inverter matrix must be symmetric")
        for arr in (j, b, g_loss):
            arr.setflags(write=False)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "g_loss", g_loss)

    @property
    def order(self) -> int:
        return len(self.b)

    def port_conductance(self, node: int) -> float:
        return self.g_p1 if node == 0 else self.g_p2

    def resonator_admittance(self, u: int, omega: float) -> complex:
        """Admittance of resonator u (1-based) at angular frequency omega."""
        return (
            1j * omega * self.cp
            + 1.0 / (1j * omega * self.lp)
            + 1j * self.b[u - 1]
            + self.g_loss[u - 1]
        )


def scale(m: CouplingMatrix, spec: BandpassSpec) -> BandpassElements:
    """Scale a normalized coupling matrix to bandpass element values.

    Every inverter follows J_{ij} = M_{ij} sqrt(w_i w_j) with w = G_port
    at port nodes and w = C at resonator nodes, which reduces to the
    main-line formulas above and extends consistently to parasitic
    couplings that attach to ports.
    """
    n = m.order
    weights = np.full(n + 2, spec.c)
    weights[0] = spec.g_p1
    weights[n + 1] = spec.g_p2
    scale_ij = np.sqrt(np.outer(weights, weights))
    j = m.m * scale_ij
    np.fill_diagonal(j, 0.0)
    b = np.diagonal(m.m)[1 : n + 1] * spec.c
    cp = spec.c / (spec.omega0 * spec.fb)
    lp = spec.fb / (spec.omega0 * spec.c)
    return BandpassElements(
        cp=cp,
        lp=lp,
        j=j,
        b=b,
        g_p1=spec.g_p1,
        g_p2=spec.g_p2,
        omega0=spec.omega0,
    )


def assemble_static(elems: BandpassElements, omega: float) -> np.ndarray:
    """Nodal admittance matrix G + Y_inv + Y_p of the unmodulated network."""
    if omega <= 0:
        raise ConfigError("angular frequency must be positive (inductor admittance)")
    n = elems.order
    y = 1j * elems.j.astype(complex)
    y[0, 0] += elems.g_p1
    y[n + 1, n + 1] += elems.g_p2
    for u in range(1, n + 1):
        y[u, u] += elems.resonator_admittance(u, omega)
    return y
