"""All-pole Chebyshev coupling-matrix synthesis.

Produces the (N+2) normalized lowpass coupling matrix of an in-line
(tridiagonal-plus-ports) filter, either from the classical g-value
recursion given order and return loss, or from an explicit matrix
supplied by the user.

Index convention: row/column 0 is port P1, row/column N+1 is port P2,
rows 1..N are the resonators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class CouplingMatrix:
    """Normalized (N+2)x(N+2) lowpass coupling matrix with port rows."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError("coupling matrix must be square")
        if m.shape[0] < 4:
            raise ConfigError(
                "coupling matrix must be at least 4x4 (two ports plus two resonators)"
            )
        if not np.allclose(m, m.T, atol=_SYMMETRY_TOL, rtol=0.0):
            raise ConfigError("coupling matrix must be symmetric")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def order(self) -> int:
        return self.m.shape[0] - 2

    def entry(self, i: int, j: int) -> float:
        return float(self.m[i, j])


def chebyshev_gvalues(n: int, rl_db: float) -> list[float]:
    """Lowpass prototype g-values g_0..g_{n+1} for an equiripple response.

    The ripple factor follows from the in-band return loss,
    eps = 1/sqrt(10^(RL/10) - 1), and the element values from the
    standard recursion (Matthaei/Young/Jones form).
    """
    if n < 2:
        raise ConfigError("filter order must be at least 2")
    if rl_db <= 0:
        raise ConfigError("return loss must be positive (dB)")
    eps = 1.0 / math.sqrt(10.0 ** (rl_db / 10.0) - 1.0)
    beta = math.asinh(1.0 / eps) * 2.0
    gamma = math.sinh(beta / (2.0 * n))

    a = [math.sin((2 * k - 1) * math.pi / (2 * n)) for k in range(1, n + 1)]
    b = [gamma**2 + math.sin(k * math.pi / n) ** 2 for k in range(1, n + 1)]

    g = [1.0, 2.0 * a[0] / gamma]
    for k in range(2, n + 1):
        g.append(4.0 * a[k - 2] * a[k - 1] / (b[k - 2] * g[k - 1]))
    if n % 2 == 1:
        g.append(1.0)
    else:
        g.append(1.0 / math.tanh(beta / 4.0) ** 2)
    return g


def chebyshev_inline(n: int, rl_db: float) -> CouplingMatrix:
    """In-line coupling matrix of an order-n equiripple filter.

    All diagonal entries are zero (synchronous tuning); couplings are
    M_{i,i+1} = 1/sqrt(g_i g_{i+1}) with the ports absorbed into rows
    0 and n+1.
    """
    g = chebyshev_gvalues(n, rl_db)
    m = np.zeros((n + 2, n + 2))
    for i in range(n + 1):
        coupling = 1.0 / math.sqrt(g[i] * g[i + 1])
        m[i, i + 1] = m[i + 1, i] = coupling
    return CouplingMatrix(m)


def load_matrix(entries) -> CouplingMatrix:
    """Validate and wrap an explicit coupling matrix.

    Rejects non-square input, matrices smaller than 4x4 (two ports plus
    at least two resonators) and asymmetry beyond 1e-12.
    """
    m = np.asarray(entries, dtype=float)
    return CouplingMatrix(m)
