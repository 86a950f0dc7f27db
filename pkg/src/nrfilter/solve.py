"""Frequency sweeps: linear solves and S-parameter extraction.

The network is excited with a unit current source at one port; with port
conductances G_a, G_b the scattering parameters follow as

    S_aa = 2 G_a V_{a,0} - 1
    S_ba^(k) = 2 sqrt(G_a G_b) V_{b,k}

where V_{b,k} is the nodal voltage of port b at harmonic k. Reflection
coefficients are reported at the fundamental; transmission coefficients
at every represented harmonic.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgWarning, get_lapack_funcs, lu_factor, lu_solve

from .errors import ConfigError, NumericError
from .harmonic import HarmonicSystem, ModulationSpec, assemble_modulated
from .network import BandpassSpec, assemble_static, scale
from .synthesis import CouplingMatrix

_RCOND_LIMIT = 1e-12  # condition estimate above 1e12 is treated as singular

PORTS = (1, 2)


@dataclass(frozen=True)
class SweepGrid:
    """Uniform frequency grid in Hz."""

    f_start: float
    f_stop: float
    points: int = 401

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError("sweep grid needs at least 2 points")
        if not 0 < self.f_start < self.f_stop:
            raise ConfigError("sweep grid requires 0 < f_start < f_stop")

    @classmethod
    def around(cls, spec: BandpassSpec, points: int = 401, span_factor: float = 3.0):
        """Grid centered on the passband, spanning span_factor passband widths."""
        half = 0.5 * span_factor * spec.bandwidth
        return cls(spec.f0 - half, spec.f0 + half, points)

    @property
    def frequencies(self) -> np.ndarray:
        return np.linspace(self.f_start, self.f_stop, self.points)


@dataclass
class SParamSet:
    """Per-frequency S-parameters for every (out port, in port, harmonic)."""

    f: np.ndarray
    k_values: np.ndarray
    data: dict = field(default_factory=dict)  # (b, a, k) -> complex ndarray

    def s(self, b: int, a: int, k: int = 0) -> np.ndarray:
        return self.data[(b, a, k)]

    @property
    def s11(self):
        return self.data[(1, 1, 0)]

    @property
    def s21(self):
        return self.data[(2, 1, 0)]

    @property
    def s12(self):
        return self.data[(1, 2, 0)]

    @property
    def s22(self):
        return self.data[(2, 2, 0)]

    def at(self, f: float) -> int:
        """Index of the grid point nearest to f."""
        return int(np.argmin(np.abs(self.f - f)))

    def csv_columns(self) -> list[tuple[str, np.ndarray]]:
        """Fixed CSV schema: reflections at k=0, transmissions at every k."""
        cols = [("f_Hz", self.f)]
        for b, a in ((1, 1), (2, 1), (1, 2), (2, 2)):
            ks = [0] if b == a else list(self.k_values)
            for k in ks:
                key = f"S{b}{a}_k{k}"
                cols.append((f"{key}_re", self.data[(b, a, k)].real))
                cols.append((f"{key}_im", self.data[(b, a, k)].imag))
        return cols

    def to_csv(self) -> str:
        cols = self.csv_columns()
        out = io.StringIO()
        out.write(",".join(name for name, _ in cols) + "\n")
        for i in range(len(self.f)):
            out.write(",".join(repr(float(vals[i])) for _, vals in cols) + "\n")
        return out.getvalue()


def _check_condition(lu, piv, anorm: float, frequency: float | None):
    gecon = get_lapack_funcs(("gecon",), (lu,))[0]
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or not np.isfinite(rcond) or rcond < _RCOND_LIMIT:
        raise NumericError(
            f"nodal system is singular or ill-conditioned (rcond={rcond:.3e})",
            frequency=frequency,
        )


def solve_at(system, excite: str = "P1", frequency: float | None = None) -> np.ndarray:
    """Solve the nodal system for a unit current at one port's fundamental.

    Accepts either a HarmonicSystem or a plain static (N+2) matrix.
    """
    if isinstance(system, HarmonicSystem):
        matrix = system.matrix
        n = system.order
        row = system.index(0 if excite == "P1" else n + 1, 0)
    else:
        matrix = system
        n = matrix.shape[0] - 2
        row = 0 if excite == "P1" else n + 1
    if excite not in ("P1", "P2"):
        raise ConfigError("excitation must be 'P1' or 'P2'")
    rhs = np.zeros(matrix.shape[0], dtype=complex)
    rhs[row] = 1.0
    anorm = np.linalg.norm(matrix, 1)
    with warnings.catch_warnings():
        # exact singularity is reported through the rcond check below
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    _check_condition(lu, piv, anorm, frequency)
    return lu_solve((lu, piv), rhs)


def extract_sparams(v: np.ndarray, system, excite: str = "P1") -> dict:
    """S-parameter row for one excitation: maps (out port, harmonic) -> complex."""
    a = 1 if excite == "P1" else 2
    if isinstance(system, HarmonicSystem):
        n = system.order
        g = {1: system.g_p1, 2: system.g_p2}
        kmax = system.kmax
        k_values = range(-kmax, kmax + 1)
        index = lambda node, k: system.index(node, k)
    else:
        n = system.shape[0] - 2
        g = {1: system[0, 0].real, 2: system[n + 1, n + 1].real}
        k_values = (0,)
        index = lambda node, k: node
    out = {}
    for b, node in ((1, 0), (2, n + 1)):
        for k in k_values:
            s = 2.0 * math.sqrt(g[a] * g[b]) * v[index(node, k)]
            if b == a and k == 0:
                s -= 1.0
            out[(b, k)] = s
    return out


def _solve_both_ports(system, frequency: float) -> dict:
    entries = {}
    for excite, a in (("P1", 1), ("P2", 2)):
        v = solve_at(system, excite, frequency=frequency)
        for (b, k), s in extract_sparams(v, system, excite).items():
            entries[(b, a, k)] = s
    return entries


def sweep(
    m: CouplingMatrix,
    spec: BandpassSpec,
    mod: ModulationSpec | None = None,
    grid: SweepGrid | None = None,
    mode: str = "cm_approx",
    impairments=None,
) -> SParamSet:
    """S-parameter sweep of the (optionally modulated) filter network.

    ``impairments`` is an ImpairmentSpec; parasitic couplings are merged
    into the coupling matrix and resonator loss into the element values
    before assembly.
    """
    if grid is None:
        grid = SweepGrid.around(spec)
    if impairments is not None:
        m, elems = impairments.apply(m, spec)
    else:
        elems = scale(m, spec)

    freqs = grid.frequencies
    k_values = mod.k_values if mod is not None else np.array([0])
    data = {
        (b, a, int(k)): np.empty(len(freqs), dtype=complex)
        for b in PORTS
        for a in PORTS
        for k in k_values
    }
    for i, f in enumerate(freqs):
        omega = 2.0 * math.pi * f
        if mod is not None:
            system = assemble_modulated(elems, mod, omega, mode)
        else:
            system = assemble_static(elems, omega)
        for key, s in _solve_both_ports(system, f).items():
            data[key][i] = s
    return SParamSet(f=freqs, k_values=np.asarray(k_values, dtype=int), data=data)
