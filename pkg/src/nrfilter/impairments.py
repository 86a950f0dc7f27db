"""Non-idealities: resonator loss via unloaded Q and parasitic cross couplings.

Loss is modeled as a conductance G_loss = w0 Cp / Qu in parallel with
every resonator; it is applied identically to each harmonic resonator
block. Parasitic couplings are extra normalized entries added
symmetrically to the coupling matrix; they scale like ordinary
inverters (sqrt(G C) when attached to a port, C otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError
from .network import BandpassElements, BandpassSpec, scale
from .synthesis import CouplingMatrix


@dataclass(frozen=True)
class ImpairmentSpec:
    """Optional unloaded Q and extra coupling entries (i, j, value)."""

    qu: float | None = None
    extra_couplings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.qu is not None and self.qu <= 0:
            raise ConfigError("unloaded Q must be positive")
        object.__setattr__(
            self,
            "extra_couplings",
            tuple((int(i), int(j), float(v)) for i, j, v in self.extra_couplings),
        )

    def apply(self, m: CouplingMatrix, spec: BandpassSpec):
        """Return (modified coupling matrix, scaled elements with loss)."""
        if self.extra_couplings:
            m = apply_parasitics(m, self.extra_couplings)
        elems = scale(m, spec)
        if self.qu is not None:
            elems = apply_loss(elems, self.qu)
        return m, elems


def apply_loss(elems: BandpassElements, qu: float) -> BandpassElements:
    """Add the parallel loss conductance w0 Cp / Qu to every resonator."""
    if qu <= 0:
        raise ConfigError("unloaded Q must be positive")
    g_loss = np.full(elems.order, elems.omega0 * elems.cp / qu)
    return replace(elems, g_loss=g_loss + np.asarray(elems.g_loss))


def apply_parasitics(m: CouplingMatrix, extra) -> CouplingMatrix:
    """Insert symmetric parasitic entries into a coupling matrix.

    Entries may only be added where the matrix is currently zero:
    parasitics are additions, not redesigns of the main line.
    """
    size = m.m.shape[0]
    new = np.array(m.m)
    for i, j, value in extra:
        if not (0 <= i < size and 0 <= j < size) or i == j:
            raise ConfigError(f"parasitic coupling ({i},{j}) has invalid indices")
        if new[i, j] != 0.0:
            raise ConfigError(
                f"parasitic coupling ({i},{j}) would overwrite an existing entry"
            )
        new[i, j] = new[j, i] = value
    return CouplingMatrix(new)
