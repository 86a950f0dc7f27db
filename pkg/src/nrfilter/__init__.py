"""Coupling-matrix analysis of non-reciprocal bandpass filters built from
time-modulated resonators."""

from .designfile import Design, load_design, parse_design, render_design
from .errors import ConfigError, NRFilterError, NumericError
from .harmonic import HarmonicSystem, ModulationSpec, assemble_modulated
from .impairments import ImpairmentSpec, apply_loss, apply_parasitics
from .metrics import (
    FilterMetrics,
    bandwidth_at_level,
    convergence_study,
    directivity,
    harmonic_power_budget,
    summarize,
)
from .network import BandpassElements, BandpassSpec, assemble_static, scale
from .optimize import OptimizeResult, OptimizeSpec, optimize_modulation
from .oracle import TransientConfig, transient_sparams, transient_sparams_batch
from .solve import SParamSet, SweepGrid, solve_at, sweep
from .synthesis import CouplingMatrix, chebyshev_gvalues, chebyshev_inline, load_matrix

__version__ = "1.0.0"

__all__ = [
    "BandpassElements",
    "BandpassSpec",
    "ConfigError",
    "CouplingMatrix",
    "Design",
    "FilterMetrics",
    "HarmonicSystem",
    "ImpairmentSpec",
    "ModulationSpec",
    "NRFilterError",
    "NumericError",
    "OptimizeResult",
    "OptimizeSpec",
    "SParamSet",
    "SweepGrid",
    "TransientConfig",
    "apply_loss",
    "apply_parasitics",
    "assemble_modulated",
    "assemble_static",
    "bandwidth_at_level",
    "chebyshev_gvalues",
    "chebyshev_inline",
    "convergence_study",
    "directivity",
    "harmonic_power_budget",
    "load_design",
    "load_matrix",
    "optimize_modulation",
    "parse_design",
    "render_design",
    "scale",
    "solve_at",
    "summarize",
    "sweep",
    "transient_sparams",
    "transient_sparams_batch",
]
