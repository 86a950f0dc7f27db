"""Plain-text design files: parse, validate, render.

INI-style sections describe one filter design end to end:

    [prototype]   order + return_loss (synthesized) or an explicit matrix
    [bandpass]    f0, fb, optional port conductances
    [modulation]  fm, delta_m, dphi or a phases list (degrees), nhar
    [mode]        rigorous | cm_approx
    [grid]        f_start/f_stop/points, or points/span around the passband
    [impairments] optional qu and parasitic couplings
    [optimize]    optional search bounds and constraints

Frequencies accept Hz/kHz/MHz/GHz suffixes; angles are written in
degrees and converted to radians here, at the parse boundary. Unknown
sections or keys are rejected. ``render`` emits text that re-parses to
an identical design.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .harmonic import MODES, ModulationSpec
from .impairments import ImpairmentSpec
from .network import BandpassSpec
from .optimize import OptimizeSpec
from .solve import SweepGrid
from .synthesis import CouplingMatrix, chebyshev_inline, load_matrix

# longest suffix first so "MHz" is not truncated to "Hz"
_FREQ_UNITS = {"ghz": 1e9, "mhz": 1e6, "khz": 1e3, "hz": 1.0}

_KNOWN_KEYS = {
    "prototype": {"order", "return_loss", "matrix"},
    "bandpass": {"f0", "fb", "g_p1", "g_p2"},
    "modulation": {"fm", "delta_m", "dphi", "phases", "nhar"},
    "mode": {"mode"},
    "grid": {"f_start", "f_stop", "points", "span"},
    "impairments": {"qu", "couplings"},
    "optimize": {
        "fm_low",
        "fm_high",
        "delta_m_low",
        "delta_m_high",
        "dphi_low",
        "dphi_high",
        "objective",
        "min_return_loss",
        "max_insertion_loss",
        "nhar",
        "grid_points",
    },
}


def parse_frequency(text: str) -> float:
    """Parse a frequency with an optional Hz/kHz/MHz/GHz suffix."""
    t = text.strip()
    for unit, mult in _FREQ_UNITS.items():
        if t.lower().endswith(unit):
            t = t[: -len(unit)]
            break
    else:
        mult = 1.0
    try:
        return float(t) * mult
    except ValueError:
        raise ConfigError(f"cannot parse frequency {text!r}") from None


def format_frequency(value: float) -> str:
    """Render a frequency exactly; in Hz, so reparsing is bit-identical."""
    return f"{value!r} Hz"


@dataclass(frozen=True)
class Design:
    """One fully validated design, ready to drive any subcommand."""

    m: CouplingMatrix
    spec: BandpassSpec
    mode: str = "cm_approx"
    mod: ModulationSpec | None = None
    grid: SweepGrid | None = None
    impairments: ImpairmentSpec | None = None
    optimize: OptimizeSpec | None = None

    @property
    def order(self) -> int:
        return self.m.order

    def sweep_grid(self) -> SweepGrid:
        if self.grid is not None:
            return self.grid
        return SweepGrid.around(self.spec)


def _section(cp: configparser.ConfigParser, name: str, required: bool):
    if not cp.has_section(name):
        if required:
            raise ConfigError(f"design file is missing the [{name}] section")
        return None
    unknown = set(cp[name]) - _KNOWN_KEYS[name]
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}"
        )
    return cp[name]


def _get(sec, key: str, required: bool = True) -> str | None:
    if key not in sec:
        if required:
            raise ConfigError(f"[{sec.name}] is missing required key '{key}'")
        return None
    return sec[key]


def _parse_matrix(text: str) -> CouplingMatrix:
    rows = []
    for line in text.strip().splitlines():
        entries = line.replace(",", " ").split()
        try:
            rows.append([float(e) for e in entries])
        except ValueError:
            raise ConfigError(f"cannot parse matrix row {line!r}") from None
    return load_matrix(rows)


def parse_design(text: str) -> Design:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"design file syntax error: {exc}") from None
    unknown = set(cp.sections()) - set(_KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    proto = _section(cp, "prototype", required=True)
    if "matrix" in proto:
        if "order" in proto or "return_loss" in proto:
            raise ConfigError(
                "[prototype] takes either an explicit matrix or order + return_loss"
            )
        m = _parse_matrix(proto["matrix"])
    else:
        try:
            order = int(_get(proto, "order"))
            rl = float(_get(proto, "return_loss"))
        except ValueError as exc:
            raise ConfigError(f"[prototype] has a non-numeric value: {exc}") from None
        m = chebyshev_inline(order, rl)

    band = _section(cp, "bandpass", required=True)
    try:
        spec = BandpassSpec(
            f0=parse_frequency(_get(band, "f0")),
            fb=float(_get(band, "fb")),
            g_p1=float(band.get("g_p1", "1.0")),
            g_p2=float(band.get("g_p2", "1.0")),
        )
    except ValueError as exc:
        raise ConfigError(f"[bandpass] has a non-numeric value: {exc}") from None

    mod = None
    msec = _section(cp, "modulation", required=False)
    if msec is not None:
        try:
            fm = parse_frequency(_get(msec, "fm"))
            delta_m = float(_get(msec, "delta_m"))
            nhar = int(_get(msec, "nhar"))
        except ValueError as exc:
            raise ConfigError(f"[modulation] has a non-numeric value: {exc}") from None
        if "phases" in msec:
            if "dphi" in msec:
                raise ConfigError("[modulation] takes either dphi or phases, not both")
            try:
                phases = tuple(
                    math.radians(float(p))
                    for p in msec["phases"].replace(",", " ").split()
                )
            except ValueError:
                raise ConfigError("cannot parse [modulation] phases list") from None
            if len(phases) != m.order:
                raise ConfigError(
                    f"phases list has {len(phases)} entries for {m.order} resonators"
                )
            mod = ModulationSpec(fm=fm, delta_m=delta_m, phases=phases, nhar=nhar)
        else:
            try:
                dphi = math.radians(float(_get(msec, "dphi")))
            except ValueError:
                raise ConfigError("cannot parse [modulation] dphi") from None
            mod = ModulationSpec.progressive(fm, delta_m, dphi, m.order, nhar)

    mode = "cm_approx"
    modesec = _section(cp, "mode", required=False)
    if modesec is not None:
        mode = _get(modesec, "mode").strip()
        if mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")

    grid = None
    gsec = _section(cp, "grid", required=False)
    if gsec is not None:
        try:
            points = int(gsec.get("points", "401"))
        except ValueError:
            raise ConfigError("cannot parse [grid] points") from None
        if "f_start" in gsec or "f_stop" in gsec:
            if "span" in gsec:
                raise ConfigError("[grid] takes f_start/f_stop or span, not both")
            grid = SweepGrid(
                parse_frequency(_get(gsec, "f_start")),
                parse_frequency(_get(gsec, "f_stop")),
                points,
            )
        else:
            try:
                span = float(gsec.get("span", "3.0"))
            except ValueError:
                raise ConfigError("cannot parse [grid] span") from None
            grid = SweepGrid.around(spec, points=points, span_factor=span)

    imp = None
    isec = _section(cp, "impairments", required=False)
    if isec is not None:
        qu = None
        if "qu" in isec:
            try:
                qu = float(isec["qu"])
            except ValueError:
                raise ConfigError("cannot parse [impairments] qu") from None
        extra = ()
        if "couplings" in isec:
            extra = []
            for item in isec["couplings"].split(";"):
                item = item.strip()
                if not item:
                    continue
                parts = item.replace(",", " ").split()
                if len(parts) != 3:
                    raise ConfigError(
                        f"parasitic coupling {item!r} must be 'i j value'"
                    )
                try:
                    extra.append((int(parts[0]), int(parts[1]), float(parts[2])))
                except ValueError:
                    raise ConfigError(
                        f"cannot parse parasitic coupling {item!r}"
                    ) from None
            extra = tuple(extra)
        imp = ImpairmentSpec(qu=qu, extra_couplings=extra)

    opt = None
    osec = _section(cp, "optimize", required=False)
    if osec is not None:
        try:
            opt = OptimizeSpec(
                fm_bounds=(
                    parse_frequency(_get(osec, "fm_low")),
                    parse_frequency(_get(osec, "fm_high")),
                ),
                delta_m_bounds=(
                    float(_get(osec, "delta_m_low")),
                    float(_get(osec, "delta_m_high")),
                ),
                dphi_bounds=(
                    math.radians(float(_get(osec, "dphi_low"))),
                    math.radians(float(_get(osec, "dphi_high"))),
                ),
                objective=osec.get("objective", "d0"),
                min_return_loss_db=(
                    float(osec["min_return_loss"]) if "min_return_loss" in osec else None
                ),
                max_insertion_loss_db=(
                    float(osec["max_insertion_loss"])
                    if "max_insertion_loss" in osec
                    else None
                ),
                nhar=int(osec.get("nhar", "7")),
                grid_points=int(osec.get("grid_points", "201")),
            )
        except ValueError as exc:
            raise ConfigError(f"[optimize] has a non-numeric value: {exc}") from None

    return Design(
        m=m, spec=spec, mode=mode, mod=mod, grid=grid, impairments=imp, optimize=opt
    )


def load_design(path: str) -> Design:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read design file: {exc}") from None
    return parse_design(text)


def render_design(d: Design) -> str:
    """Serialize a design; parse(render(d)) equals d."""
    lines = ["[prototype]", "matrix ="]
    for row in np.asarray(d.m.m):
        lines.append("    " + " ".join(repr(float(v)) for v in row))
    lines += [
        "",
        "[bandpass]",
        f"f0 = {format_frequency(d.spec.f0)}",
        f"fb = {d.spec.fb!r}",
        f"g_p1 = {d.spec.g_p1!r}",
        f"g_p2 = {d.spec.g_p2!r}",
    ]
    if d.mod is not None:
        lines += [
            "",
            "[modulation]",
            f"fm = {format_frequency(d.mod.fm)}",
            f"delta_m = {d.mod.delta_m!r}",
            "phases = " + " ".join(repr(math.degrees(p)) for p in d.mod.phases),
            f"nhar = {d.mod.nhar}",
        ]
    lines += ["", "[mode]", f"mode = {d.mode}"]
    if d.grid is not None:
        lines += [
            "",
            "[grid]",
            f"f_start = {format_frequency(d.grid.f_start)}",
            f"f_stop = {format_frequency(d.grid.f_stop)}",
            f"points = {d.grid.points}",
        ]
    if d.impairments is not None:
        lines += ["", "[impairments]"]
        if d.impairments.qu is not None:
            lines.append(f"qu = {d.impairments.qu!r}")
        if d.impairments.extra_couplings:
            lines.append(
                "couplings = "
                + "; ".join(
                    f"{i} {j} {v!r}" for i, j, v in d.impairments.extra_couplings
                )
            )
    if d.optimize is not None:
        o = d.optimize
        lines += [
            "",
            "[optimize]",
            f"fm_low = {format_frequency(o.fm_bounds[0])}",
            f"fm_high = {format_frequency(o.fm_bounds[1])}",
            f"delta_m_low = {o.delta_m_bounds[0]!r}",
            f"delta_m_high = {o.delta_m_bounds[1]!r}",
            f"dphi_low = {math.degrees(o.dphi_bounds[0])!r}",
            f"dphi_high = {math.degrees(o.dphi_bounds[1])!r}",
            f"objective = {o.objective}",
            f"nhar = {o.nhar}",
            f"grid_points = {o.grid_points}",
        ]
        if o.min_return_loss_db is not None:
            lines.append(f"min_return_loss = {o.min_return_loss_db!r}")
        if o.max_insertion_loss_db is not None:
            lines.append(f"max_insertion_loss = {o.max_insertion_loss_db!r}")
    return "\n".join(lines) + "\n"
