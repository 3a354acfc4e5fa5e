"""JSON run configuration: mirrors, cavity, quadrature and output settings.

Every quantity carries its unit in the key name.  Example::

    {
      "mirrors": {
        "gold": {"bulk": {"type": "plasma", "plasma_wavelength_m": 1.36e-7}},
        "film": {"layers": [{"medium": {"type": "dielectric", "eps_r": 4.0},
                             "thickness_m": 1e-7}]},
        "ideal": {"perfect": true}
      },
      "cavity": {"mirror1": "gold", "mirror2": "gold", "gap_m": 1e-6,
                 "area_m2": 1e-4,
                 "gap_grid": {"start_m": 1e-7, "stop_m": 1e-6, "points": 12}},
      "quadrature": {"rel_tol": 1e-8},
      "output": {"format": "csv", "path": "force.csv"}
    }

Medium types: ``vacuum``, ``dielectric`` (``eps_r``), ``plasma``
(``omega_p_rad_s`` or ``plasma_wavelength_m``), ``drude`` (as plasma plus
``gamma_rad_s``) and ``tabulated`` (``path`` to a two-column xi/eps file,
relative to the config file).  A sweep grid is given either as an explicit
``gaps_m`` list or as ``gap_grid`` (log-spaced unless ``"spacing": "linear"``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .casimir import QuadratureSpec
from .constants import C
from .errors import ConfigError, TabulatedFormatError
from .media import Dielectric, Drude, Plasma, Vacuum, load_tabulated
from .netalg import HalfSpace, Layer, LayerStack, Mirror, PerfectMirror

FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    mirrors: dict
    mirror1: str
    mirror2: str
    area: float
    gap: float | None = None
    gaps: list = field(default_factory=list)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    output_path: str | None = None
    output_format: str = "csv"
    source: Path | None = None

    def mirror(self, name: str) -> Mirror:
        if name not in self.mirrors:
            raise ConfigError(f"unknown mirror {name!r}; defined: {sorted(self.mirrors)}", "mirrors")
        return self.mirrors[name]


class _Doc:
    """Raw config text, used to point errors at a line."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, path: tuple) -> int | None:
        """Line of the last key of ``path`` found by scanning keys in order."""
        line, start = None, 0
        for key in path:
            if isinstance(key, int):
                continue
            needle = json.dumps(key)
            for i in range(start, len(self.lines)):
                if needle + ":" in self.lines[i].replace('" :', '":'):
                    line, start = i + 1, i + 1
                    break
        return line

    def error(self, message: str, path: tuple):
        name = ".".join(str(p) if not isinstance(p, int) else f"[{p}]" for p in path).replace(".[", "[")
        return ConfigError(message, name or None, self.line_of(path) if path else None)


def _require(doc: _Doc, obj: dict, key: str, path: tuple):
    if not isinstance(obj, dict):
        raise doc.error("expected an object", path)
    if key not in obj:
        raise doc.error(f"missing required key {key!r}", path + (key,))
    return obj[key]


def _number(doc: _Doc, value, path: tuple, positive: bool = True, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise doc.error(f"expected a number, got {value!r}", path)
    if not math.isfinite(value):
        raise doc.error("value must be finite", path)
    if integer and int(value) != value:
        raise doc.error(f"expected an integer, got {value!r}", path)
    if positive and value <= 0:
        raise doc.error(f"value must be > 0, got {value!r}", path)
    return int(value) if integer else float(value)


def _check_keys(doc: _Doc, obj: dict, allowed: set, path: tuple):
    if not isinstance(obj, dict):
        raise doc.error("expected an object", path)
    for key in obj:
        if key not in allowed:
            raise doc.error(f"unknown key {key!r} (allowed: {sorted(allowed)})", path + (key,))


def _omega_p(doc: _Doc, spec: dict, path: tuple) -> float:
    has_w, has_l = "omega_p_rad_s" in spec, "plasma_wavelength_m" in spec
    if has_w == has_l:
        raise doc.error("give exactly one of 'omega_p_rad_s' or 'plasma_wavelength_m'", path)
    if has_w:
        return _number(doc, spec["omega_p_rad_s"], path + ("omega_p_rad_s",))
    lam = _number(doc, spec["plasma_wavelength_m"], path + ("plasma_wavelength_m",))
    return 2 * math.pi * C / lam


def _medium(doc: _Doc, spec, path: tuple, base: Path | None):
    kind = _require(doc, spec, "type", path)
    if kind == "vacuum":
        _check_keys(doc, spec, {"type"}, path)
        return Vacuum()
    if kind == "dielectric":
        _check_keys(doc, spec, {"type", "eps_r"}, path)
        eps = _number(doc, _require(doc, spec, "eps_r", path), path + ("eps_r",))
        if eps <= 1:
            raise doc.error(f"eps_r must be > 1, got {eps}", path + ("eps_r",))
        return Dielectric(eps)
    if kind == "plasma":
        _check_keys(doc, spec, {"type", "omega_p_rad_s", "plasma_wavelength_m"}, path)
        return Plasma(_omega_p(doc, spec, path))
    if kind == "drude":
        _check_keys(doc, spec, {"type", "omega_p_rad_s", "plasma_wavelength_m", "gamma_rad_s"}, path)
        gamma = _number(doc, _require(doc, spec, "gamma_rad_s", path), path + ("gamma_rad_s",))
        return Drude(_omega_p(doc, spec, path), gamma)
    if kind == "tabulated":
        _check_keys(doc, spec, {"type", "path"}, path)
        rel = _require(doc, spec, "path", path)
        if not isinstance(rel, str):
            raise doc.error("expected a file path string", path + ("path",))
        p = Path(rel)
        if not p.is_absolute() and base is not None:
            p = base / p
        try:
            return load_tabulated(p.read_text())
        except OSError as exc:
            raise doc.error(f"cannot read tabulated file: {exc}", path + ("path",)) from None
        except TabulatedFormatError as exc:
            raise doc.error(f"{p}: {exc}", path + ("path",)) from None
    raise doc.error(f"unknown medium type {kind!r} (vacuum, dielectric, plasma, drude, tabulated)",
                    path + ("type",))


def _mirror(doc: _Doc, spec, path: tuple, base: Path | None) -> Mirror:
    _check_keys(doc, spec, {"perfect", "bulk", "layers"}, path)
    kinds = [k for k in ("perfect", "bulk", "layers") if k in spec]
    if len(kinds) != 1:
        raise doc.error("a mirror needs exactly one of 'perfect', 'bulk' or 'layers'", path)
    kind = kinds[0]
    if kind == "perfect":
        if spec["perfect"] is not True:
            raise doc.error("'perfect' must be true", path + ("perfect",))
        return PerfectMirror()
    if kind == "bulk":
        return HalfSpace(_medium(doc, spec["bulk"], path + ("bulk",), base))
    layers = spec["layers"]
    if not isinstance(layers, list):
        raise doc.error("expected a list of layers", path + ("layers",))
    out = []
    for i, layer in enumerate(layers):
        lp = path + ("layers", i)
        _check_keys(doc, layer, {"medium", "thickness_m"}, lp)
        med = _medium(doc, _require(doc, layer, "medium", lp), lp + ("medium",), base)
        out.append(Layer(med, _number(doc, _require(doc, layer, "thickness_m", lp), lp + ("thickness_m",))))
    return LayerStack(tuple(out))


def _gaps(doc: _Doc, cav: dict) -> list:
    if "gaps_m" in cav and "gap_grid" in cav:
        raise doc.error("give either 'gaps_m' or 'gap_grid', not both", ("cavity",))
    if "gaps_m" in cav:
        vals = cav["gaps_m"]
        if not isinstance(vals, list):
            raise doc.error("expected a list of gap lengths", ("cavity", "gaps_m"))
        return [_number(doc, v, ("cavity", "gaps_m", i)) for i, v in enumerate(vals)]
    if "gap_grid" in cav:
        g = cav["gap_grid"]
        path = ("cavity", "gap_grid")
        _check_keys(doc, g, {"start_m", "stop_m", "points", "spacing"}, path)
        a = _number(doc, _require(doc, g, "start_m", path), path + ("start_m",))
        b = _number(doc, _require(doc, g, "stop_m", path), path + ("stop_m",))
        n = _number(doc, _require(doc, g, "points", path), path + ("points",), integer=True)
        spacing = g.get("spacing", "log")
        if spacing not in ("log", "linear"):
            raise doc.error("spacing must be 'log' or 'linear'", path + ("spacing",))
        if b <= a:
            raise doc.error("stop_m must exceed start_m", path + ("stop_m",))
        if n == 1:
            return [a]
        grid = np.geomspace(a, b, n) if spacing == "log" else np.linspace(a, b, n)
        return [float(x) for x in grid]
    return []


def parse_config(text: str, source: Path | None = None) -> RunConfig:
    """Validate a JSON config document; raises ConfigError naming field and line."""
    doc = _Doc(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", None, exc.lineno) from None
    _check_keys(doc, data, {"mirrors", "cavity", "quadrature", "output"}, ())
    base = source.parent if source is not None else None

    mirrors_spec = _require(doc, data, "mirrors", ())
    if not isinstance(mirrors_spec, dict) or not mirrors_spec:
        raise doc.error("expected a non-empty object of named mirrors", ("mirrors",))
    mirrors = {name: _mirror(doc, spec, ("mirrors", name), base) for name, spec in mirrors_spec.items()}

    cav = _require(doc, data, "cavity", ())
    _check_keys(doc, cav, {"mirror1", "mirror2", "gap_m", "gaps_m", "gap_grid", "area_m2"}, ("cavity",))
    names = []
    for key in ("mirror1", "mirror2"):
        name = _require(doc, cav, key, ("cavity",))
        if name not in mirrors:
            raise doc.error(f"mirror {name!r} is not defined under 'mirrors'", ("cavity", key))
        names.append(name)
    area = _number(doc, cav.get("area_m2", 1.0), ("cavity", "area_m2"))
    gap = _number(doc, cav["gap_m"], ("cavity", "gap_m")) if "gap_m" in cav else None
    gaps = _gaps(doc, cav)

    qspec = data.get("quadrature", {})
    _check_keys(doc, qspec, {"rel_tol", "abs_tol", "max_subdivisions", "rule", "threads"}, ("quadrature",))
    kwargs = {}
    for key, integer in (("rel_tol", False), ("abs_tol", False), ("max_subdivisions", True), ("threads", True)):
        if key in qspec:
            kwargs[key] = _number(doc, qspec[key], ("quadrature", key), positive=key != "abs_tol",
                                  integer=integer)
    if "rule" in qspec:
        kwargs["rule"] = qspec["rule"]
    try:
        quad = QuadratureSpec(**kwargs)
    except ValueError as exc:
        bad = next((k for k in kwargs if k in str(exc)), None)
        raise doc.error(str(exc), ("quadrature",) + ((bad,) if bad else ())) from None

    out = data.get("output", {})
    _check_keys(doc, out, {"path", "format"}, ("output",))
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        raise doc.error(f"format must be one of {FORMATS}", ("output", "format"))
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise doc.error("expected a path string", ("output", "path"))

    return RunConfig(mirrors, names[0], names[1], area, gap, gaps, quad, path, fmt, source)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, path)
