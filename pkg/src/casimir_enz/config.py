"""Flat ``key = value`` run configuration.

Grammar (one assignment per line, ``#`` starts a comment)::

    gap                      = 1e-6          # m
    left.substrate           = pec           # pec | pmc
    left.layer1.material     = drude         # vacuum | constant | drude
    left.layer1.thickness    = 1e-6          # m
    left.layer1.omega_p      = 3.0e14        # rad/s
    left.layer1.omega_c      = 0             # rad/s, optional (default 0)
    left.layer2.eps          = 4.0           # constant material only
    right.substrate          = pec
    quadrature.rel_tol       = 1e-6
    quadrature.abs_tol       = 1e-12         # Pa
    quadrature.max_evals     = 10000000
    sweep.axis1.param        = left.layer1.omega_p
    sweep.axis1.logspace     = 3e11, 3e17, 25   # start, stop, count
    sweep.axis2.param        = gap
    sweep.axis2.values       = 5e-7, 1e-6, 2e-6
    equilibria.gap_min       = 5e-8
    equilibria.gap_max       = 5e-6
    equilibria.n_scan        = 64

Layers are numbered from the substrate outward and must be contiguous.
Every number is a plain SI float; unit suffixes are rejected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .lifshitz import CavityConfig, QuadratureSettings
from .materials import BoundaryKind, ConstantEps, Drude, Vacuum
from .reflection import Layer, MirrorStack


class ConfigError(Exception):
    pass


class ConfigParseError(ConfigError):
    """Malformed document: bad syntax, unknown key, unparsable value."""


class ConfigValidationError(ConfigError):
    """Well-formed document whose values violate a model invariant."""


_LAYER_KEY = re.compile(r"^(left|right)\.layer([1-9][0-9]*)\.(material|thickness|omega_p|omega_c|eps)$")
_SIDE_KEY = re.compile(r"^(left|right)\.substrate$")
_AXIS_KEY = re.compile(r"^sweep\.axis([12])\.(param|values|logspace|linspace)$")
_SWEEPABLE = re.compile(r"^(gap|(left|right)\.layer[1-9][0-9]*\.(thickness|omega_p|omega_c|eps))$")
_SCALAR_KEYS = {
    "gap": float,
    "quadrature.rel_tol": float,
    "quadrature.abs_tol": float,
    "quadrature.max_evals": int,
    "equilibria.gap_min": float,
    "equilibria.gap_max": float,
    "equilibria.n_scan": int,
}
_MATERIALS = ("vacuum", "constant", "drude")
_MATERIAL_FIELDS = {"vacuum": set(), "constant": {"eps"}, "drude": {"omega_p", "omega_c"}}


@dataclass(frozen=True)
class SweepAxis:
    param: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class SweepSpec:
    axis1: SweepAxis
    axis2: Optional[SweepAxis] = None

    @property
    def axes(self) -> tuple[SweepAxis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    def grid(self) -> list[dict[str, float]]:
        """Parameter overrides for every grid point, row-major (axis1 outer)."""
        if self.axis2 is None:
            return [{self.axis1.param: v} for v in self.axis1.values]
        return [
            {self.axis1.param: v1, self.axis2.param: v2}
            for v1 in self.axis1.values
            for v2 in self.axis2.values
        ]


@dataclass(frozen=True)
class EquilibriaRequest:
    gap_min: float
    gap_max: float
    n_scan: int = 64


@dataclass(frozen=True)
class RunConfig:
    """Parsed document: normalised raw values plus the validated objects."""

    raw: dict
    cavity: CavityConfig
    quadrature: QuadratureSettings
    sweep: Optional[SweepSpec] = None
    equilibria: Optional[EquilibriaRequest] = None
    defaults: dict = field(default_factory=dict)  # stand-ins for omitted swept values

    def cavity_at(self, overrides: dict[str, float]) -> CavityConfig:
        return build_cavity({**self.raw, **self.defaults, **overrides})

    def snapshot(self) -> list[str]:
        """``key = value`` lines reproducing the document in canonical order.

        Sweep axes are written as their expanded ``values`` list, so the
        snapshot parses back to the same grid.
        """
        items = {re.sub(r"\.(logspace|linspace)$", ".values", k): v for k, v in self.raw.items()}
        return [f"{k} = {_fmt(v)}" for k, v in sorted(items.items(), key=lambda kv: _key_order(kv[0]))]


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def _key_order(key: str):
    head = key.split(".")[0]
    rank = {"gap": 0, "left": 1, "right": 2, "quadrature": 3, "sweep": 4, "equilibria": 5}.get(head, 9)
    m = _LAYER_KEY.match(key)
    if m:
        return (rank, 1, int(m.group(2)), key)
    return (rank, 0, 0, key)


def _number(text: str, kind, key: str, lineno: int):
    try:
        value = kind(text)
    except ValueError:
        raise ConfigParseError(f"line {lineno}: {key}: not a plain {kind.__name__}: {text!r}") from None
    if kind is float and not math.isfinite(value):
        raise ConfigParseError(f"line {lineno}: {key}: value must be finite, got {text!r}")
    return value


def _number_list(text: str, key: str, lineno: int) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise ConfigParseError(f"line {lineno}: {key}: expected a comma-separated list of numbers")
    return tuple(_number(p, float, key, lineno) for p in parts)


def _axis_values(form: str, nums: tuple[float, ...], key: str, lineno: int) -> tuple[float, ...]:
    if form == "values":
        return nums
    if len(nums) != 3 or nums[2] != int(nums[2]) or nums[2] < 1:
        raise ConfigParseError(f"line {lineno}: {key}: expected 'start, stop, count'")
    start, stop, count = nums[0], nums[1], int(nums[2])
    if form == "logspace":
        if start <= 0 or stop <= 0:
            raise ConfigValidationError(f"{key}: logspace endpoints must be > 0")
        return tuple(float(v) for v in np.geomspace(start, stop, count))
    return tuple(float(v) for v in np.linspace(start, stop, count))


def _tokenise(text: str) -> dict:
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigParseError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, value = (s.strip() for s in body.split("=", 1))
        if not key or not value:
            raise ConfigParseError(f"line {lineno}: empty key or value in {line.strip()!r}")
        if key in raw:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")

        if key in _SCALAR_KEYS:
            raw[key] = _number(value, _SCALAR_KEYS[key], key, lineno)
        elif _SIDE_KEY.match(key):
            if value.lower() not in ("pec", "pmc"):
                raise ConfigParseError(f"line {lineno}: {key}: expected pec or pmc, got {value!r}")
            raw[key] = value.lower()
        elif m := _LAYER_KEY.match(key):
            if m.group(3) == "material":
                if value.lower() not in _MATERIALS:
                    raise ConfigParseError(
                        f"line {lineno}: {key}: expected one of {', '.join(_MATERIALS)}, got {value!r}"
                    )
                raw[key] = value.lower()
            else:
                raw[key] = _number(value, float, key, lineno)
        elif m := _AXIS_KEY.match(key):
            if m.group(2) == "param":
                if not _SWEEPABLE.match(value):
                    raise ConfigParseError(f"line {lineno}: {key}: {value!r} is not a sweepable parameter")
                raw[key] = value
            else:
                nums = _number_list(value, key, lineno)
                raw[key] = _axis_values(m.group(2), nums, key, lineno)
        else:
            raise ConfigParseError(f"line {lineno}: unknown key {key!r}")
    return raw


def _build_stack(raw: dict, side: str) -> MirrorStack:
    key = f"{side}.substrate"
    if key not in raw:
        raise ConfigValidationError(f"missing required key {key!r}")
    substrate = BoundaryKind(raw[key])
    indices = sorted({int(m.group(2)) for k in raw if (m := _LAYER_KEY.match(k)) and m.group(1) == side})
    if indices != list(range(1, len(indices) + 1)):
        raise ConfigValidationError(f"{side}: layers must be numbered layer1..layerN without gaps, got {indices}")

    layers = []
    for i in indices:
        prefix = f"{side}.layer{i}"
        fields = {k[len(prefix) + 1:]: v for k, v in raw.items() if k.startswith(prefix + ".")}
        material = fields.pop("material", None)
        if material is None:
            raise ConfigValidationError(f"missing required key '{prefix}.material'")
        if "thickness" not in fields:
            raise ConfigValidationError(f"missing required key '{prefix}.thickness'")
        thickness = fields.pop("thickness")
        extra = set(fields) - _MATERIAL_FIELDS[material]
        if extra:
            raise ConfigValidationError(
                f"{prefix}: key(s) {sorted(extra)} not valid for material {material!r}"
            )
        try:
            if material == "vacuum":
                model = Vacuum()
            elif material == "constant":
                if "eps" not in fields:
                    raise ConfigValidationError(f"missing required key '{prefix}.eps'")
                model = ConstantEps(fields["eps"])
            else:
                if "omega_p" not in fields:
                    raise ConfigValidationError(f"missing required key '{prefix}.omega_p'")
                model = Drude(fields["omega_p"], fields.get("omega_c", 0.0))
            layers.append(Layer(model, thickness))
        except ValueError as exc:
            raise ConfigValidationError(f"{prefix}: {exc}") from None
    return MirrorStack(substrate, tuple(layers))


def build_cavity(raw: dict) -> CavityConfig:
    """Cavity described by a normalised raw mapping (see :func:`parse_config`)."""
    if "gap" not in raw:
        raise ConfigValidationError("missing required key 'gap'")
    left = _build_stack(raw, "left")
    right = _build_stack(raw, "right")
    try:
        return CavityConfig(left, right, raw["gap"])
    except ValueError as exc:
        raise ConfigValidationError(str(exc)) from None


def _build_axis(raw: dict, n: str) -> Optional[SweepAxis]:
    prefix = f"sweep.axis{n}."
    keys = [k for k in raw if k.startswith(prefix)]
    if not keys:
        return None
    if prefix + "param" not in raw:
        raise ConfigValidationError(f"missing required key '{prefix}param'")
    forms = [k for k in keys if not k.endswith(".param")]
    if len(forms) != 1:
        raise ConfigValidationError(f"sweep.axis{n}: give exactly one of values, logspace, linspace")
    values = raw[forms[0]]
    if not values:
        raise ConfigValidationError(f"sweep.axis{n}: value list must be nonempty")
    diffs = np.diff(values)
    if len(values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ConfigValidationError(f"sweep.axis{n}: values must be strictly monotone")
    return SweepAxis(raw[prefix + "param"], tuple(values))


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document.

    Raises
    ------
    ConfigParseError
        Syntax errors, unknown keys, unparsable numbers (with line numbers).
    ConfigValidationError
        Values that violate a model invariant, naming it.
    """
    raw = _tokenise(text)

    axis1, axis2 = _build_axis(raw, "1"), _build_axis(raw, "2")
    if axis2 is not None and axis1 is None:
        raise ConfigValidationError("sweep.axis2 given without sweep.axis1")
    sweep = SweepSpec(axis1, axis2) if axis1 is not None else None
    if sweep and axis2 is not None and axis1.param == axis2.param:
        raise ConfigValidationError("sweep axes must address different parameters")

    eq_keys = [k for k in raw if k.startswith("equilibria.")]
    equilibria = None
    if eq_keys:
        for k in ("equilibria.gap_min", "equilibria.gap_max"):
            if k not in raw:
                raise ConfigValidationError(f"missing required key {k!r}")
        equilibria = EquilibriaRequest(
            raw["equilibria.gap_min"], raw["equilibria.gap_max"], raw.get("equilibria.n_scan", 64)
        )
        if not 0 < equilibria.gap_min < equilibria.gap_max:
            raise ConfigValidationError("equilibria: need 0 < gap_min < gap_max")
        if equilibria.n_scan < 8:
            raise ConfigValidationError("equilibria.n_scan must be >= 8")
    if sweep is not None and equilibria is not None:
        raise ConfigValidationError("a document may define a sweep or an equilibria scan, not both")

    # swept parameters (and the gap of an equilibria template) may be left out
    defaults = {}
    if "gap" not in raw and equilibria is not None:
        defaults["gap"] = equilibria.gap_min
    if sweep is not None:
        for axis in sweep.axes:
            if axis.param not in raw:
                defaults[axis.param] = axis.values[0]
    cavity = build_cavity({**raw, **defaults})
    if sweep is not None:
        for axis in sweep.axes:
            for v in axis.values:
                build_cavity({**raw, **defaults, axis.param: v})

    try:
        quadrature = QuadratureSettings(
            rel_tol=raw.get("quadrature.rel_tol", QuadratureSettings.rel_tol),
            abs_tol=raw.get("quadrature.abs_tol", QuadratureSettings.abs_tol),
            max_evals=raw.get("quadrature.max_evals", QuadratureSettings.max_evals),
        )
    except ValueError as exc:
        raise ConfigValidationError(str(exc)) from None

    return RunConfig(raw, cavity, quadrature, sweep, equilibria, defaults)
