"""JSON configuration documents and CSV/JSON result serialisation.

Configuration schema::

    {
      "physical": {"radius_m", "index", "dn_dlambda" (optional, 0),
                   "wavelength_m", "quality", "group_velocity_mps",
                   "coupling_a", "coupling_b", "j_rad_s"},
      "spin": {"omega1_rad_s", "omega2_rad_s",
               "chi1_rad_s" (optional, 0), "chi2_rad_s" (optional, 0)},
      "reduced": {"gamma_a", "gamma_b", "j", "delta_f1", "delta_f2",
                  "chi_1", "chi_2"}   (optional, any subset)
    }

Every value is a number; unknown keys anywhere are rejected.  Fields of
``reduced`` replace the corresponding value derived from ``physical`` and
``spin``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import IO, Any, Mapping, NamedTuple

import numpy as np

from .analysis import SweepResult
from .errors import ConfigError, ParameterError
from .params import (
    REDUCED_FIELDS,
    PhysicalParams,
    Preset,
    ReducedParams,
    SpinConfig,
    apply_overrides,
    to_reduced,
)

_PHYSICAL_KEYS = {
    "radius_m": "radius",
    "index": "index",
    "dn_dlambda": "dn_dlambda",
    "wavelength_m": "wavelength",
    "quality": "quality",
    "group_velocity_mps": "group_velocity",
    "coupling_a": "coupling_a",
    "coupling_b": "coupling_b",
    "j_rad_s": "inter_coupling",
}
_PHYSICAL_OPTIONAL = {"dn_dlambda"}

_SPIN_KEYS = {
    "omega1_rad_s": "omega_1",
    "omega2_rad_s": "omega_2",
    "chi1_rad_s": "chi_1",
    "chi2_rad_s": "chi_2",
}
_SPIN_OPTIONAL = {"chi1_rad_s", "chi2_rad_s"}

_TOP_KEYS = {"physical", "spin", "reduced"}


class Config(NamedTuple):
    physical: PhysicalParams
    spin: SpinConfig
    reduced: ReducedParams | None = None

    def resolve(self) -> ReducedParams:
        """Reduced parameters with any override applied."""
        return self.reduced if self.reduced is not None else to_reduced(self.physical, self.spin)


def _section(doc: Mapping[str, Any], name: str, keys: Mapping[str, str], optional: set[str]) -> dict:
    sec = doc.get(name)
    if not isinstance(sec, dict):
        raise ConfigError(f"'{name}' must be a JSON object")
    unknown = sorted(set(sec) - set(keys))
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {', '.join(unknown)}")
    missing = sorted(set(keys) - optional - set(sec))
    if missing:
        raise ConfigError(f"missing key(s) in '{name}': {', '.join(missing)}")
    out = {}
    for key, value in sec.items():
        out[keys[key]] = _number(f"{name}.{key}", value)
    return out


def _number(path: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path} must be finite, got {value!r}")
    return value


def parse_config(text: bytes | str) -> Config:
    """Parse and validate a configuration document."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"configuration is not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(doc) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")

    try:
        physical = PhysicalParams(**_section(doc, "physical", _PHYSICAL_KEYS, _PHYSICAL_OPTIONAL))
        spin = SpinConfig(**_section(doc, "spin", _SPIN_KEYS, _SPIN_OPTIONAL))
        reduced = None
        if "reduced" in doc:
            overrides = _section(
                doc, "reduced", {k: k for k in REDUCED_FIELDS}, set(REDUCED_FIELDS)
            )
            base = to_reduced(physical, spin)
            reduced = apply_overrides(base, overrides)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None
    return Config(physical, spin, reduced)


def preset_document(preset: Preset) -> dict:
    """A preset expressed in the configuration schema (parses back unchanged)."""
    p, s = preset.physical, preset.spin
    doc = {
        "physical": {key: getattr(p, attr) for key, attr in _PHYSICAL_KEYS.items()},
        "spin": {key: getattr(s, attr) for key, attr in _SPIN_KEYS.items()},
    }
    if preset.overrides:
        doc["reduced"] = dict(preset.overrides)
    return doc


def reduced_document(rp: ReducedParams) -> dict:
    return {name: getattr(rp, name) for name in REDUCED_FIELDS}


def fmt(x: float) -> str:
    """Full-precision, locale-independent decimal representation."""
    return "%.17g" % x


CSV_HEADER = ["delta"] + [f"T{i}{j}" for i in range(1, 5) for j in range(1, 5)]


def write_csv(result: SweepResult, sink: IO[str]) -> None:
    """One row per detuning; column ``Tij`` holds ``T_{i->j}``."""
    sink.write(",".join(CSV_HEADER) + "\n")
    # tables are [output, input]; transpose so the row runs over inputs first
    flat = result.tables.transpose(0, 2, 1).reshape(len(result), 16)
    for delta, row in zip(result.deltas, flat):
        sink.write(",".join([fmt(delta)] + [fmt(v) for v in row]) + "\n")


def read_csv(source: IO[str] | str) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`write_csv`: detunings and ``[output, input]`` tables."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader)
    if header != CSV_HEADER:
        raise ConfigError(f"unexpected CSV header: {header!r}")
    rows = np.array([[float(v) for v in row] for row in reader], dtype=float)
    deltas = rows[:, 0]
    tables = rows[:, 1:].reshape(-1, 4, 4).transpose(0, 2, 1)
    return deltas, tables


def sweep_document(result: SweepResult) -> dict:
    return {
        "params": reduced_document(result.params),
        "columns": CSV_HEADER,
        "rows": [
            [float(d)] + row.tolist()
            for d, row in zip(result.deltas, result.tables.transpose(0, 2, 1).reshape(len(result), 16))
        ],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"
