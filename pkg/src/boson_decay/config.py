"""Scenario configuration: flat key=value documents, flag overrides, validation.

The schema is flat: one ``key = value`` per line, ``#`` comments, no sections.
Unknown keys, missing required keys, and out-of-range values are hard errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import ConfigError

SCENARIOS = (
    "fock-decay",
    "coherent-decay",
    "excited-bath",
    "thermal",
    "wwa-validate",
    "oracle-compare",
)

_BATH_SCENARIOS = ("excited-bath", "thermal", "wwa-validate", "oracle-compare")

# key -> (type, default); ... means required (possibly per scenario).
_SCHEMA: dict[str, tuple[type, Any]] = {
    "scenario": (str, ...),
    "gamma": (float, ...),
    "omega_b": (float, ...),
    "t_max": (float, ...),
    "n_steps": (int, ...),
    "n_modes": (int, None),
    "half_bandwidth": (float, None),
    "band_center": (float, None),
    "beta": (float, None),
    "fock_n": (int, None),
    "alpha_re": (float, 1.0),
    "alpha_im": (float, 0.0),
    "samples": (int, None),
    "seed": (int, None),
    "excited_mode": (int, 0),
    "lambda_re": (float, 0.0),
    "lambda_im": (float, 0.0),
    "output": (str, "-"),
    "format": (str, "csv"),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated, fully-defaulted description of one run."""

    scenario: str
    gamma: float
    omega_b: float
    t_max: float
    n_steps: int
    n_modes: int | None
    half_bandwidth: float | None
    band_center: float | None
    beta: float | None
    fock_n: int | None
    alpha_re: float
    alpha_im: float
    samples: int | None
    seed: int | None
    excited_mode: int
    lambda_re: float
    lambda_im: float
    output: str
    format: str
    defaults_applied: tuple[str, ...] = ()

    @property
    def alpha(self) -> complex:
        return complex(self.alpha_re, self.alpha_im)

    @property
    def excited_label(self) -> complex:
        return complex(self.lambda_re, self.lambda_im)

    def as_dict(self) -> dict[str, Any]:
        """Effective key-value view (defaults included), for the report metadata."""
        return {key: getattr(self, key) for key in _SCHEMA}


def parse_document(text: str) -> dict[str, str]:
    """Read a flat key=value document into raw strings, rejecting unknown keys."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value' (got {stripped!r})")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}")
        if not value:
            raise ConfigError(f"key {key!r} has no value")
        raw[key] = value
    return raw


def _coerce(key: str, value: Any) -> Any:
    kind, _ = _SCHEMA[key]
    if value is None or isinstance(value, kind):
        return value
    try:
        if kind is int:
            as_float = float(value)
            if as_float != int(as_float):
                raise ValueError
            return int(as_float)
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"key {key!r} expects {kind.__name__} (got {value!r})") from None


def build_config(values: dict[str, Any], overrides: dict[str, Any] | None = None) -> ScenarioConfig:
    """Merge document values and flag overrides, apply defaults, validate."""
    merged: dict[str, Any] = {}
    for key, value in values.items():
        if key not in _SCHEMA:
            raise ConfigError(f"unknown key {key!r}")
        merged[key] = _coerce(key, value)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _SCHEMA:
            raise ConfigError(f"unknown key {key!r}")
        merged[key] = _coerce(key, value)

    defaults_applied = []
    for key, (_, default) in _SCHEMA.items():
        if key in merged:
            continue
        if default is ...:
            raise ConfigError(f"missing required key {key!r}")
        merged[key] = default
        defaults_applied.append(key)

    _validate(merged, defaults_applied)
    return ScenarioConfig(**merged, defaults_applied=tuple(sorted(defaults_applied)))


def parse_config(text: str, overrides: dict[str, Any] | None = None) -> ScenarioConfig:
    """Parse and validate a flat key=value configuration document."""
    return build_config(parse_document(text), overrides)


def _require(merged: dict[str, Any], key: str, scenario: str) -> None:
    if merged.get(key) is None:
        raise ConfigError(f"{scenario} requires {key}")


def _validate(merged: dict[str, Any], defaults_applied: list[str]) -> None:
    scenario = merged["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r} (choose from {', '.join(SCENARIOS)})")
    if merged["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json' (got {merged['format']!r})")
    if not merged["gamma"] > 0:
        raise ConfigError(f"gamma must be positive (got {merged['gamma']})")
    if not merged["omega_b"] > 0:
        raise ConfigError(f"omega_b must be positive (got {merged['omega_b']})")
    if not merged["t_max"] > 0:
        raise ConfigError(f"t_max must be positive (got {merged['t_max']})")
    if merged["n_steps"] < 2:
        raise ConfigError(f"n_steps must be at least 2 (got {merged['n_steps']})")

    if scenario in ("fock-decay", "oracle-compare"):
        _require(merged, "fock_n", scenario)
        if merged["fock_n"] < 0:
            raise ConfigError(f"fock_n must be nonnegative (got {merged['fock_n']})")

    if scenario in _BATH_SCENARIOS:
        _require(merged, "n_modes", scenario)
        _require(merged, "half_bandwidth", scenario)
        if merged["n_modes"] < 1:
            raise ConfigError(f"n_modes must be at least 1 (got {merged['n_modes']})")
        if not merged["half_bandwidth"] > 0:
            raise ConfigError(
                f"half_bandwidth must be positive (got {merged['half_bandwidth']})"
            )
        if merged["band_center"] is None:
            merged["band_center"] = merged["omega_b"]
            defaults_applied.append("band_center")

    if scenario == "oracle-compare" and merged["n_modes"] > 4:
        raise ConfigError(
            f"oracle-compare runs the dense oracle and allows at most 4 modes "
            f"(got {merged['n_modes']})"
        )

    if scenario == "thermal":
        _require(merged, "beta", scenario)
        _require(merged, "samples", scenario)
    if merged["beta"] is not None and not merged["beta"] > 0:
        raise ConfigError(f"beta must be positive (got {merged['beta']})")
    if merged["samples"] is not None:
        if merged["samples"] < 1:
            raise ConfigError(f"samples must be at least 1 (got {merged['samples']})")
        if merged["seed"] is None:
            raise ConfigError("monte carlo sampling requires seed")

    if scenario == "excited-bath" and merged["n_modes"] is not None:
        if not 0 <= merged["excited_mode"] < merged["n_modes"]:
            raise ConfigError(
                f"excited_mode must index a bath mode in [0, {merged['n_modes'] - 1}] "
                f"(got {merged['excited_mode']})"
            )
