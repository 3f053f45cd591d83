"""Strict TOML run configuration for the ``jcryd`` command.

Frequencies are ordinary frequencies in MHz and times are in microseconds;
:func:`to_angular` converts to the rad/us used internally.
"""

from __future__ import annotations

import math
import re
import sys
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError, DomainError
from .symbasis import ModelParams, RydbergChannel

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TWO_PI = 2 * math.pi
CS_CLOCK_MHZ = 9192.631770


def to_angular(mhz: float) -> float:
    return TWO_PI * mhz


def to_mhz(angular: float) -> float:
    return angular / TWO_PI


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)


class ChannelSection(_Strict):
    rabi_scale: float = Field(ge=0)
    detuning_offset_mhz: Optional[float] = None
    detuning_offset_over_omega_r: Optional[float] = None

    @model_validator(mode="after")
    def _one_offset(self):
        given = [v is not None for v in (self.detuning_offset_mhz, self.detuning_offset_over_omega_r)]
        if sum(given) != 1:
            raise ValueError("give exactly one of detuning_offset_mhz, detuning_offset_over_omega_r")
        return self


class ModelSection(_Strict):
    n_atoms: int = Field(ge=1)
    omega_r_mhz: float = Field(ge=0)
    delta_r_mhz: float = 0.0
    omega_hf_mhz: float = Field(default=CS_CLOCK_MHZ, ge=0)
    extra_channels: list[ChannelSection] = []

    def params(self) -> ModelParams:
        om = to_angular(self.omega_r_mhz)
        channels = [RydbergChannel()]
        for ch in self.extra_channels:
            if ch.detuning_offset_mhz is not None:
                off = to_angular(ch.detuning_offset_mhz)
            else:
                off = ch.detuning_offset_over_omega_r * om
            channels.append(RydbergChannel(ch.rabi_scale, off))
        return ModelParams(self.n_atoms, om, to_angular(self.delta_r_mhz),
                           to_angular(self.omega_hf_mhz), tuple(channels))


class GridSection(_Strict):
    start: float
    stop: float
    num: int = Field(ge=2)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.stop > self.start:
            raise ValueError("stop must exceed start")
        return self


class DriftSection(_Strict):
    fraction: float = Field(default=0.05, ge=0)
    samples: int = Field(default=400, ge=2)
    distribution: Literal["uniform", "normal"] = "uniform"


class ScanSection(_Strict):
    delta_uw_start_mhz: float
    delta_uw_stop_mhz: float
    num_points: int = Field(ge=3)
    pulse_time_us: float = Field(gt=0)
    omega_uw_mhz: float = Field(ge=0)
    signal: Literal["total", "per_flip"] = "total"
    initial_kind: Literal["g", "e"] = "g"
    initial_n: int = Field(default=0, ge=0)
    initial_channel: int = Field(default=1, ge=1)
    threshold: float = Field(default=0.1, gt=0, le=1)


class SegmentSection(_Strict):
    duration_us: float = Field(ge=0)
    delta_r_mhz: tuple[float, float]
    omega_r_mhz: tuple[float, float]
    omega_uw_mhz: tuple[float, float] = (0.0, 0.0)


class RampSection(_Strict):
    segments: list[SegmentSection] = Field(min_length=1)
    delta_uw_mhz: float = 0.0
    step_us: Optional[float] = Field(default=None, gt=0)
    samples: int = Field(default=101, ge=2)
    initial: Literal["bare", "dressed"] = "dressed"
    initial_kind: Literal["g", "e"] = "g"
    initial_n: int = Field(default=1, ge=0)
    initial_channel: int = Field(default=1, ge=1)
    initial_branch: str = "plus"


class FitSection(_Strict):
    omega_r_mhz: list[float] = Field(min_length=2)
    constrain_origin: bool = True
    weighting: Literal["none", "relative"] = "relative"
    noise_fraction: float = Field(default=0.0, ge=0)
    trials: int = Field(default=0, ge=0)


class VerifySection(_Strict):
    blockade_mhz: Union[float, Literal["inf"]] = "inf"
    draws: int = Field(default=100, ge=1)
    tolerance: float = Field(default=1e-12, gt=0)
    fault: Literal["none", "linear_collective"] = "none"

    @field_validator("blockade_mhz")
    @classmethod
    def _positive(cls, v):
        if v != "inf" and v <= 0:
            raise ValueError("blockade_mhz must be > 0 or 'inf'")
        return v

    def blockade(self) -> float:
        return math.inf if self.blockade_mhz == "inf" else to_angular(self.blockade_mhz)


class OutputSection(_Strict):
    format: Literal["csv", "json"] = "csv"
    path: Optional[str] = None


class RunConfig(_Strict):
    model: ModelSection
    seed: int = Field(default=0, ge=0, lt=2**64)
    sweep: Optional[GridSection] = None
    drift: Optional[DriftSection] = None
    scan: Optional[ScanSection] = None
    ramp: Optional[RampSection] = None
    fit: Optional[FitSection] = None
    verify: Optional[VerifySection] = None
    output: OutputSection = OutputSection()


def _line_of(text: str, key: str) -> int | None:
    pattern = re.compile(rf"^\s*(\[\[?)?\s*([\w.]*\.)?{re.escape(key)}\s*(=|\]|\.)")
    for i, line in enumerate(text.splitlines(), start=1):
        if pattern.match(line):
            return i
    return None


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text; every failure is a :class:`ConfigError`."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ConfigError(f"TOML syntax error: {exc}", line, col) from None
    try:
        cfg = RunConfig.model_validate(raw)
        cfg.model.params()
    except ValidationError as exc:
        err = exc.errors()[0]
        loc = ".".join(str(p) for p in err["loc"])
        keys = [p for p in err["loc"] if isinstance(p, str)]
        line = _line_of(text, keys[-1]) if keys else None
        if err["type"] == "extra_forbidden":
            msg = f"unknown key '{loc}'"
        elif err["type"] == "missing":
            msg = f"missing required key '{loc}'"
            line = None
        else:
            msg = f"invalid value for '{loc}': {err['msg']}"
        raise ConfigError(msg, line) from None
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)
