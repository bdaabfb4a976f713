"""JSON configuration for the command-line tools (schema version 1)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .channel import ChannelRealization, Geometry, SystemParams
from .experiments import DEFAULT_POSITION_RATIOS, DEFAULT_SNR_DB, SCHEMES, ScenarioConfig

__all__ = ["ConfigError", "CliConfig", "load_config", "parse_config"]

SCHEMA_VERSION = 1

Complex = Union[float, tuple[float, float]]


class ConfigError(ValueError):
    """Config file could not be parsed or validated; message lists every problem."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GeometryConfig(_Strict):
    d_sd: float = Field(20.0, gt=0)
    d_sr: float = Field(6.0, gt=0)
    d_rd: float = Field(16.0, gt=0)
    pathloss_exp: float = Field(2.0, gt=0)


class SystemConfig(_Strict):
    """Explicit system parameters; replaces the SNR-derived defaults."""

    sigma_r2: float = Field(1.0, gt=0)
    sigma_d2: float = Field(1.0, gt=0)
    p_s: float = Field(gt=0)
    p_r: float = Field(gt=0)
    d_s: list[float]


class ChannelConfig(_Strict):
    """Explicit channel gains; each entry is a real number or ``[re, im]``."""

    h0: Optional[list[Complex]] = None
    h1: list[Complex]
    h2: list[Complex]


class CliConfig(_Strict):
    schema_version: Literal[1]
    n_subcarriers: int = Field(128, ge=1)
    taps_per_link: Union[int, tuple[int, int, int]] = 11
    geometry: GeometryConfig = GeometryConfig()
    trials: int = Field(500, ge=1)
    master_seed: int = Field(2010, ge=0, lt=2**64)
    snr_db_list: list[float] = list(DEFAULT_SNR_DB)
    position_ratio_list: list[float] = list(DEFAULT_POSITION_RATIOS)
    snr_db_fixed: float = 14.0
    schemes: list[Literal[SCHEMES]] = list(SCHEMES)
    direct_path: bool = True
    output: Optional[str] = None
    system: Optional[SystemConfig] = None
    channel: Optional[ChannelConfig] = None
    oracle_limit: int = Field(9, ge=1)
    restarts: int = Field(8, ge=1)
    tolerance: Optional[float] = Field(None, gt=0)

    @field_validator("taps_per_link")
    @classmethod
    def _positive_taps(cls, v):
        taps = (v,) if isinstance(v, int) else v
        if min(taps) < 1:
            raise ValueError("channel order must be >= 1")
        return v

    def geometry_obj(self) -> Geometry:
        g = self.geometry
        return Geometry(g.d_sd, g.d_sr, g.d_rd, g.pathloss_exp, self.taps_per_link)

    def scenario(self) -> ScenarioConfig:
        return ScenarioConfig(
            geometry=self.geometry_obj(),
            n_subcarriers=self.n_subcarriers,
            trials=self.trials,
            master_seed=self.master_seed,
            snr_db_list=tuple(self.snr_db_list),
            position_ratio_list=tuple(self.position_ratio_list),
            snr_db_fixed=self.snr_db_fixed,
            schemes=tuple(self.schemes),
            direct_path=self.direct_path,
        )

    def system_params(self, direct: bool) -> SystemParams | None:
        if self.system is None:
            return None
        s = self.system
        return SystemParams(self.n_subcarriers, s.sigma_r2, s.sigma_d2, s.p_s, s.p_r,
                            s.d_s, direct)

    def channel_obj(self) -> ChannelRealization | None:
        if self.channel is None:
            return None
        conv = lambda xs: [complex(*x) if isinstance(x, tuple) else complex(x) for x in xs]
        h1, h2 = conv(self.channel.h1), conv(self.channel.h2)
        h0 = conv(self.channel.h0) if self.channel.h0 is not None else [0j] * len(h1)
        if not len(h0) == len(h1) == len(h2) == self.n_subcarriers:
            raise ConfigError(f"channel: h0, h1, h2 must all have length {self.n_subcarriers}")
        return ChannelRealization(h0, h1, h2)


def _format_validation(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"]) or "<root>"
        lines.append(f"  field '{loc}': {e['msg']}")
    return "\n".join(lines)


def parse_config(text: str, source: str = "<config>") -> CliConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    try:
        cfg = CliConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{source}: invalid config\n{_format_validation(e)}") from None
    try:
        # cross-field checks carried by the domain types
        cfg.scenario()
        cfg.system_params(cfg.direct_path)
        cfg.channel_obj()
    except ValueError as e:
        raise ConfigError(f"{source}: {e}") from None
    return cfg


def load_config(path) -> CliConfig:
    """Read and validate a config file. I/O errors propagate as ``OSError``."""
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), str(path))
