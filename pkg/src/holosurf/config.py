"""Experiment configuration: YAML in, validated dataclasses out.

Lengths are millimetres, angles degrees and frequencies hertz in the file;
conversion to SI happens in the ``build_*`` helpers. Every field has a
default, so an empty file describes the canonical -60..60 deg sweep.
"""

from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import List, Optional, get_args, get_origin, get_type_hints

import numpy as np
import yaml

from .array_model import ArrayGeometry, PlaneWaveSource, ReferenceWave
from .doa import ScanGrid
from .frontend import FrontendConfig


class ConfigError(ValueError):
    """Invalid configuration. ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class GeometrySection:
    rows: int = 4
    cols: int = 8
    pitch_h_mm: float = 60.0
    pitch_v_mm: float = 60.0


@dataclass
class ReferenceSection:
    amplitude: float = 1.0
    phase_deg: float = 0.0


@dataclass
class SweepSection:
    start_deg: float = -60.0
    stop_deg: float = 60.0
    step_deg: float = 10.0


@dataclass
class SourceSection:
    amplitude: float = 1.0
    phase_deg: float = 0.0
    theta_deg: float = 40.0
    sweep: SweepSection = field(default_factory=SweepSection)


@dataclass
class FrontendSection:
    phase_shifter_bits: Optional[int] = None
    divider_sigma: float = 0.0
    awgn_sigma: float = 0.0
    detector_noise_sigma: float = 0.0
    adc_bits: Optional[int] = 12
    adc_full_scale: Optional[float] = None


@dataclass
class ScanSection:
    start_deg: float = -60.0
    stop_deg: float = 60.0
    step_deg: float = 0.1


@dataclass
class NoiseSection:
    sigmas: List[float] = field(default_factory=lambda: [0.001, 0.01, 0.1])
    trials: int = 200


@dataclass
class ExperimentConfig:
    geometry: GeometrySection = field(default_factory=GeometrySection)
    carrier_hz: float = 2.6e9
    reference: ReferenceSection = field(default_factory=ReferenceSection)
    source: SourceSection = field(default_factory=SourceSection)
    frontend: FrontendSection = field(default_factory=FrontendSection)
    scan: ScanSection = field(default_factory=ScanSection)
    noise: NoiseSection = field(default_factory=NoiseSection)
    trials: int = 1
    snapshots: int = 1
    seed: int = 0
    output_dir: str = "out"
    gnuplot: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    def echo(self) -> dict:
        """Config as embedded in reports: everything except where files go."""
        d = self.to_dict()
        del d["output_dir"]
        return d

    def validate(self) -> "ExperimentConfig":
        """Check every constraint, raising :class:`ConfigError` on the first failure."""
        g = self.geometry
        _require(g.rows >= 1, "geometry.rows", "must be >= 1")
        _require(g.cols >= 1, "geometry.cols", "must be >= 1")
        _require(g.pitch_h_mm > 0, "geometry.pitch_h_mm", "must be positive")
        _require(g.pitch_v_mm > 0, "geometry.pitch_v_mm", "must be positive")
        _require(self.carrier_hz > 0, "carrier_hz", "must be positive")
        _require(self.reference.amplitude > 0, "reference.amplitude", "must be positive")
        _require(self.source.amplitude >= 0, "source.amplitude", "must be non-negative")
        _require(-90 <= self.source.theta_deg <= 90, "source.theta_deg", "must lie in [-90, 90]")
        sw = self.source.sweep
        _require(sw.step_deg > 0, "source.sweep.step_deg", "must be positive")
        _require(sw.start_deg <= sw.stop_deg, "source.sweep.stop_deg", "must be >= start_deg")
        _require(-90 <= sw.start_deg and sw.stop_deg <= 90, "source.sweep", "limits must lie in [-90, 90]")
        for name in ("divider_sigma", "awgn_sigma", "detector_noise_sigma"):
            _require(getattr(self.frontend, name) >= 0, f"frontend.{name}", "must be non-negative")
        for name in ("phase_shifter_bits", "adc_bits"):
            bits = getattr(self.frontend, name)
            _require(bits is None or bits >= 1, f"frontend.{name}", "must be >= 1 or null")
        fs = self.frontend.adc_full_scale
        _require(fs is None or fs > 0, "frontend.adc_full_scale", "must be positive or null")
        try:
            self.build_grid()
        except ValueError as exc:
            raise ConfigError("scan", str(exc)) from None
        _require(len(self.noise.sigmas) >= 1, "noise.sigmas", "needs at least one value")
        _require(all(s >= 0 for s in self.noise.sigmas), "noise.sigmas", "values must be non-negative")
        _require(self.noise.trials >= 1, "noise.trials", "must be >= 1")
        _require(self.trials >= 1, "trials", "must be >= 1")
        _require(self.snapshots >= 1, "snapshots", "must be >= 1")
        _require(self.seed >= 0, "seed", "must be non-negative")
        return self

    def build_geometry(self) -> ArrayGeometry:
        g = self.geometry
        return ArrayGeometry(g.rows, g.cols, g.pitch_h_mm * 1e-3, g.pitch_v_mm * 1e-3)

    def build_reference(self) -> ReferenceWave:
        return ReferenceWave(
            amplitude=self.reference.amplitude,
            carrier_hz=self.carrier_hz,
            global_phase=np.deg2rad(self.reference.phase_deg),
        )

    def build_source(self, theta_deg: Optional[float] = None) -> PlaneWaveSource:
        theta = self.source.theta_deg if theta_deg is None else theta_deg
        return PlaneWaveSource(
            amplitude=self.source.amplitude,
            azimuth_deg=float(theta),
            carrier_hz=self.carrier_hz,
            phase0=np.deg2rad(self.source.phase_deg),
        )

    def build_frontend(self, seed: Optional[int] = None) -> FrontendConfig:
        return FrontendConfig(**asdict(self.frontend), seed=self.seed if seed is None else seed)

    def build_grid(self) -> ScanGrid:
        s = self.scan
        return ScanGrid(s.start_deg, s.stop_deg, s.step_deg)

    def sweep_angles(self) -> np.ndarray:
        sw = self.source.sweep
        n = int(np.floor((sw.stop_deg - sw.start_deg) / sw.step_deg + 1e-9)) + 1
        return np.round(sw.start_deg + sw.step_deg * np.arange(n), 10)


def _require(ok, path, message):
    if not ok:
        raise ConfigError(path, message)


def _coerce(value, tp, path):
    origin = get_origin(tp)
    if origin is Optional or (origin is not None and type(None) in get_args(tp)):
        if value is None:
            return None
        (inner,) = [a for a in get_args(tp) if a is not type(None)]
        return _coerce(value, inner, path)
    if origin in (list, List):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(path, f"expected a list, got {type(value).__name__}")
        (inner,) = get_args(tp)
        return [_coerce(v, inner, f"{path}[{i}]") for i, v in enumerate(value)]
    if is_dataclass(tp):
        return _from_mapping(tp, value, path)
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(path, "expected true or false")
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return value
    if tp is float:
        # YAML 1.1 loads exponent forms like 2.6e9 as strings
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                raise ConfigError(path, f"expected a number, got {value!r}") from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    raise TypeError(f"unsupported config type {tp}")


def _from_mapping(cls, data, path=""):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(path or "<root>", "expected a mapping")
    hints = get_type_hints(cls)
    names = {f.name for f in fields(cls)}
    for key in data:
        if key not in names:
            raise ConfigError(f"{path}.{key}" if path else str(key), "unknown key")
    kwargs = {}
    for name in names:
        if name in data:
            kwargs[name] = _coerce(data[name], hints[name], f"{path}.{name}" if path else name)
    return cls(**kwargs)


def config_from_dict(data) -> ExperimentConfig:
    return _from_mapping(ExperimentConfig, data).validate()


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"not valid YAML: {exc}") from None
    return config_from_dict(data)


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())
