from dataclasses import dataclass, field, replace
from typing import Any, Dict, Literal, Optional, Tuple

import numpy as np

from src.models.channel_spec import ChannelSpec
from src.models.cloud_config import CloudConfig
from src.models.errors import ConfigError
from src.models.half_int import HalfInt
from src.models.level_scheme import LevelScheme
from src.models.scheme_factory import SchemeFactory

GeometryMeasure = Literal["isotropic", "cbs"]


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ConfigError("a grid needs at least 2 steps")
        if not self.start < self.stop:
            raise ConfigError("grid start must be below grid stop")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class BeatConfig:
    """Settings of the `beatspec` command. v_rms wins over temperature_uK when both are set."""

    v_rms: Optional[float] = None
    temperature_uK: Optional[float] = None
    anisotropy: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    grid: GridSpec = field(default_factory=lambda: GridSpec(-0.3, 0.3, 601))
    n_geometries: int = 20000
    geometry: GeometryMeasure = "isotropic"
    geometry_delta: float = -10.0

    def __post_init__(self):
        if self.n_geometries < 1:
            raise ConfigError("n_geometries must be at least 1")
        if self.geometry not in ("isotropic", "cbs"):
            raise ConfigError(f"unknown geometry measure '{self.geometry}'")


@dataclass(frozen=True)
class RunConfig:
    scheme_name: str
    scheme_options: Tuple[Tuple[str, Any], ...]
    cloud: CloudConfig
    channel: ChannelSpec
    delta_grid: GridSpec
    n_samples: int
    n_max_order: int
    seed: int
    csv_path: str
    plot_path: Optional[str] = None
    beat: BeatConfig = field(default_factory=BeatConfig)
    quadrature_deltas: Tuple[float, ...] = (0.0, -10.0, -27.0)
    quadrature_tolerance: float = 0.02

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be at least 1")
        if self.n_max_order < 1:
            raise ConfigError("n_max_order must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if not self.csv_path:
            raise ConfigError("outputs.csv_path is required")

    def scheme(self) -> LevelScheme:
        return SchemeFactory.create_scheme(self.scheme_name, dict(self.scheme_options))

    def deltas(self) -> np.ndarray:
        return self.delta_grid.values()

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=int(seed))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("the run configuration must be a JSON object")
        if "seed" not in data:
            raise ConfigError("seed is required")

        scheme = _section(data, "scheme")
        outputs = _section(data, "outputs")
        quadrature = _section(data, "quadrature")
        try:
            return cls(
                scheme_name=str(scheme.get("name", "rb85")),
                scheme_options=tuple(
                    sorted((key, _frozen(value)) for key, value in scheme.items() if key != "name")
                ),
                cloud=_cloud_from_dict(_section(data, "cloud")),
                channel=_channel_from_dict(_section(data, "channel")),
                delta_grid=_grid_from_dict(_require(data, "delta_grid")),
                n_samples=int(_require(data, "n_samples")),
                n_max_order=int(data.get("n_max_order", 2)),
                seed=int(data["seed"]),
                csv_path=str(outputs.get("csv_path", "")),
                plot_path=outputs.get("plot_path"),
                beat=_beat_from_dict(_section(data, "beatspec")),
                quadrature_deltas=tuple(
                    float(delta) for delta in quadrature.get("deltas", (0.0, -10.0, -27.0))
                ),
                quadrature_tolerance=float(quadrature.get("tolerance", 0.02)),
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"invalid value in run configuration: {e}") from e


def _frozen(value: Any) -> Any:
    """JSON lists as nested tuples, so the configuration stays immutable."""
    if isinstance(value, list):
        return tuple(_frozen(item) for item in value)
    return value


def _section(data: Dict[str, Any], key: str) -> Dict[str, Any]:
    section = data.get(key) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"'{key}' must be an object")
    return section


def _require(data: Dict[str, Any], key: str) -> Any:
    if key not in data:
        raise ConfigError(f"{key} is required")
    return data[key]


def _grid_from_dict(grid: Dict[str, Any]) -> GridSpec:
    if not isinstance(grid, dict):
        raise ConfigError("a grid must be an object with start, stop and steps")
    return GridSpec(float(_require(grid, "start")), float(_require(grid, "stop")), int(_require(grid, "steps")))


def _cloud_from_dict(cloud: Dict[str, Any]) -> CloudConfig:
    options = {
        "target_b": float(cloud.get("target_b", 1.0)),
        "temperature": float(cloud.get("temperature", 0.0)),
        "attenuation": cloud.get("attenuation", "anisotropic"),
    }
    shape = cloud.get("shape")
    if shape == "sphere":
        return CloudConfig.sphere(float(cloud.get("sigma", 10.0)), **options)
    elif shape == "cigar":
        return CloudConfig.cigar(
            float(_require(cloud, "sigma_radial")), float(_require(cloud, "sigma_axial")), **options
        )
    elif shape is None:
        return CloudConfig(
            float(cloud.get("sigma_x", 10.0)),
            float(cloud.get("sigma_y", 10.0)),
            float(cloud.get("sigma_z", 10.0)),
            **options,
        )
    else:
        raise ConfigError(f"unknown cloud shape '{shape}'")


def _channel_from_dict(channel: Dict[str, Any]) -> ChannelSpec:
    final_m = channel.get("final_m")
    return ChannelSpec(
        pol_in=int(channel.get("pol_in", 1)),
        pol_out=int(channel.get("pol_out", 1)),
        final_m=None if final_m is None else HalfInt.of(final_m),
        diagram_set=channel.get("diagram_set", "SigmaOnly"),
    )


def _beat_from_dict(beat: Dict[str, Any]) -> BeatConfig:
    defaults = BeatConfig()
    grid = beat.get("grid")
    v_rms = beat.get("v_rms")
    temperature = beat.get("temperature_uK")
    return BeatConfig(
        v_rms=None if v_rms is None else float(v_rms),
        temperature_uK=None if temperature is None else float(temperature),
        anisotropy=tuple(float(a) for a in beat.get("anisotropy", defaults.anisotropy)),
        grid=defaults.grid if grid is None else _grid_from_dict(grid),
        n_geometries=int(beat.get("n_geometries", defaults.n_geometries)),
        geometry=beat.get("geometry", defaults.geometry),
        geometry_delta=float(beat.get("geometry_delta", defaults.geometry_delta)),
    )
