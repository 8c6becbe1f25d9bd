"""Configuration management for dynlab"""

import hashlib
import json
import tomllib
import yaml
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import InvalidConfigError
from ..lab.thresholds import DEFAULT_THRESHOLDS, ThresholdProfile


class ExperimentId(str, Enum):
    """Experiment identifiers"""
    E1_DENSITY_QUADRATIC = "E1_density_quadratic"
    E1B_DENSITY_CUBIC = "E1b_density_cubic"
    E2_AREA_PERSISTENCE = "E2_area_persistence"
    E3_DEEP_POINT = "E3_deep_point"
    E4_QUADRATIC_LIKE = "E4_quadratic_like"
    E5_RENORM_SECTOR = "E5_renorm_sector"
    E6_DIMENSION = "E6_dimension"
    E7_AREA_CHAIN = "E7_area_chain"
    CF = "cf"
    SIEGEL = "siegel"
    AREA = "area"


class SystemConfig(BaseModel):
    """System configuration"""
    name: str = "dynlab"
    version: str = "1.0.0"
    log_level: str = "INFO"
    log_file: Optional[str] = "logs/dynlab.log"
    threads: Optional[int] = None
    progress: bool = True


class RotationSpec(BaseModel):
    """Rotation number as a digit stream: prefix (a0 first) plus repeating block"""
    prefix: List[int] = Field(default_factory=lambda: [0])
    period: List[int] = Field(default_factory=lambda: [1])

    @field_validator("prefix")
    @classmethod
    def _check_prefix(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("prefix must contain a0")
        if any(a < 1 for a in v[1:]):
            raise ValueError("digits after a0 must be >= 1")
        return v

    @field_validator("period")
    @classmethod
    def _check_period(cls, v: List[int]) -> List[int]:
        if any(a < 1 for a in v):
            raise ValueError("period digits must be >= 1")
        return v

    def to_rotation(self, precision_bits: int = 512):
        from ..cfrac.rotation import RotationNumber
        return RotationNumber(tuple(self.prefix), tuple(self.period), precision_bits)


def golden() -> RotationSpec:
    return RotationSpec(prefix=[0], period=[1])


def constant_type(n: int) -> RotationSpec:
    return RotationSpec(prefix=[0], period=[n])


class MapSpec(BaseModel):
    """Polynomial map descriptor"""
    family: Literal["quad_bc", "cubic_siegel", "quad_is", "perturbed_quad", "square"] = "cubic_siegel"
    theta: RotationSpec = Field(default_factory=golden)
    epsilon: float = 0.0
    degree: int = 3

    @model_validator(mode="after")
    def _check_perturbation(self) -> "MapSpec":
        if self.family == "perturbed_quad" and self.degree < 3:
            raise ValueError("perturbation degree must be >= 3")
        return self


class GridSpecModel(BaseModel):
    """Grid parameters"""
    bbox: List[float] = Field(default_factory=lambda: [-2.5, -2.0, 1.5, 2.0])
    resolution: int = 1024
    horizon: int = 1000
    r_escape: float = 10.0

    @field_validator("bbox")
    @classmethod
    def _check_bbox(cls, v: List[float]) -> List[float]:
        if len(v) != 4 or not (v[0] < v[2] and v[1] < v[3]):
            raise ValueError("bbox must be [xmin, ymin, xmax, ymax] with xmin<xmax, ymin<ymax")
        return v

    @field_validator("resolution", "horizon")
    @classmethod
    def _check_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v


class CFracConfig(BaseModel):
    """Continued fraction configuration"""
    precision_bits: int = 512
    # default N for experiments that leave high_type_n unset
    high_type_n: int = 3


class SiegelConfig(BaseModel):
    """Linearization defaults; order fills experiment sections that leave it unset"""
    order: int = 300
    polyline_points: int = 2048


class FatouConfig(BaseModel):
    """Fatou chart defaults"""
    alpha_star: float = 0.1
    validation_sample_size: int = 200


class ExperimentConfig(BaseModel):
    """Base experiment configuration"""
    experiment_id: ExperimentId
    seed: int = 0
    output_dir: Optional[str] = None
    max_workers: int = 1


class DensityConfig(ExperimentConfig):
    """Density persistence (quadratic E1 or cubic E1b)"""
    experiment_id: ExperimentId = ExperimentId.E1_DENSITY_QUADRATIC
    family: Literal["quad_bc", "cubic_siegel"] = "quad_bc"
    alpha: RotationSpec = Field(default_factory=golden)
    theta: RotationSpec = Field(default_factory=golden)
    n_values: List[int] = Field(default_factory=lambda: [2, 3, 4, 5, 6])
    an_rule: Literal["linear", "power", "exp_square", "constant"] = "linear"
    an_scale: int = 1
    high_type_n: Optional[int] = None
    r: float = 0.8
    order: Optional[int] = None
    polyline_points: int = 2048
    resolution: int = 1024
    horizon: int = 10000
    horizon_doubling: bool = True
    include_unperturbed: bool = True
    windows: List[List[float]] = Field(
        default_factory=lambda: [[0.25, 0.5, 0.25, 0.5], [0.5, 0.75, 0.4, 0.6]]
    )

    @field_validator("r")
    @classmethod
    def _check_r(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("r must lie in (0, 1)")
        return v

    @field_validator("windows")
    @classmethod
    def _check_windows(cls, v: List[List[float]]) -> List[List[float]]:
        for w in v:
            if len(w) != 4 or not (0 <= w[0] < w[1] <= 1 and 0 <= w[2] < w[3] <= 1):
                raise ValueError("window must be [fx0, fx1, fy0, fy1] fractions in [0, 1]")
        return v


class CubicDensityConfig(DensityConfig):
    """Density persistence in the cubic family"""
    experiment_id: ExperimentId = ExperimentId.E1B_DENSITY_CUBIC
    family: Literal["quad_bc", "cubic_siegel"] = "cubic_siegel"
    alpha: RotationSpec = Field(default_factory=lambda: constant_type(3))
    theta: RotationSpec = Field(default_factory=lambda: constant_type(3))
    n_values: List[int] = Field(default_factory=lambda: [1, 2, 3, 4])


class AreaPersistenceConfig(ExperimentConfig):
    """Filled Julia set area persistence"""
    experiment_id: ExperimentId = ExperimentId.E2_AREA_PERSISTENCE
    alpha: RotationSpec = Field(default_factory=lambda: constant_type(3))
    high_type_n: Optional[int] = None
    n_values: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    an_rule: Literal["linear", "power", "exp_square", "constant"] = "exp_square"
    an_scale: int = 1
    grid: Optional[GridSpecModel] = None
    refinement_resolution: int = 512
    # ratio threshold is 1 - epsilon when set, area_ratio_min otherwise
    epsilon: Optional[float] = None
    n0: int = 3


class DeepPointConfig(ExperimentConfig):
    """Deep points of K(delta)"""
    experiment_id: ExperimentId = ExperimentId.E3_DEEP_POINT
    theta: RotationSpec = Field(default_factory=golden)
    order: int = 1200
    polyline_points: int = 2048
    proxy_r: float = 0.98
    extrapolation_r: List[float] = Field(default_factory=lambda: [0.96, 0.98])
    delta: float = 0.05
    n_points: int = 5
    r0: float = 0.08
    n_radii: int = 4
    resolution: int = 1536
    horizon: int = 10000
    preimage_r: float = 0.9
    preimage_resolution: int = 512

    @field_validator("n_points")
    @classmethod
    def _check_points(cls, v: int) -> int:
        if v < 5:
            raise ValueError("at least 5 boundary points are required")
        return v


class QuadraticLikeConfig(ExperimentConfig):
    """Quadratic-like restriction of the perturbed quadratic"""
    experiment_id: ExperimentId = ExperimentId.E4_QUADRATIC_LIKE
    theta: RotationSpec = Field(default_factory=golden)
    degree: int = 3
    epsilon: float = 1e-3
    samples: int = 200
    r_start: float = 3.0
    control_epsilon: Optional[float] = 0.5

    @field_validator("degree")
    @classmethod
    def _check_degree(cls, v: int) -> int:
        if v < 3:
            raise ValueError("degree must be >= 3")
        return v


class RenormSectorConfig(ExperimentConfig):
    """Fatou chart, sectors and renormalization return"""
    experiment_id: ExperimentId = ExperimentId.E5_RENORM_SECTOR
    high_type_n: int = 12
    alpha_pair: List[float] = Field(default_factory=lambda: [0.04, 0.05])
    validation_sample_size: Optional[int] = None
    multiplier_radius: float = 1e-3
    multiplier_samples: int = 8
    k1_max: int = 400
    siegel_order: Optional[int] = None
    siegel_r: float = 0.8
    siegel_samples: int = 100
    return_horizon: int = 10
    sector_points: int = 64


class DimensionConfig(ExperimentConfig):
    """Box dimension of the Julia set"""
    experiment_id: ExperimentId = ExperimentId.E6_DIMENSION
    theta: RotationSpec = Field(default_factory=golden)
    bbox: List[float] = Field(default_factory=lambda: [-2.5, -2.0, 1.5, 2.0])
    resolutions: List[int] = Field(default_factory=lambda: [512, 1024, 2048])
    scales: List[int] = Field(default_factory=lambda: [1, 2, 4, 8, 16])
    horizon: int = 1000
    r_escape: float = 10.0
    segment_resolution: int = 1024


class AreaChainConfig(ExperimentConfig):
    """Area along the theta_l chain and Brjuno divergence"""
    experiment_id: ExperimentId = ExperimentId.E7_AREA_CHAIN
    theta0: RotationSpec = Field(default_factory=lambda: constant_type(3))
    high_type_n: Optional[int] = None
    m_sequence: List[int] = Field(default_factory=lambda: [2, 4, 6])
    a_sequence: List[int] = Field(default_factory=lambda: [40, 400, 4000])
    epsilons: List[float] = Field(default_factory=lambda: [0.1, 0.05, 0.025])
    grid: Optional[GridSpecModel] = None
    brjuno_bound: float = 5.0

    @model_validator(mode="after")
    def _check_lengths(self) -> "AreaChainConfig":
        if not (len(self.m_sequence) == len(self.a_sequence) == len(self.epsilons)):
            raise ValueError("m_sequence, a_sequence and epsilons must have equal length")
        return self


class CFToolConfig(ExperimentConfig):
    """Continued fraction expansion tool"""
    experiment_id: ExperimentId = ExperimentId.CF
    value: Optional[str] = None
    rotation: RotationSpec = Field(default_factory=golden)
    n_terms: int = 20


class SiegelToolConfig(ExperimentConfig):
    """Linearization tool"""
    experiment_id: ExperimentId = ExperimentId.SIEGEL
    map: MapSpec = Field(default_factory=MapSpec)
    order: Optional[int] = None
    r_values: List[float] = Field(default_factory=lambda: [0.3, 0.6, 0.9])
    polyline_points: int = 1024


class AreaToolConfig(ExperimentConfig):
    """Filled Julia set area tool"""
    experiment_id: ExperimentId = ExperimentId.AREA
    map: MapSpec = Field(default_factory=MapSpec)
    grid: Optional[GridSpecModel] = None


class LabConfig(BaseSettings):
    """Main configuration class"""
    model_config = SettingsConfigDict(env_prefix="DYNLAB_", env_nested_delimiter="__")

    system: SystemConfig = Field(default_factory=SystemConfig)
    output_dir: str = "./runs"
    threshold_profile: str = "default"
    # overrides on top of the named profile; holds the merged table after validation
    thresholds: Dict[str, float] = Field(default_factory=dict)
    cfrac: CFracConfig = Field(default_factory=CFracConfig)
    grid: GridSpecModel = Field(default_factory=GridSpecModel)
    siegel: SiegelConfig = Field(default_factory=SiegelConfig)
    fatou: FatouConfig = Field(default_factory=FatouConfig)
    e1: DensityConfig = Field(default_factory=DensityConfig)
    e1b: CubicDensityConfig = Field(default_factory=CubicDensityConfig)
    e2: AreaPersistenceConfig = Field(default_factory=AreaPersistenceConfig)
    e3: DeepPointConfig = Field(default_factory=DeepPointConfig)
    e4: QuadraticLikeConfig = Field(default_factory=QuadraticLikeConfig)
    e5: RenormSectorConfig = Field(default_factory=RenormSectorConfig)
    e6: DimensionConfig = Field(default_factory=DimensionConfig)
    e7: AreaChainConfig = Field(default_factory=AreaChainConfig)
    cf: CFToolConfig = Field(default_factory=CFToolConfig)
    siegel_tool: SiegelToolConfig = Field(default_factory=SiegelToolConfig)
    area: AreaToolConfig = Field(default_factory=AreaToolConfig)

    @model_validator(mode="after")
    def _merge_thresholds(self) -> "LabConfig":
        merged = ThresholdProfile.get_profile(self.threshold_profile)
        unknown = set(self.thresholds) - set(DEFAULT_THRESHOLDS)
        if unknown:
            raise ValueError(f"unknown threshold keys: {sorted(unknown)}")
        merged.update(self.thresholds)
        self.thresholds = merged
        return self

    @model_validator(mode="after")
    def _fill_shared_defaults(self) -> "LabConfig":
        # experiment fields left unset take the shared cfrac, siegel, fatou and grid values
        for section in (self.e1, self.e1b, self.e2, self.e7):
            if section.high_type_n is None:
                section.high_type_n = self.cfrac.high_type_n
        for section in (self.e1, self.e1b, self.siegel_tool):
            if section.order is None:
                section.order = self.siegel.order
        if self.e5.siegel_order is None:
            self.e5.siegel_order = self.siegel.order
        if self.e5.validation_sample_size is None:
            self.e5.validation_sample_size = self.fatou.validation_sample_size
        for section in (self.e2, self.e7, self.area):
            if section.grid is None:
                section.grid = self.grid.model_copy(deep=True)
        return self

    @classmethod
    def from_file(cls, config_path: str | Path) -> "LabConfig":
        """Load configuration from a YAML, JSON or TOML file"""
        config_path = Path(config_path)
        loaders = {
            ".yaml": cls.from_yaml,
            ".yml": cls.from_yaml,
            ".json": cls.from_json,
            ".toml": cls.from_toml,
        }
        loader = loaders.get(config_path.suffix.lower())
        if loader is None:
            raise InvalidConfigError(
                "Unsupported configuration format; use .yaml, .json or .toml",
                path=str(config_path),
            )
        return loader(config_path)

    @classmethod
    def from_yaml(cls, config_path: str | Path) -> "LabConfig":
        """Load configuration from YAML file"""
        with open(_existing(config_path), "r", encoding="utf-8") as f:
            return cls._build(yaml.safe_load(f) or {}, config_path)

    @classmethod
    def from_json(cls, config_path: str | Path) -> "LabConfig":
        """Load configuration from JSON file"""
        with open(_existing(config_path), "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise InvalidConfigError(f"Invalid JSON: {e}", path=str(config_path))
        return cls._build(data, config_path)

    @classmethod
    def from_toml(cls, config_path: str | Path) -> "LabConfig":
        """Load configuration from TOML file"""
        with open(_existing(config_path), "rb") as f:
            try:
                data = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise InvalidConfigError(f"Invalid TOML: {e}", path=str(config_path))
        return cls._build(data, config_path)

    @classmethod
    def _build(cls, data: Dict[str, Any], config_path: str | Path) -> "LabConfig":
        if not isinstance(data, dict):
            raise InvalidConfigError("Configuration root must be a mapping", path=str(config_path))
        try:
            return cls(**data)
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(p) for p in first["loc"])
            raise InvalidConfigError(
                f"Invalid configuration: {first['msg']}", path=loc, value=first.get("input")
            )

    def experiment(self, key: str) -> ExperimentConfig:
        """Experiment section by CLI key (e1, e1b, ..., cf, siegel, area)"""
        attr = "siegel_tool" if key == "siegel" else key
        section = getattr(self, attr, None)
        if not isinstance(section, ExperimentConfig):
            raise InvalidConfigError(f"Unknown experiment: {key}")
        return section

    def config_hash(self, key: str) -> str:
        """sha256 over the result-affecting fields of one experiment"""
        section = self.experiment(key)
        payload = {
            "experiment": section.model_dump(mode="json", exclude={"output_dir", "max_workers"}),
            "thresholds": self.thresholds,
            "cfrac": self.cfrac.model_dump(mode="json"),
            "siegel": self.siegel.model_dump(mode="json"),
            "fatou": self.fatou.model_dump(mode="json"),
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return self.model_dump(mode="json")

    def save_yaml(self, output_path: str | Path) -> None:
        """Save configuration to YAML file"""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, "w", encoding="utf-8") as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)


def _existing(config_path: str | Path) -> Path:
    path = Path(config_path)
    if not path.exists():
        raise InvalidConfigError("Configuration file not found", path=str(path))
    return path
