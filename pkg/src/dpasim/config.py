"""Versioned scenario configuration: schema, loading and conversion to domain objects."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .blockage import BlockageModel, GripScenario
from .errors import ConfigError
from .fabric import FabricConfig
from .layout import HousingSpec, ModulePlacement, Rect, UeLayout, preset
from .link import (DEFAULT_BS_RADIO, DEFAULT_ROUTER_RADIO, DEFAULT_UE_RADIO,
                   DEFAULT_UE_SUB6_RX_GAIN, NodeRole, NodeSpec, RadioParams)
from .modesel import AppRequirement, BandObservation, LatencyTable
from .spectrum import Band, BandCatalog, Regime, Service, Tier, default_catalog

SCHEMA_VERSION = 1


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RadioModel(_Strict):
    tx_power_dbm: float = 0.0
    tx_gain_dbi: float = 0.0
    rx_gain_dbi: float = 0.0
    noise_figure_db: float = Field(7.0, ge=0)


class NodeModel(_Strict):
    id: str
    role: Literal["BaseStation", "WiFiRouter", "UE"]
    position: tuple[float, float] = (0.0, 0.0)
    radio: RadioModel | None = None


class HousingModel(_Strict):
    width: float = Field(75.0, gt=0)
    height: float = Field(150.0, gt=0)


class ModuleModel(_Strict):
    id: str
    x: float
    y: float
    w: float = Field(gt=0)
    h: float = Field(gt=0)
    bands: list[str] | None = None


class ExplicitLayoutModel(_Strict):
    housing: HousingModel = HousingModel()
    modules: list[ModuleModel] = Field(min_length=1)


class PresetLayoutModel(_Strict):
    preset: Literal["conventional_center", "top_bottom", "dpa_8"]
    housing: HousingModel = HousingModel()


class FabricModel(_Strict):
    n_bf: int | None = Field(None, ge=0)
    n_wigig_if: int = Field(0, ge=0)
    n_sub6_fe: int = Field(0, ge=0)


class BandModel(_Strict):
    id: str
    service: Literal["cellular", "wifi"]
    regime: Literal["licensed", "unlicensed"]
    center_ghz: float = Field(gt=0)
    bandwidth_mhz: float = Field(gt=0)
    tier: Literal["sub6", "mmwave"] | None = None


class BandTruthModel(_Strict):
    available: bool = True
    occupancy: float = Field(0.0, ge=0, le=1)


class RequirementModel(_Strict):
    min_throughput_bps: float = Field(0.0, ge=0)
    max_latency_ms: float = Field(100.0, gt=0)
    service_class: Literal["eMBB", "uRLLC", "mMTC"] = "eMBB"


class LatencyModel(_Strict):
    cellular_mmwave_ms: float = Field(5.0, gt=0)
    cellular_sub6_ms: float = Field(10.0, gt=0)
    wifi_ms: float = Field(15.0, gt=0)


class KnobsModel(_Strict):
    full_blockage_db: float = Field(35.0, ge=30, le=40)
    saturation_fraction: float = Field(0.5, gt=0, le=1)
    center_area_fraction: float = Field(0.40, ge=0, le=1)
    landscape_strip_fraction: float = Field(0.30, ge=0, le=0.5)
    bottom_height_fraction: float = Field(0.35, ge=0, le=1)
    access_threshold_db: float = 0.0
    min_link_snr_db: float = 0.0
    adjacency_threshold_mm: float | None = Field(None, gt=0)
    ue_sub6_rx_gain_dbi: float = DEFAULT_UE_SUB6_RX_GAIN
    latency: LatencyModel = LatencyModel()


class ScenarioConfig(_Strict):
    schema_version: Literal[1]
    name: str = "scenario"
    seed: int = 0
    layout: Union[Literal["conventional_center", "top_bottom", "dpa_8"],
                  PresetLayoutModel, ExplicitLayoutModel] = "dpa_8"
    fabric: FabricModel = FabricModel()
    nodes: list[NodeModel]
    grip: Literal["FreeSpace", "OneHandCenter", "TwoHandLandscape", "OneHandPortraitBottom"] = "FreeSpace"
    catalog: Union[Literal["default"], list[BandModel]] = "default"
    bands: dict[str, BandTruthModel] = Field(default_factory=dict)
    requirement: RequirementModel = RequirementModel()
    knobs: KnobsModel = KnobsModel()

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


@dataclass(frozen=True)
class Scenario:
    """A config resolved into domain objects, with cross-field checks applied."""

    config: ScenarioConfig
    catalog: BandCatalog
    layout: UeLayout
    fabric: FabricConfig
    nodes: tuple[NodeSpec, ...]
    grip: GripScenario
    blockage: BlockageModel
    ground_truth: dict[str, BandObservation]
    requirement: AppRequirement
    latency: LatencyTable

    @property
    def knobs(self) -> KnobsModel:
        return self.config.knobs


_DEFAULT_RADIOS = {
    "BaseStation": DEFAULT_BS_RADIO,
    "WiFiRouter": DEFAULT_ROUTER_RADIO,
    "UE": DEFAULT_UE_RADIO,
}


def _format_validation(err: ValidationError) -> ConfigError:
    first = err.errors()[0]
    path = ".".join(str(p) for p in first["loc"])
    extra = len(err.errors()) - 1
    msg = first["msg"] + (f" (+{extra} more)" if extra else "")
    return ConfigError(msg, path or None)


def parse_config(data: Any) -> ScenarioConfig:
    if isinstance(data, ScenarioConfig):
        return data
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping")
    if "schema_version" not in data:
        raise ConfigError("missing schema_version", "schema_version")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {data['schema_version']!r}", "schema_version")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as err:
        raise _format_validation(err) from None


def load_document(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err.strerror}") from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigError(f"{path} is not valid YAML/JSON: {err}") from None


def load_config(path: str | Path) -> ScenarioConfig:
    return parse_config(load_document(path))


def dump_config(config: ScenarioConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False)


def _catalog(config: ScenarioConfig) -> BandCatalog:
    if config.catalog == "default":
        return default_catalog()
    bands = []
    for i, b in enumerate(config.catalog):
        try:
            bands.append(Band(b.id, Service(b.service), Regime(b.regime), b.center_ghz,
                              b.bandwidth_mhz, Tier(b.tier) if b.tier else None))
        except ConfigError as err:
            raise ConfigError(err.message, f"catalog.{i}") from None
    try:
        return BandCatalog(bands)
    except ConfigError as err:
        raise ConfigError(err.message, "catalog") from None


def _layout(config: ScenarioConfig, catalog: BandCatalog) -> UeLayout:
    spec = config.layout
    try:
        if isinstance(spec, str):
            return preset(spec, catalog=catalog)
        if isinstance(spec, PresetLayoutModel):
            return preset(spec.preset, HousingSpec(spec.housing.width, spec.housing.height), catalog)
        mmwave = frozenset(b.id for b in catalog if b.tier is Tier.MMWAVE)
        for i, m in enumerate(spec.modules):
            for band_id in m.bands or ():
                if band_id not in catalog:
                    raise ConfigError(f"unknown band {band_id!r}", f"layout.modules.{i}.bands")
        placements = tuple(
            ModulePlacement(m.id, Rect(m.x, m.y, m.w, m.h),
                            frozenset(m.bands) if m.bands is not None else mmwave)
            for m in spec.modules
        )
        layout = UeLayout(HousingSpec(spec.housing.width, spec.housing.height), placements)
        layout.validate_bands(catalog)
        return layout
    except ConfigError as err:
        raise ConfigError(err.message, err.path or "layout") from None


def build_scenario(data: Any) -> Scenario:
    """Parse and cross-validate a config; raises ConfigError with a field path."""
    config = parse_config(data)
    catalog = _catalog(config)
    layout = _layout(config, catalog)

    n_bf = len(layout) if config.fabric.n_bf is None else config.fabric.n_bf
    if n_bf != len(layout):
        raise ConfigError(f"n_bf={n_bf} but the layout has {len(layout)} modules", "fabric.n_bf")
    fabric = FabricConfig(n_bf, config.fabric.n_wigig_if, config.fabric.n_sub6_fe)

    nodes = []
    for node in config.nodes:
        radio = _DEFAULT_RADIOS[node.role] if node.radio is None else RadioParams(
            node.radio.tx_power_dbm, node.radio.tx_gain_dbi, node.radio.rx_gain_dbi,
            node.radio.noise_figure_db)
        nodes.append(NodeSpec(node.id, NodeRole(node.role), node.position, radio))
    if sum(1 for n in nodes if n.role is NodeRole.UE) != 1:
        raise ConfigError("exactly one UE node is required", "nodes")
    if len({n.id for n in nodes}) != len(nodes):
        raise ConfigError("node ids must be unique", "nodes")

    for band_id in config.bands:
        if band_id not in catalog:
            raise ConfigError(f"band {band_id!r} is not in the catalog", f"bands.{band_id}")
    truth = {k: BandObservation(v.available, v.occupancy) for k, v in config.bands.items()}

    k = config.knobs
    blockage = BlockageModel(k.full_blockage_db, k.saturation_fraction, k.center_area_fraction,
                             k.landscape_strip_fraction, k.bottom_height_fraction)
    req = config.requirement
    return Scenario(
        config=config,
        catalog=catalog,
        layout=layout,
        fabric=fabric,
        nodes=tuple(nodes),
        grip=GripScenario(config.grip),
        blockage=blockage,
        ground_truth=truth,
        requirement=AppRequirement(req.min_throughput_bps, req.max_latency_ms, req.service_class),
        latency=LatencyTable(k.latency.cellular_mmwave_ms, k.latency.cellular_sub6_ms, k.latency.wifi_ms),
    )


def with_overrides(config: ScenarioConfig, overrides: dict[str, Any]) -> ScenarioConfig:
    """Copy of ``config`` with dotted-path overrides applied, re-validated."""
    data = config.to_dict()
    for dotted, value in overrides.items():
        set_path(data, dotted, value)
    return parse_config(data)


def set_path(data: dict, dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    node: Any = data
    for i, part in enumerate(parts[:-1]):
        node = node[int(part)] if isinstance(node, list) else node.setdefault(part, {})
        if not isinstance(node, (dict, list)):
            raise ConfigError(f"cannot descend into {'.'.join(parts[:i + 1])}", dotted)
    last = parts[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value


def hetnet_config() -> ScenarioConfig:
    """Default heterogeneous-network setup: one BS at 100 m, one router at 5 m."""
    return parse_config({
        "schema_version": 1,
        "name": "hetnet-default",
        "seed": 8,
        "layout": "dpa_8",
        "fabric": {"n_wigig_if": 2, "n_sub6_fe": 1},
        "nodes": [
            {"id": "ue", "role": "UE", "position": [0.0, 0.0]},
            {"id": "bs", "role": "BaseStation", "position": [100.0, 0.0]},
            {"id": "router", "role": "WiFiRouter", "position": [0.0, 5.0]},
        ],
        "grip": "OneHandPortraitBottom",
        "bands": {
            "wifi_2g4": {"available": True, "occupancy": 0.6},
            "wifi_5g": {"available": True, "occupancy": 0.4},
        },
        "requirement": {"min_throughput_bps": 2.0e10, "max_latency_ms": 10.0,
                        "service_class": "eMBB"},
    })


def superca_config() -> ScenarioConfig:
    """Unlicensed 71 GHz cellular plus the 60 GHz WiGig band, licensed carriers absent."""
    data = hetnet_config().to_dict()
    data["name"] = "superca-71-60"
    data["grip"] = "FreeSpace"
    data["bands"].update({b: {"available": False, "occupancy": 0.0}
                          for b in ("cell_sub6", "cell_28", "cell_37", "cell_39")})
    return parse_config(data)


def compare_base_config() -> ScenarioConfig:
    """Cellular-only base for layout comparisons: two near-equal licensed carriers."""
    data = hetnet_config().to_dict()
    data["name"] = "compare-base"
    data["nodes"] = [n for n in data["nodes"] if n["role"] != "WiFiRouter"]
    data["fabric"] = {"n_bf": None, "n_wigig_if": 0, "n_sub6_fe": 0}
    data["grip"] = "FreeSpace"
    data["bands"].update({b: {"available": False, "occupancy": 0.0}
                          for b in ("cell_sub6", "cell_laa5", "cell_28", "cell_u71")})
    data["requirement"] = {"min_throughput_bps": 1.0e9, "max_latency_ms": 20.0,
                           "service_class": "eMBB"}
    return parse_config(data)
