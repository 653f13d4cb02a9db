"""Single-shot mode selection: sensing, availability, requirement check, network choice."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ConfigError
from .frozenmap import FrozenMap
from .link import LinkBudgetResult, NodeRole, NodeSpec
from .spectrum import AggregationClass, Band, BandCatalog, Regime, Service, Tier, classify_aggregation


class ServiceClass(str, enum.Enum):
    EMBB = "eMBB"
    URLLC = "uRLLC"
    MMTC = "mMTC"


class Mode(str, enum.Enum):
    CELLULAR_ONLY = "CellularOnly"
    WIFI_ONLY = "WiFiOnly"
    CELLULAR_AND_WIFI = "CellularAndWiFi"
    NO_SERVICE = "NoService"


@dataclass(frozen=True)
class BandObservation:
    available: bool = True
    occupancy: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.occupancy <= 1.0:
            raise ConfigError(f"occupancy must lie in [0, 1], got {self.occupancy}")


@dataclass(frozen=True)
class SpectrumReport:
    observations: Mapping[str, BandObservation]

    def __post_init__(self):
        object.__setattr__(self, "observations", FrozenMap(self.observations))

    def __getitem__(self, band_id: str) -> BandObservation:
        return self.observations[band_id]

    def to_dict(self) -> dict:
        return {k: {"available": v.available, "occupancy": v.occupancy}
                for k, v in self.observations.items()}


@dataclass(frozen=True)
class NetworkAvailability:
    cellular_reachable: bool
    wifi_reachable: bool
    cellular_bands: tuple[str, ...] = ()
    wifi_bands: tuple[str, ...] = ()

    def __post_init__(self):
        if self.cellular_reachable and not self.cellular_bands:
            raise ValueError("a reachable cellular network needs at least one band")
        if self.wifi_reachable and not self.wifi_bands:
            raise ValueError("a reachable WiFi network needs at least one band")

    def to_dict(self) -> dict:
        return {
            "cellular_reachable": self.cellular_reachable,
            "wifi_reachable": self.wifi_reachable,
            "cellular_bands": list(self.cellular_bands),
            "wifi_bands": list(self.wifi_bands),
        }


@dataclass(frozen=True)
class AppRequirement:
    min_throughput: float = 0.0  # bit/s
    max_latency: float = 100.0  # ms
    service_class: ServiceClass = ServiceClass.EMBB

    def __post_init__(self):
        object.__setattr__(self, "service_class", ServiceClass(self.service_class))
        if self.min_throughput < 0:
            raise ConfigError("min_throughput must be non-negative", "requirement.min_throughput")
        if not self.max_latency > 0:
            raise ConfigError("max_latency must be positive", "requirement.max_latency")


@dataclass(frozen=True)
class LatencyTable:
    """Per-technology access latency in ms; an aggregate takes its fastest component."""

    cellular_mmwave: float = 5.0
    cellular_sub6: float = 10.0
    wifi: float = 15.0

    def of_band(self, band: Band) -> float:
        if band.service is Service.WIFI:
            return self.wifi
        return self.cellular_mmwave if band.tier is Tier.MMWAVE else self.cellular_sub6

    def of_set(self, bands: Iterable[Band]) -> float:
        return min((self.of_band(b) for b in bands), default=math.inf)


@dataclass(frozen=True)
class ModeDecision:
    mode: Mode
    aggregation: AggregationClass | None = None
    bands: tuple[str, ...] = ()
    estimated_capacity: float = 0.0
    estimated_latency: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is Mode.CELLULAR_AND_WIFI:
            if self.aggregation not in (AggregationClass.LAA, AggregationClass.SUPER_CA):
                raise ValueError("CellularAndWiFi needs an LAA or SuperCA aggregation")
        elif self.aggregation is not None:
            raise ValueError(f"{self.mode.value} carries no aggregation class")

    @property
    def is_laa(self) -> bool:
        return self.aggregation is AggregationClass.LAA

    @property
    def label(self) -> str:
        if self.mode is Mode.CELLULAR_AND_WIFI:
            return f"{self.mode.value}({self.aggregation.value})"
        return self.mode.value

    @property
    def allows_cellular(self) -> bool:
        return self.mode in (Mode.CELLULAR_ONLY, Mode.CELLULAR_AND_WIFI)

    @property
    def allows_wifi(self) -> bool:
        return self.mode is Mode.WIFI_ONLY or (
            self.mode is Mode.CELLULAR_AND_WIFI and not self.is_laa
        )

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "aggregation": self.aggregation.value if self.aggregation else None,
            "label": self.label,
            "bands": list(self.bands),
            "estimated_capacity": self.estimated_capacity,
            "estimated_latency_ms": None if math.isinf(self.estimated_latency) else self.estimated_latency,
        }


# Returns the budget of the best UE path to the serving node of ``band``'s
# network, or None when that network has no node.
CapacityEstimator = Callable[[Band], "LinkBudgetResult | None"]


def sense(ground_truth: Mapping[str, object] | None, catalog: BandCatalog) -> SpectrumReport:
    """Ideal sensing: copy ground truth, defaulting unlisted bands to idle."""
    ground_truth = ground_truth or {}
    for band_id in ground_truth:
        if band_id not in catalog:
            raise ConfigError(f"band {band_id!r} is not in the catalog", f"bands.{band_id}")
    obs = {}
    for band in catalog:
        raw = ground_truth.get(band.id)
        if raw is None:
            obs[band.id] = BandObservation()
        elif isinstance(raw, BandObservation):
            obs[band.id] = raw
        else:
            obs[band.id] = BandObservation(bool(raw.get("available", True)),
                                           float(raw.get("occupancy", 0.0)))
    return SpectrumReport(obs)


def availability(report: SpectrumReport, nodes: Sequence[NodeSpec], catalog: BandCatalog,
                 estimator: CapacityEstimator, threshold_db: float = 0.0) -> NetworkAvailability:
    roles = {n.role for n in nodes}
    reach: dict[Service, list[str]] = {Service.CELLULAR: [], Service.WIFI: []}
    present = {Service.CELLULAR: NodeRole.BASE_STATION in roles,
               Service.WIFI: NodeRole.WIFI_ROUTER in roles}
    for band in catalog:
        if not present[band.service] or not report[band.id].available:
            continue
        est = estimator(band)
        if est is not None and est.snr > threshold_db:
            reach[band.service].append(band.id)
    cell, wifi = reach[Service.CELLULAR], reach[Service.WIFI]
    return NetworkAvailability(bool(cell), bool(wifi), tuple(cell), tuple(wifi))


def decide(avail: NetworkAvailability, report: SpectrumReport, requirement: AppRequirement,
           estimator: CapacityEstimator, catalog: BandCatalog,
           latency: LatencyTable = LatencyTable()) -> ModeDecision:
    """Map availability and demand to a mode.

    Neither network reachable gives NoService; exactly one gives that network.
    With both, the networks whose best single band meets the throughput and
    latency demand compete on estimated capacity (cellular wins ties). If
    neither suffices alone, the UE aggregates: LAA (licensed anchor plus
    same-tier unlicensed cellular carriers) when that meets the demand,
    otherwise the wider Super-CA set that adds the best WiFi band.
    """
    def est(band: Band) -> float:
        result = estimator(band)
        if result is None:
            return 0.0
        return (1.0 - report[band.id].occupancy) * result.capacity

    def best(bands: list[Band]) -> Band:
        # max() keeps the first maximum, i.e. catalog order on ties
        return max(bands, key=est)

    def meets(capacity: float, lat: float) -> bool:
        return capacity >= requirement.min_throughput and lat <= requirement.max_latency

    def single(mode: Mode, ids: tuple[str, ...]) -> ModeDecision:
        bands = [catalog[i] for i in ids]
        top = best(bands)
        return ModeDecision(mode, None, ids, est(top), latency.of_band(top))

    if not avail.cellular_reachable and not avail.wifi_reachable:
        return ModeDecision(Mode.NO_SERVICE)
    if not avail.wifi_reachable:
        return single(Mode.CELLULAR_ONLY, avail.cellular_bands)
    if not avail.cellular_reachable:
        return single(Mode.WIFI_ONLY, avail.wifi_bands)

    cell_opt = single(Mode.CELLULAR_ONLY, avail.cellular_bands)
    wifi_opt = single(Mode.WIFI_ONLY, avail.wifi_bands)
    fits = [d for d in (cell_opt, wifi_opt) if meets(d.estimated_capacity, d.estimated_latency)]
    if fits:
        return max(fits, key=lambda d: d.estimated_capacity)

    cell = [catalog[i] for i in avail.cellular_bands]
    wifi = [catalog[i] for i in avail.wifi_bands]
    licensed = [b for b in cell if b.regime is Regime.LICENSED]
    unlicensed = [b for b in cell if b.regime is Regime.UNLICENSED]

    base: list[Band] = []
    if licensed:
        anchor = best(licensed)
        base = [anchor] + [b for b in unlicensed if b.tier is anchor.tier]
        if len(base) > 1 and classify_aggregation(base) is AggregationClass.LAA:
            cap = math.fsum(est(b) for b in base)
            lat = latency.of_set(base)
            if meets(cap, lat):
                return ModeDecision(Mode.CELLULAR_AND_WIFI, AggregationClass.LAA,
                                    _ids(base, catalog), cap, lat)
    if unlicensed and not any(b.regime is Regime.UNLICENSED for b in base):
        base.append(best(unlicensed))
    if not base:
        base.append(best(cell))
    selected = base + [best(wifi)]
    # a cellular+WiFi mix always classifies as Super-CA
    return ModeDecision(Mode.CELLULAR_AND_WIFI, classify_aggregation(selected),
                        _ids(selected, catalog),
                        math.fsum(est(b) for b in selected), latency.of_set(selected))


def _ids(bands: Iterable[Band], catalog: BandCatalog) -> tuple[str, ...]:
    wanted = {b.id for b in bands}
    return tuple(i for i in catalog.ids() if i in wanted)
