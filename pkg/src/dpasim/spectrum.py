"""Band inventory, wavelength math and carrier-aggregation classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ConfigError, DomainError

SPEED_OF_LIGHT = 2.998e8  # m/s
SUB6_LIMIT_GHZ = 6.0
_EDGE_EPS = 1e-9  # GHz; adjacent channels on a raster touch exactly

# Default channelization (overridable through a custom catalog).
WIGIG_BANDWIDTH_MHZ = 2160.0
MMWAVE_CC_BANDWIDTH_MHZ = 400.0
SUB6_CC_BANDWIDTH_MHZ = 20.0


class Service(str, enum.Enum):
    CELLULAR = "cellular"
    WIFI = "wifi"


class Regime(str, enum.Enum):
    LICENSED = "licensed"
    UNLICENSED = "unlicensed"


class Tier(str, enum.Enum):
    SUB6 = "sub6"
    MMWAVE = "mmwave"


class AggregationClass(str, enum.Enum):
    NONE = "None"
    LAA = "LAA"
    SUPER_CA = "SuperCA"


def tier_for(frequency_ghz: float) -> Tier:
    return Tier.SUB6 if frequency_ghz < SUB6_LIMIT_GHZ else Tier.MMWAVE


@dataclass(frozen=True)
class Band:
    id: str
    service: Service
    regime: Regime
    center_ghz: float
    bandwidth_mhz: float
    tier: Tier | None = None

    def __post_init__(self):
        object.__setattr__(self, "service", Service(self.service))
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.center_ghz <= 0 or self.bandwidth_mhz <= 0:
            raise ConfigError(f"band {self.id!r} needs positive frequency and bandwidth")
        expected = tier_for(self.center_ghz)
        if self.tier is None:
            object.__setattr__(self, "tier", expected)
        elif Tier(self.tier) is not expected:
            raise ConfigError(
                f"band {self.id!r} at {self.center_ghz} GHz must be tier {expected.value}"
            )
        else:
            object.__setattr__(self, "tier", Tier(self.tier))

    @property
    def bandwidth_hz(self) -> float:
        return self.bandwidth_mhz * 1e6

    @property
    def low_ghz(self) -> float:
        return self.center_ghz - self.bandwidth_mhz / 2000.0

    @property
    def high_ghz(self) -> float:
        return self.center_ghz + self.bandwidth_mhz / 2000.0

    @property
    def quadrant(self) -> tuple[Regime, Tier]:
        return (self.regime, self.tier)


class BandCatalog:
    """Ordered, id-unique collection of bands.

    Bands of the same service must not overlap in frequency; edges may touch.
    """

    def __init__(self, bands: Iterable[Band]):
        self._bands = tuple(bands)
        self._by_id: dict[str, Band] = {}
        for band in self._bands:
            if band.id in self._by_id:
                raise ConfigError(f"duplicate band id {band.id!r}")
            self._by_id[band.id] = band
        for i, a in enumerate(self._bands):
            for b in self._bands[i + 1:]:
                if (a.service is b.service and a.low_ghz < b.high_ghz - _EDGE_EPS
                        and b.low_ghz < a.high_ghz - _EDGE_EPS):
                    raise ConfigError(f"{a.service.value} bands {a.id!r} and {b.id!r} overlap")

    def __iter__(self) -> Iterator[Band]:
        return iter(self._bands)

    def __len__(self) -> int:
        return len(self._bands)

    def __contains__(self, band_id: object) -> bool:
        return band_id in self._by_id

    def __getitem__(self, band_id: str) -> Band:
        try:
            return self._by_id[band_id]
        except KeyError:
            raise ConfigError(f"band {band_id!r} is not in the catalog") from None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BandCatalog) and self._bands == other._bands

    @property
    def bands(self) -> tuple[Band, ...]:
        return self._bands

    def ids(self) -> list[str]:
        return [b.id for b in self._bands]

    def select(self, service: Service | None = None, regime: Regime | None = None,
               tier: Tier | None = None) -> list[Band]:
        return [
            b for b in self._bands
            if (service is None or b.service is service)
            and (regime is None or b.regime is regime)
            and (tier is None or b.tier is tier)
        ]

    def to_dicts(self) -> list[dict]:
        return [band_to_dict(b) for b in self._bands]

    @classmethod
    def from_dicts(cls, items: Iterable[dict]) -> "BandCatalog":
        return cls(band_from_dict(item) for item in items)


def band_to_dict(band: Band) -> dict:
    return {
        "id": band.id,
        "service": band.service.value,
        "regime": band.regime.value,
        "center_ghz": band.center_ghz,
        "bandwidth_mhz": band.bandwidth_mhz,
        "tier": band.tier.value,
    }


def band_from_dict(item: dict) -> Band:
    return Band(
        id=item["id"],
        service=Service(item["service"]),
        regime=Regime(item["regime"]),
        center_ghz=float(item["center_ghz"]),
        bandwidth_mhz=float(item["bandwidth_mhz"]),
        tier=Tier(item["tier"]) if item.get("tier") else None,
    )


def wavelength(frequency_ghz: float) -> float:
    """Free-space wavelength in metres for a frequency given in GHz."""
    if not frequency_ghz > 0:
        raise DomainError(f"frequency must be positive, got {frequency_ghz!r}")
    return SPEED_OF_LIGHT / (frequency_ghz * 1e9)


def default_catalog() -> BandCatalog:
    """Licensed 28/37/39 GHz, unlicensed 71 GHz NR-U, WiGig channels 1-4, legacy WiFi.

    WiGig channel centres follow the 2.16 GHz raster starting at 58.32 GHz; the
    choice of channels 1-4 is a default, not a requirement.
    """
    mm = MMWAVE_CC_BANDWIDTH_MHZ
    s6 = SUB6_CC_BANDWIDTH_MHZ
    C, W = Service.CELLULAR, Service.WIFI
    L, U = Regime.LICENSED, Regime.UNLICENSED
    bands = [
        Band("cell_sub6", C, L, 3.5, s6),
        Band("cell_laa5", C, U, 5.2, s6),
        Band("cell_28", C, L, 28.0, mm),
        Band("cell_37", C, L, 37.0, mm),
        Band("cell_39", C, L, 39.0, mm),
        Band("cell_u71", C, U, 71.0, mm),
        Band("wifi_2g4", W, U, 2.437, s6),
        Band("wifi_5g", W, U, 5.5, s6),
    ]
    for ch in range(1, 5):
        center = round(58.32 + 2.16 * (ch - 1), 2)
        bands.append(Band(f"wigig_ch{ch}", W, U, center, WIGIG_BANDWIDTH_MHZ))
    return BandCatalog(bands)


def classify_aggregation(selected: Iterable[Band]) -> AggregationClass:
    """Classify a carrier set as plain, LAA or Super-CA aggregation.

    * a single band, a single-service set without both regimes -> NONE
    * cellular only, exactly one licensed anchor plus unlicensed carriers, all
      in the anchor's tier -> LAA
    * anything mixing services, or licensed+unlicensed cellular carriers that
      go beyond the single-anchor same-tier pair -> SUPER_CA
    """
    bands = set(selected)
    if not bands:
        raise DomainError("cannot classify an empty band set")
    if len(bands) == 1:
        return AggregationClass.NONE
    services = {b.service for b in bands}
    if len(services) > 1:
        return AggregationClass.SUPER_CA
    licensed = [b for b in bands if b.regime is Regime.LICENSED]
    unlicensed = [b for b in bands if b.regime is Regime.UNLICENSED]
    if not licensed or not unlicensed or Service.CELLULAR not in services:
        return AggregationClass.NONE
    tiers = {b.tier for b in bands}
    if len(licensed) == 1 and len(tiers) == 1:
        return AggregationClass.LAA
    return AggregationClass.SUPER_CA
