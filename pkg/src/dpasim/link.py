"""Link-budget arithmetic: path loss, thermal noise, SNR and Shannon capacity."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import ConfigError, DomainError
from .spectrum import Band

# Link budgets use the rounded 3e8 m/s convention; geometry uses spectrum.SPEED_OF_LIGHT.
FSPL_SPEED_OF_LIGHT = 3.0e8
THERMAL_NOISE_DBM_HZ = -174.0


class NodeRole(str, enum.Enum):
    BASE_STATION = "BaseStation"
    WIFI_ROUTER = "WiFiRouter"
    UE = "UE"


@dataclass(frozen=True)
class RadioParams:
    tx_power: float = 0.0  # dBm
    tx_gain: float = 0.0  # dBi
    rx_gain: float = 0.0  # dBi, includes beamforming array gain
    noise_figure: float = 7.0  # dB

    def __post_init__(self):
        if self.noise_figure < 0:
            raise ConfigError("noise_figure must be non-negative")

    @property
    def eirp(self) -> float:
        return self.tx_power + self.tx_gain


# Modeling defaults, not measured values.
DEFAULT_BS_RADIO = RadioParams(tx_power=30.0, tx_gain=25.0, rx_gain=0.0, noise_figure=7.0)
DEFAULT_ROUTER_RADIO = RadioParams(tx_power=20.0, tx_gain=10.0, rx_gain=0.0, noise_figure=7.0)
DEFAULT_UE_RADIO = RadioParams(tx_power=23.0, tx_gain=0.0, rx_gain=15.0, noise_figure=7.0)
DEFAULT_UE_SUB6_RX_GAIN = 0.0


@dataclass(frozen=True)
class NodeSpec:
    id: str
    role: NodeRole
    position: tuple[float, float] = (0.0, 0.0)
    radio: RadioParams = RadioParams()

    def __post_init__(self):
        object.__setattr__(self, "role", NodeRole(self.role))
        object.__setattr__(self, "position", tuple(float(v) for v in self.position))

    def distance_to(self, other: "NodeSpec") -> float:
        return math.dist(self.position, other.position)


@dataclass(frozen=True)
class LinkBudgetResult:
    fspl: float
    rx_power: float
    noise: float
    snr: float
    capacity: float


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0:
        return -math.inf
    return 10.0 * math.log10(value)


def dbm_to_mw(dbm: float) -> float:
    return db_to_linear(dbm)


def mw_to_dbm(mw: float) -> float:
    return linear_to_db(mw)


def fspl(distance: float, frequency_ghz: float) -> float:
    """Friis free-space path loss in dB for a distance in metres."""
    if not distance > 0:
        raise DomainError(f"distance must be positive, got {distance!r}")
    if not frequency_ghz > 0:
        raise DomainError(f"frequency must be positive, got {frequency_ghz!r}")
    return (20 * math.log10(distance) + 20 * math.log10(frequency_ghz * 1e9)
            + 20 * math.log10(4 * math.pi / FSPL_SPEED_OF_LIGHT))


PathLossModel = Callable[[float, float], float]


def noise_floor(bandwidth_hz: float, noise_figure: float) -> float:
    if not bandwidth_hz > 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    return THERMAL_NOISE_DBM_HZ + 10 * math.log10(bandwidth_hz) + noise_figure


def shannon_capacity(bandwidth_hz: float, snr_db: float) -> float:
    if not bandwidth_hz > 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    if snr_db == -math.inf:
        return 0.0
    return bandwidth_hz * math.log2(1.0 + db_to_linear(snr_db))


def module_link_budget(tx: RadioParams, rx: RadioParams, distance: float, band: Band,
                       blockage_db: float = 0.0,
                       path_loss: PathLossModel = fspl) -> LinkBudgetResult:
    if blockage_db < 0:
        raise DomainError("blockage attenuation must be non-negative")
    loss = path_loss(distance, band.center_ghz)
    rx_power = tx.tx_power + tx.tx_gain + rx.rx_gain - loss - blockage_db
    noise = noise_floor(band.bandwidth_hz, rx.noise_figure)
    snr = rx_power - noise
    return LinkBudgetResult(loss, rx_power, noise, snr, shannon_capacity(band.bandwidth_hz, snr))


def aggregate_capacity(per_stream: Iterable[LinkBudgetResult]) -> float:
    """Sum of independent stream capacities (exactly rounded, order-free)."""
    return math.fsum(r.capacity for r in per_stream)
