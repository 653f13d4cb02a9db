"""Rear-housing geometry of beamforming modules.

Coordinates are portrait millimetres with the origin at the bottom-left corner
of the rear housing: ``x`` across the short edge, ``y`` along the long edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import ConfigError, DomainError
from .spectrum import BandCatalog, Tier, wavelength

SPACING_FACTOR = 1.5  # minimum edge-to-edge spacing, in free-space wavelengths
REFERENCE_SPACING_GHZ = 28.0
DEFAULT_MODULE_MM = 12.0
DEFAULT_GRID_GAP_MM = 26.0

PRESETS = ("conventional_center", "top_bottom", "dpa_8")


@dataclass(frozen=True)
class HousingSpec:
    width: float = 75.0
    height: float = 150.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ConfigError("housing width and height must be positive")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    def intersection_area(self, other: "Rect") -> float:
        dx = min(self.x2, other.x2) - max(self.x, other.x)
        dy = min(self.y2, other.y2) - max(self.y, other.y)
        return dx * dy if dx > 0 and dy > 0 else 0.0

    def distance(self, other: "Rect") -> float:
        dx = max(other.x - self.x2, self.x - other.x2, 0.0)
        dy = max(other.y - self.y2, self.y - other.y2, 0.0)
        return math.hypot(dx, dy)

    def inside(self, housing: HousingSpec) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x2 <= housing.width and self.y2 <= housing.height


@dataclass(frozen=True)
class ModulePlacement:
    id: str
    footprint: Rect
    supported_band_ids: frozenset[str] = frozenset()

    def __post_init__(self):
        if not (self.footprint.w > 0 and self.footprint.h > 0):
            raise ConfigError(f"module {self.id!r} footprint must have positive size")
        object.__setattr__(self, "supported_band_ids", frozenset(self.supported_band_ids))


@dataclass(frozen=True)
class UeLayout:
    housing: HousingSpec
    placements: tuple[ModulePlacement, ...]

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))
        ids = [p.id for p in self.placements]
        if len(set(ids)) != len(ids):
            raise ConfigError("module ids must be unique")
        for p in self.placements:
            if not p.footprint.inside(self.housing):
                raise ConfigError(f"module {p.id!r} lies outside the housing")
        for a, b in combinations(self.placements, 2):
            if a.footprint.intersection_area(b.footprint) > 0:
                raise ConfigError(f"modules {a.id!r} and {b.id!r} overlap")

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.placements]

    def __len__(self) -> int:
        return len(self.placements)

    def validate_bands(self, catalog: BandCatalog) -> None:
        for p in self.placements:
            for band_id in sorted(p.supported_band_ids):
                if catalog[band_id].tier is not Tier.MMWAVE:
                    raise ConfigError(f"module {p.id!r} lists non-mmWave band {band_id!r}")


@dataclass(frozen=True)
class AdjacencyGraph:
    nodes: tuple[str, ...]
    edges: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def neighbors(self, node: str) -> set[str]:
        return {other for e in self.edges if node in e for other in e if other != node}

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def edge_list(self) -> list[tuple[str, str]]:
        order = {n: i for i, n in enumerate(self.nodes)}
        return sorted((tuple(sorted(e, key=order.__getitem__)) for e in self.edges),
                      key=lambda e: (order[e[0]], order[e[1]]))


@dataclass(frozen=True)
class SpacingViolation:
    a: str
    b: str
    band_id: str
    required_mm: float
    actual_mm: float


@dataclass(frozen=True)
class SpacingReport:
    checked_pairs: int
    violations: tuple[SpacingViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def edge_to_edge_distance(a: ModulePlacement, b: ModulePlacement) -> float:
    """Minimum Euclidean distance between two footprints; 0 when touching."""
    if a.id == b.id:
        raise DomainError(f"distance of module {a.id!r} to itself is undefined")
    return a.footprint.distance(b.footprint)


def required_spacing_mm(frequency_ghz: float) -> float:
    return SPACING_FACTOR * wavelength(frequency_ghz) * 1e3


def validate_spacing(layout: UeLayout, catalog: BandCatalog) -> SpacingReport:
    """Check the edge-to-edge isolation rule for every pair sharing a band.

    The lowest shared frequency sets the (largest) required spacing. Pairs
    without a common band are not checked.
    """
    violations = []
    checked = 0
    for a, b in combinations(layout.placements, 2):
        shared = a.supported_band_ids & b.supported_band_ids
        if not shared:
            continue
        band = min((catalog[i] for i in shared), key=lambda x: (x.center_ghz, x.id))
        checked += 1
        required = required_spacing_mm(band.center_ghz)
        actual = edge_to_edge_distance(a, b)
        if not actual > required:
            violations.append(SpacingViolation(a.id, b.id, band.id, required, actual))
    return SpacingReport(checked, tuple(violations))


def default_adjacency_threshold() -> float:
    """Twice the minimum spacing at 28 GHz (about 32.1 mm)."""
    return 2.0 * required_spacing_mm(REFERENCE_SPACING_GHZ)


def adjacency(layout: UeLayout, threshold: float | None = None) -> AdjacencyGraph:
    if threshold is None:
        threshold = default_adjacency_threshold()
    if not threshold > 0:
        raise DomainError("adjacency threshold must be positive")
    edges = frozenset(
        frozenset((a.id, b.id))
        for a, b in combinations(layout.placements, 2)
        if edge_to_edge_distance(a, b) < threshold
    )
    return AdjacencyGraph(tuple(layout.ids), edges)


def _mmwave_ids(catalog: BandCatalog | None) -> frozenset[str]:
    from .spectrum import default_catalog

    catalog = catalog or default_catalog()
    return frozenset(b.id for b in catalog if b.tier is Tier.MMWAVE)


def grid_layout(rows: int, cols: int, gap_mm: float = DEFAULT_GRID_GAP_MM,
                module_mm: float = DEFAULT_MODULE_MM, housing: HousingSpec | None = None,
                band_ids: Iterable[str] | None = None) -> UeLayout:
    """A rows x cols grid of square modules, centred, with uniform edge gaps."""
    housing = housing or HousingSpec()
    bands = frozenset(band_ids) if band_ids is not None else _mmwave_ids(None)
    span_x = cols * module_mm + (cols - 1) * gap_mm
    span_y = rows * module_mm + (rows - 1) * gap_mm
    x0 = (housing.width - span_x) / 2
    y0 = (housing.height - span_y) / 2
    placements = []
    for r in range(rows):
        for c in range(cols):
            rect = Rect(x0 + c * (module_mm + gap_mm), y0 + r * (module_mm + gap_mm),
                        module_mm, module_mm)
            placements.append(ModulePlacement(f"bf{len(placements)}", rect, bands))
    return UeLayout(housing, tuple(placements))


def preset(name: str, housing: HousingSpec | None = None,
           catalog: BandCatalog | None = None) -> UeLayout:
    housing = housing or HousingSpec()
    bands = _mmwave_ids(catalog)
    m = DEFAULT_MODULE_MM
    cx = (housing.width - m) / 2
    if name == "conventional_center":
        rect = Rect(cx, (housing.height - m) / 2, m, m)
        return UeLayout(housing, (ModulePlacement("bf0", rect, bands),))
    if name == "top_bottom":
        margin = 4.0
        return UeLayout(housing, (
            ModulePlacement("bf0", Rect(cx, margin, m, m), bands),
            ModulePlacement("bf1", Rect(cx, housing.height - margin - m, m, m), bands),
        ))
    if name == "dpa_8":
        return grid_layout(4, 2, housing=housing, band_ids=bands)
    raise ConfigError(f"unknown layout preset {name!r}; expected one of {', '.join(PRESETS)}")
