"""Hand-grip occlusion zones and the per-module attenuation mask they induce."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import ConfigError
from .frozenmap import FrozenMap
from .layout import HousingSpec, Rect, UeLayout

FULL_BLOCKAGE_RANGE_DB = (30.0, 40.0)


class GripScenario(str, enum.Enum):
    FREE_SPACE = "FreeSpace"
    ONE_HAND_CENTER = "OneHandCenter"
    TWO_HAND_LANDSCAPE = "TwoHandLandscape"
    ONE_HAND_PORTRAIT_BOTTOM = "OneHandPortraitBottom"


@dataclass(frozen=True)
class BlockageModel:
    """Geometry and attenuation knobs of the grip model."""

    full_blockage_db: float = 35.0
    saturation_fraction: float = 0.5
    center_area_fraction: float = 0.40
    landscape_strip_fraction: float = 0.30
    bottom_height_fraction: float = 0.35

    def __post_init__(self):
        lo, hi = FULL_BLOCKAGE_RANGE_DB
        if not lo <= self.full_blockage_db <= hi:
            raise ConfigError(f"full_blockage_db must lie in [{lo}, {hi}]", "knobs.full_blockage_db")
        if not 0 < self.saturation_fraction <= 1:
            raise ConfigError("saturation_fraction must lie in (0, 1]", "knobs.saturation_fraction")
        for name in ("center_area_fraction", "bottom_height_fraction"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]", f"knobs.{name}")
        if not 0 <= self.landscape_strip_fraction <= 0.5:
            raise ConfigError("landscape_strip_fraction must lie in [0, 0.5]",
                              "knobs.landscape_strip_fraction")

    def attenuation(self, fraction: float) -> float:
        """Linear ramp in occluded fraction, saturating at the full-blockage value."""
        fraction = min(max(fraction, 0.0), 1.0)
        return self.full_blockage_db * min(1.0, fraction / self.saturation_fraction)


DEFAULT_MODEL = BlockageModel()


@dataclass(frozen=True)
class BlockageMask:
    attenuation: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "attenuation", FrozenMap(self.attenuation))

    def __getitem__(self, module_id: str) -> float:
        return self.attenuation[module_id]

    def below(self, threshold_db: float) -> list[str]:
        return [m for m, a in self.attenuation.items() if a < threshold_db]

    def at_least(self, threshold_db: float) -> list[str]:
        return [m for m, a in self.attenuation.items() if a >= threshold_db]


def occlusion_zones(grip: GripScenario | str, housing: HousingSpec,
                    model: BlockageModel = DEFAULT_MODEL) -> list[Rect]:
    grip = GripScenario(grip)
    W, H = housing.width, housing.height
    if grip is GripScenario.FREE_SPACE:
        return []
    if grip is GripScenario.ONE_HAND_CENTER:
        # same aspect ratio as the housing, scaled to the requested area share
        k = math.sqrt(model.center_area_fraction)
        w, h = W * k, H * k
        return [Rect((W - w) / 2, (H - h) / 2, w, h)]
    if grip is GripScenario.TWO_HAND_LANDSCAPE:
        # landscape width is the portrait height
        strip = model.landscape_strip_fraction * H
        return [Rect(0.0, 0.0, W, strip), Rect(0.0, H - strip, W, strip)]
    if grip is GripScenario.ONE_HAND_PORTRAIT_BOTTOM:
        return [Rect(0.0, 0.0, W, model.bottom_height_fraction * H)]
    raise AssertionError(grip)


def occluded_fraction(footprint: Rect, zones: list[Rect]) -> float:
    # zones produced by occlusion_zones never overlap each other
    covered = sum(footprint.intersection_area(z) for z in zones)
    return min(1.0, covered / footprint.area)


def blockage_mask(layout: UeLayout, grip: GripScenario | str,
                  model: BlockageModel = DEFAULT_MODEL) -> BlockageMask:
    zones = occlusion_zones(grip, layout.housing, model)
    return BlockageMask({
        p.id: model.attenuation(occluded_fraction(p.footprint, zones))
        for p in layout.placements
    })
