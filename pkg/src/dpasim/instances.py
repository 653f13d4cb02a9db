"""Seeded random instances for property tests and calibration runs.

All randomness in the package flows through a ``random.Random`` created here
from an integer seed; the simulation pipeline itself is deterministic.
"""

from __future__ import annotations

import math
import random

from .allocator import AllocationProblem, CarrierSet, UeLinkModel
from .blockage import GripScenario, blockage_mask
from .config import ScenarioConfig, parse_config
from .fabric import FabricConfig
from .layout import DEFAULT_MODULE_MM, HousingSpec, ModulePlacement, Rect, UeLayout, adjacency
from .link import DEFAULT_BS_RADIO, DEFAULT_ROUTER_RADIO, DEFAULT_UE_RADIO, NodeRole, NodeSpec
from .modesel import Mode, ModeDecision
from .spectrum import AggregationClass, BandCatalog, Tier, default_catalog

CELL_MMWAVE = ("cell_28", "cell_37", "cell_39", "cell_u71")
WIGIG = ("wigig_ch1", "wigig_ch2", "wigig_ch3", "wigig_ch4")
GRIPS = tuple(g.value for g in GripScenario)


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_layout(rng: random.Random, n: int, housing: HousingSpec | None = None,
                  catalog: BandCatalog | None = None) -> UeLayout:
    """``n`` non-overlapping square modules dropped uniformly on the housing."""
    housing = housing or HousingSpec()
    catalog = catalog or default_catalog()
    bands = frozenset(b.id for b in catalog if b.tier is Tier.MMWAVE)
    m = DEFAULT_MODULE_MM
    rects: list[Rect] = []
    while len(rects) < n:
        r = Rect(round(rng.uniform(0, housing.width - m), 3),
                 round(rng.uniform(0, housing.height - m), 3), m, m)
        if all(r.distance(o) > 0 for o in rects):
            rects.append(r)
    return UeLayout(housing, tuple(ModulePlacement(f"bf{i}", r, bands) for i, r in enumerate(rects)))


def _polar(rng: random.Random, lo: float, hi: float) -> tuple[float, float]:
    d = rng.uniform(lo, hi)
    a = rng.uniform(0, 2 * math.pi)
    return (round(d * math.cos(a), 3), round(d * math.sin(a), 3))


def random_decision(rng: random.Random, cell: list[str], wigig: list[str],
                    sub6: list[str]) -> ModeDecision:
    pick = rng.choice(("cellular", "wifi", "superca", "laa"))
    if pick == "cellular":
        return ModeDecision(Mode.CELLULAR_ONLY, None, tuple(cell + sub6))
    if pick == "wifi":
        return ModeDecision(Mode.WIFI_ONLY, None, tuple(wigig))
    if pick == "laa":
        return ModeDecision(Mode.CELLULAR_AND_WIFI, AggregationClass.LAA, tuple(cell + sub6))
    return ModeDecision(Mode.CELLULAR_AND_WIFI, AggregationClass.SUPER_CA, tuple(cell + wigig + sub6))


def random_problem(rng: random.Random, max_bf: int = 6) -> AllocationProblem:
    """A random allocation instance under default radio parameters."""
    catalog = default_catalog()
    n = rng.randint(1, max_bf)
    layout = random_layout(rng, n, catalog=catalog)
    grip = rng.choice(GRIPS)
    mask = blockage_mask(layout, grip)
    fabric = FabricConfig(n, rng.randint(0, n), rng.randint(0, 1))
    cell = sorted(rng.sample(CELL_MMWAVE, rng.randint(1, 2)), key=CELL_MMWAVE.index)
    wig = sorted(rng.sample(WIGIG, rng.randint(0, 2)), key=WIGIG.index)
    sub6 = ["cell_sub6"] if rng.random() < 0.5 else []
    decision = random_decision(rng, cell, wig, sub6)
    carriers = CarrierSet.from_decision(decision, catalog)
    nodes = (
        NodeSpec("ue", NodeRole.UE, (0.0, 0.0), DEFAULT_UE_RADIO),
        NodeSpec("bs", NodeRole.BASE_STATION, _polar(rng, 30, 400), DEFAULT_BS_RADIO),
        NodeSpec("router", NodeRole.WIFI_ROUTER, _polar(rng, 2, 30), DEFAULT_ROUTER_RADIO),
    )
    return AllocationProblem(layout, adjacency(layout), mask, fabric, carriers,
                             UeLinkModel(nodes), decision)


def random_scenario_config(rng: random.Random, seed: int = 0, max_bf: int = 8) -> ScenarioConfig:
    """A random but valid end-to-end scenario config."""
    catalog = default_catalog()
    if rng.random() < 0.4:
        layout: object = rng.choice(("conventional_center", "top_bottom", "dpa_8"))
        n = {"conventional_center": 1, "top_bottom": 2, "dpa_8": 8}[layout]
    else:
        n = rng.randint(1, max_bf)
        lay = random_layout(rng, n, catalog=catalog)
        layout = {"modules": [{"id": p.id, "x": p.footprint.x, "y": p.footprint.y,
                               "w": p.footprint.w, "h": p.footprint.h} for p in lay.placements]}
    nodes = [{"id": "ue", "role": "UE", "position": [0.0, 0.0]}]
    if rng.random() < 0.9:
        nodes.append({"id": "bs", "role": "BaseStation", "position": list(_polar(rng, 20, 600))})
    if rng.random() < 0.8:
        nodes.append({"id": "router", "role": "WiFiRouter", "position": list(_polar(rng, 1, 40))})
    bands = {}
    for band in catalog:
        if rng.random() < 0.3:
            bands[band.id] = {"available": rng.random() < 0.7,
                              "occupancy": round(rng.uniform(0, 0.9), 3)}
    return parse_config({
        "schema_version": 1,
        "name": f"random-{seed}",
        "seed": seed,
        "layout": layout,
        "fabric": {"n_wigig_if": rng.randint(0, n), "n_sub6_fe": rng.randint(0, 2)},
        "nodes": nodes,
        "grip": rng.choice(GRIPS),
        "bands": bands,
        "requirement": {"min_throughput_bps": round(rng.uniform(0, 4e10), -6),
                        "max_latency_ms": round(rng.uniform(3, 30), 1),
                        "service_class": rng.choice(("eMBB", "uRLLC", "mMTC"))},
    })
