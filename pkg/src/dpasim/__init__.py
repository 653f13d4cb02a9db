"""Multiplexed DPA-MIMO cellular/WiFi user-equipment simulator."""

from .allocator import brute_force_assign, check_carrier_rule, greedy_assign
from .blockage import GripScenario, blockage_mask, occlusion_zones
from .config import build_scenario, hetnet_config, load_config
from .errors import ConfigError, DomainError, FabricStructureError
from .fabric import FabricConfig, FabricState, enumerate_valid_states, states_for_decision, validate
from .layout import adjacency, edge_to_edge_distance, preset, validate_spacing
from .link import aggregate_capacity, fspl, module_link_budget, noise_floor, shannon_capacity
from .modesel import availability, decide, sense
from .scenario import compare_layouts, run, sweep
from .spectrum import classify_aggregation, default_catalog, wavelength

__all__ = [
    "ConfigError", "DomainError", "FabricConfig", "FabricState", "FabricStructureError",
    "GripScenario", "adjacency", "aggregate_capacity", "availability", "blockage_mask",
    "brute_force_assign", "build_scenario", "check_carrier_rule", "classify_aggregation",
    "compare_layouts", "decide", "default_catalog", "edge_to_edge_distance",
    "enumerate_valid_states", "fspl", "greedy_assign", "hetnet_config", "load_config",
    "module_link_budget", "noise_floor", "occlusion_zones", "preset", "run", "sense",
    "shannon_capacity", "states_for_decision", "sweep", "validate", "validate_spacing",
    "wavelength",
]

__version__ = "0.1.0"
