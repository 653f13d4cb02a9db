"""End-to-end pipeline: blockage, sensing, mode decision, allocation, budgets."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable, Sequence

from .allocator import (AllocationProblem, Assignment, CarrierSet, UeLinkModel,
                        brute_force_assign, check_carrier_rule, greedy_assign)
from .blockage import BlockageMask, GripScenario, blockage_mask
from .config import (Scenario, ScenarioConfig, build_scenario, parse_config, set_path,
                     with_overrides)
from .errors import ConfigError, DpaSimError
from .fabric import FabricState, state_matches_decision, states_for_decision, validate
from .layout import PRESETS, adjacency
from .link import LinkBudgetResult
from .modesel import (Mode, ModeDecision, NetworkAvailability, SpectrumReport, availability,
                      decide, sense)
from .spectrum import Band, Tier

BLOCKED_THRESHOLD_DB = 30.0
ORACLE_PIPELINE_MAX_MODULES = 6
SIGNIFICANT_DIGITS = 6


@dataclass(frozen=True)
class ModuleMetrics:
    attenuation_db: float
    kind: str | None = None
    target: str | None = None
    carrier: str | None = None
    snr_db: float | None = None
    capacity: float = 0.0


@dataclass(frozen=True)
class MetricsReport:
    name: str
    seed: int
    spectrum: SpectrumReport
    availability: NetworkAvailability
    decision: ModeDecision
    carriers: CarrierSet
    fabric_state: FabricState | None
    assignment: Assignment
    modules: dict[str, ModuleMetrics]
    sub6: tuple[dict, ...]
    aggregate_capacity: float
    blocked_module_count: int
    infeasibility: str | None = None

    def stream_capacities(self) -> list[float]:
        return [m.capacity for m in self.modules.values() if m.kind] + [s["capacity"] for s in self.sub6]

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "name": self.name,
            "seed": self.seed,
            "spectrum": self.spectrum.to_dict(),
            "availability": self.availability.to_dict(),
            "decision": self.decision.to_dict(),
            "carriers": self.carriers.ids(),
            "fabric_state": None if self.fabric_state is None else self.fabric_state.to_dict(),
            "assignment": self.assignment.to_dict(),
            "modules": {k: vars(v).copy() for k, v in self.modules.items()},
            "sub6": [dict(s) for s in self.sub6],
            "aggregate_capacity": self.aggregate_capacity,
            "blocked_module_count": self.blocked_module_count,
            "infeasibility": self.infeasibility,
        }

    def to_json(self) -> str:
        return dumps_canonical(self.to_dict())

    def to_csv(self) -> str:
        return rows_to_csv(self.csv_rows())

    def csv_rows(self) -> list[dict]:
        rows = []
        for mid, m in self.modules.items():
            rows.append({"scenario": self.name, "stream": mid, "kind": m.kind or "off",
                         "target": m.target or "", "carrier": m.carrier or "",
                         "attenuation_db": m.attenuation_db, "snr_db": m.snr_db,
                         "capacity_bps": m.capacity})
        for s in self.sub6:
            rows.append({"scenario": self.name, "stream": f"fe{s['fe']}", "kind": "sub6",
                         "target": s["target"], "carrier": s["carrier"], "attenuation_db": 0.0,
                         "snr_db": s["snr_db"], "capacity_bps": s["capacity"]})
        return rows


def canonical(value: Any) -> Any:
    """Round floats to six significant digits; non-finite floats become None."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        rounded = float(f"{value:.{SIGNIFICANT_DIGITS}g}")
        return 0.0 if rounded == 0 else rounded
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    return value


def dumps_canonical(data: Any) -> str:
    return json.dumps(canonical(data), sort_keys=True, indent=2) + "\n"


CSV_FIELDS = ["scenario", "stream", "kind", "target", "carrier", "attenuation_db", "snr_db",
              "capacity_bps"]


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else canonical(v)) for k, v in row.items()})
    return buf.getvalue()


def make_estimator(links: UeLinkModel, scenario: Scenario, mask: BlockageMask):
    """Best single-stream budget per band: least-blocked module supporting it."""
    placements = scenario.layout.placements

    def estimate(band: Band) -> LinkBudgetResult | None:
        if band.tier is Tier.SUB6:
            return links.best(band)
        usable = [mask[p.id] for p in placements if band.id in p.supported_band_ids]
        if not usable:
            return None
        return links.best(band, min(usable))

    return estimate


def fabric_supports(scenario: Scenario, decision: ModeDecision) -> bool:
    """Whether some small activation has a fabric state realizing ``decision``."""
    fabric = scenario.fabric
    trials = [((), ()), ((0,), ()), ((0, 1), ()), ((0,), (0,)), ((), (0,))]
    for mods, fes in trials:
        if any(m >= fabric.n_bf for m in mods) or any(f >= fabric.n_sub6_fe for f in fes):
            continue
        if not mods and not fes:
            continue
        if next(states_for_decision(fabric, decision, mods, fes), None) is not None:
            return True
    return False


def run(config: Any, oracle: bool = False) -> MetricsReport:
    """Run one scenario. Invalid configs raise ConfigError; infeasibility is reported."""
    scenario = build_scenario(config)
    cfg = scenario.config
    knobs = scenario.knobs
    layout = scenario.layout

    mask = blockage_mask(layout, scenario.grip, scenario.blockage)
    links = UeLinkModel(scenario.nodes, knobs.ue_sub6_rx_gain_dbi)
    estimate = make_estimator(links, scenario, mask)
    spectrum = sense(scenario.ground_truth, scenario.catalog)
    avail = availability(spectrum, scenario.nodes, scenario.catalog, estimate,
                         knobs.access_threshold_db)
    decision = decide(avail, spectrum, scenario.requirement, estimate, scenario.catalog,
                      scenario.latency)
    graph = adjacency(layout, knobs.adjacency_threshold_mm)
    carriers = CarrierSet.from_decision(decision, scenario.catalog)
    problem = AllocationProblem(layout, graph, mask, scenario.fabric, carriers, links, decision,
                                knobs.min_link_snr_db)

    if decision.mode is Mode.NO_SERVICE:
        assignment = problem.infeasible("none", "no network reachable")
    elif not fabric_supports(scenario, decision):
        assignment = problem.infeasible("none", f"fabric cannot realize {decision.label}")
    elif oracle and len(layout) <= ORACLE_PIPELINE_MAX_MODULES:
        assignment = brute_force_assign(problem)
    else:
        assignment = greedy_assign(problem)

    state = assignment.fabric_state(scenario.fabric)
    _reassert(scenario, graph, decision, assignment, state)

    modules = {}
    for mid, choice in assignment.modules.items():
        att = mask[mid]
        if choice is None:
            modules[mid] = ModuleMetrics(att)
        else:
            modules[mid] = ModuleMetrics(att, choice.kind, choice.target, choice.carrier.id,
                                         choice.snr, choice.capacity)
    sub6 = tuple({"fe": s.fe, "cell_if": s.cell_if, "target": s.target, "carrier": s.carrier.id,
                  "snr_db": s.budget.snr, "capacity": s.capacity} for s in assignment.sub6)
    return MetricsReport(
        name=cfg.name,
        seed=cfg.seed,
        spectrum=spectrum,
        availability=avail,
        decision=decision,
        carriers=carriers,
        fabric_state=state if assignment.feasible else None,
        assignment=assignment,
        modules=modules,
        sub6=sub6,
        aggregate_capacity=assignment.objective,
        blocked_module_count=len(mask.at_least(BLOCKED_THRESHOLD_DB)),
        infeasibility=assignment.infeasible_reason,
    )


def _reassert(scenario: Scenario, graph, decision: ModeDecision, assignment: Assignment,
              state: FabricState) -> None:
    bad = check_carrier_rule(assignment, graph)
    if bad:
        raise AssertionError(f"carrier rule violated on {bad}")
    problems = validate(scenario.fabric, state)
    if problems:
        raise AssertionError(f"fabric state invalid: {[str(p) for p in problems]}")
    if assignment.feasible and not state_matches_decision(state, decision):
        raise AssertionError(f"fabric state does not realize {decision.label}")


@dataclass(frozen=True)
class CompareRow:
    layout: str
    grip: str
    decision: str
    aggregate_capacity: float
    blocked_module_count: int
    active_streams: int
    stream_snr_db: tuple[float, ...] = field(default=())

    def to_dict(self) -> dict:
        d = vars(self).copy()
        d["stream_snr_db"] = list(self.stream_snr_db)
        return d


def compare_layouts(grips: Sequence[str | GripScenario], base: Any,
                    layouts: Sequence[str] = PRESETS, oracle: bool = False) -> list[CompareRow]:
    """Run ``base`` for every preset layout and grip (layout-major order)."""
    base_cfg = parse_config(base)
    rows = []
    for name, grip in product(layouts, grips):
        grip = GripScenario(grip).value
        n = len(build_scenario(with_overrides(base_cfg, {"layout": name, "fabric.n_bf": None})).layout)
        overrides = {
            "layout": name,
            "grip": grip,
            "fabric.n_bf": None,
            "fabric.n_wigig_if": min(base_cfg.fabric.n_wigig_if, n),
        }
        report = run(with_overrides(base_cfg, overrides), oracle=oracle)
        snrs = tuple(m.snr_db for m in report.modules.values() if m.kind)
        rows.append(CompareRow(name, grip, report.decision.label, report.aggregate_capacity,
                               report.blocked_module_count, len(report.assignment.active())
                               + len(report.sub6), snrs))
    return rows


COMPARE_FIELDS = ["layout", "grip", "decision", "aggregate_capacity", "blocked_module_count",
                  "active_streams"]


def compare_to_csv(rows: Sequence[CompareRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COMPARE_FIELDS, lineterminator="\n",
                            extrasaction="ignore")
    writer.writeheader()
    for r in rows:
        writer.writerow(canonical(r.to_dict()))
    return buf.getvalue()


@dataclass(frozen=True)
class SweepFailure:
    index: int
    error: str
    path: str | None = None

    def to_dict(self) -> dict:
        return {"index": self.index, "error": self.error, "path": self.path}


def _run_one(item: tuple[int, Any, bool]) -> MetricsReport | SweepFailure:
    index, cfg, oracle = item
    try:
        return run(cfg, oracle=oracle)
    except ConfigError as err:
        return SweepFailure(index, err.message, err.path)
    except DpaSimError as err:
        return SweepFailure(index, str(err))


def sweep(configs: Iterable[Any], workers: int = 1,
          oracle: bool = False) -> list[MetricsReport | SweepFailure]:
    """Run independent scenarios; results keep input order and errors are collected."""
    items = [(i, cfg.to_dict() if isinstance(cfg, ScenarioConfig) else cfg, oracle)
             for i, cfg in enumerate(configs)]
    if workers <= 1 or len(items) <= 1:
        return [_run_one(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, items))


def expand_grid(base: Any, grid: dict[str, list]) -> list[dict]:
    """Cartesian product of dotted-path overrides, first key varying slowest."""
    base_cfg = parse_config(base)
    if not grid:
        return []
    keys = list(grid)
    for key in keys:
        if not isinstance(grid[key], list) or not grid[key]:
            raise ConfigError("grid axes must be non-empty lists", f"grid.{key}")
    out = []
    for values in product(*(grid[k] for k in keys)):
        data = base_cfg.to_dict()
        for k, v in zip(keys, values):
            set_path(data, k, v)
        out.append(data)
    return out


def sweep_to_json(results: Sequence[MetricsReport | SweepFailure]) -> str:
    return dumps_canonical([r.to_dict() if isinstance(r, SweepFailure) else
                            {"error": None, **r.to_dict()} for r in results])
