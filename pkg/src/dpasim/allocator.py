"""Joint module activation, link selection and carrier assignment.

Every BF module is either Off or serves one link: cellular to a base station
on a cellular mmWave carrier, or WiGig to a router on a WiGig channel. Cellular
IF-radios left idle by non-cellular modules can drive sub-6 GHz front ends.
Two adjacent active modules may never use the same carrier.

``brute_force_assign`` is the exact depth-first oracle; ``greedy_assign`` is
the scalable heuristic checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .blockage import BlockageMask
from .errors import ConfigError, DomainError
from .fabric import (BF_OFF, IF_OFF, FabricConfig, FabricState, cellular, to_bf, to_sub6,
                     wigig)
from .frozenmap import FrozenMap
from .layout import AdjacencyGraph, UeLayout
from .link import (DEFAULT_UE_SUB6_RX_GAIN, LinkBudgetResult, NodeRole, NodeSpec,
                   PathLossModel, RadioParams, fspl, module_link_budget)
from .modesel import Mode, ModeDecision
from .spectrum import Band, BandCatalog, Service, Tier

CELL = "cellular"
WIGIG = "wigig"
ORACLE_MAX_MODULES = 8
# Worst greedy/oracle objective ratio over the 1,000-instance calibration set
# (seeds 0..999 of ``instances.random_problem``), rounded down.
GREEDY_QUALITY_FLOOR = 0.96
CALIBRATION_SEEDS = range(1000)


@dataclass(frozen=True)
class CarrierSet:
    cellular: tuple[Band, ...] = ()
    wigig: tuple[Band, ...] = ()
    sub6: tuple[Band, ...] = ()

    @classmethod
    def from_decision(cls, decision: ModeDecision, catalog: BandCatalog) -> "CarrierSet":
        bands = [catalog[i] for i in decision.bands]
        return cls(
            cellular=tuple(b for b in bands if b.service is Service.CELLULAR and b.tier is Tier.MMWAVE),
            wigig=tuple(b for b in bands if b.service is Service.WIFI and b.tier is Tier.MMWAVE),
            sub6=tuple(b for b in bands if b.service is Service.CELLULAR and b.tier is Tier.SUB6),
        )

    def ids(self) -> dict:
        return {k: [b.id for b in getattr(self, k)] for k in ("cellular", "wigig", "sub6")}


@dataclass(frozen=True)
class LinkChoice:
    kind: str
    target: str
    carrier: Band
    budget: LinkBudgetResult
    code: int  # position in the canonical option order, 1-based (0 is Off)

    @property
    def capacity(self) -> float:
        return self.budget.capacity

    @property
    def snr(self) -> float:
        return self.budget.snr


@dataclass(frozen=True)
class Sub6Stream:
    fe: int
    cell_if: int
    target: str
    carrier: Band
    budget: LinkBudgetResult

    @property
    def capacity(self) -> float:
        return self.budget.capacity


@dataclass(frozen=True)
class Assignment:
    modules: Mapping[str, LinkChoice | None]
    sub6: tuple[Sub6Stream, ...] = ()
    objective: float = 0.0
    solver: str = ""
    infeasible_reason: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "modules", FrozenMap(self.modules))

    @property
    def feasible(self) -> bool:
        return self.infeasible_reason is None

    def active(self) -> dict[str, LinkChoice]:
        return {m: c for m, c in self.modules.items() if c is not None}

    def count(self, kind: str) -> int:
        return sum(1 for c in self.modules.values() if c is not None and c.kind == kind)

    def encoding(self) -> tuple[int, ...]:
        return tuple(0 if c is None else c.code for c in self.modules.values())

    def streams(self) -> list[LinkBudgetResult]:
        return [c.budget for c in self.modules.values() if c is not None] + [s.budget for s in self.sub6]

    def fabric_state(self, config: FabricConfig) -> FabricState:
        """The switch positions realizing this assignment (WiGig IFs in module order)."""
        if len(self.modules) != config.n_bf:
            raise ConfigError(f"assignment covers {len(self.modules)} modules, fabric has {config.n_bf}")
        modes = [BF_OFF] * config.n_bf
        routes = [IF_OFF] * config.n_cell_if
        next_wigig = 0
        for i, choice in enumerate(self.modules.values()):
            if choice is None:
                continue
            if choice.kind == CELL:
                modes[i] = cellular(i)
                routes[i] = to_bf(i)
            else:
                modes[i] = wigig(next_wigig)
                next_wigig += 1
        for s in self.sub6:
            routes[s.cell_if] = to_sub6(s.fe)
        return FabricState(tuple(modes), tuple(routes), frozenset(s.fe for s in self.sub6))

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "objective": self.objective,
            "infeasible_reason": self.infeasible_reason,
            "modules": {
                m: None if c is None else {"kind": c.kind, "target": c.target, "carrier": c.carrier.id}
                for m, c in self.modules.items()
            },
            "sub6": [{"fe": s.fe, "cell_if": s.cell_if, "target": s.target, "carrier": s.carrier.id}
                     for s in self.sub6],
        }


@dataclass(frozen=True)
class UeLinkModel:
    """Downlink budgets from network nodes to the UE's modules and front ends."""

    nodes: tuple[NodeSpec, ...]
    ue_sub6_rx_gain: float = DEFAULT_UE_SUB6_RX_GAIN
    path_loss: PathLossModel = fspl

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        ues = [n for n in self.nodes if n.role is NodeRole.UE]
        if len(ues) != 1:
            raise ConfigError(f"exactly one UE node required, found {len(ues)}", "nodes")
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ConfigError("node ids must be unique", "nodes")

    @cached_property
    def ue(self) -> NodeSpec:
        return next(n for n in self.nodes if n.role is NodeRole.UE)

    def serving_nodes(self, band: Band) -> list[NodeSpec]:
        role = NodeRole.BASE_STATION if band.service is Service.CELLULAR else NodeRole.WIFI_ROUTER
        return [n for n in self.nodes if n.role is role]

    def budget(self, node: NodeSpec, band: Band, blockage_db: float = 0.0) -> LinkBudgetResult:
        rx = self.ue.radio
        if band.tier is Tier.SUB6:
            # sub-6 front ends sit outside the BF modules: own gain, no hand mask
            rx = RadioParams(rx.tx_power, rx.tx_gain, self.ue_sub6_rx_gain, rx.noise_figure)
            blockage_db = 0.0
        distance = max(node.distance_to(self.ue), 1e-3)
        return module_link_budget(node.radio, rx, distance, band, blockage_db, self.path_loss)

    def best(self, band: Band, blockage_db: float = 0.0) -> LinkBudgetResult | None:
        """Best budget over every serving node of the band's network."""
        results = [self.budget(n, band, blockage_db) for n in self.serving_nodes(band)]
        return max(results, key=lambda r: r.snr, default=None)


@dataclass
class AllocationProblem:
    layout: UeLayout
    adjacency: AdjacencyGraph
    mask: BlockageMask
    fabric: FabricConfig
    carriers: CarrierSet
    links: UeLinkModel
    decision: ModeDecision
    min_snr_db: float = 0.0

    def __post_init__(self):
        if self.fabric.n_bf != len(self.layout):
            raise ConfigError(
                f"fabric n_bf={self.fabric.n_bf} but layout has {len(self.layout)} modules",
                "fabric.n_bf",
            )

    @property
    def module_ids(self) -> list[str]:
        return self.layout.ids

    @cached_property
    def options(self) -> list[list[LinkChoice]]:
        """Feasible link choices per module (layout order), in canonical code order."""
        out = []
        for placement in self.layout.placements:
            att = self.mask[placement.id]
            choices = []
            code = 0
            kinds = []
            if self.decision.allows_cellular:
                kinds.append((CELL, self.carriers.cellular))
            if self.decision.allows_wifi:
                kinds.append((WIGIG, self.carriers.wigig))
            for kind, bands in kinds:
                for band in bands:
                    for node in self.links.serving_nodes(band):
                        code += 1
                        if band.id not in placement.supported_band_ids:
                            continue
                        budget = self.links.budget(node, band, att)
                        if budget.snr >= self.min_snr_db and budget.capacity > 0:
                            choices.append(LinkChoice(kind, node.id, band, budget, code))
            out.append(choices)
        return out

    @cached_property
    def neighbor_index(self) -> list[list[int]]:
        index = {m: i for i, m in enumerate(self.module_ids)}
        return [sorted(index[n] for n in self.adjacency.neighbors(m)) for m in self.module_ids]

    @cached_property
    def sub6_choices(self) -> list[tuple[str, Band, LinkBudgetResult]]:
        """Sub-6 carriers with their best serving budget, best capacity first."""
        if not self.decision.allows_cellular or self.fabric.n_sub6_fe == 0:
            return []
        found = []
        for band in self.carriers.sub6:
            nodes = self.links.serving_nodes(band)
            if not nodes:
                continue
            budgets = [(n.id, self.links.budget(n, band)) for n in nodes]
            node_id, budget = max(budgets, key=lambda nb: nb[1].snr)
            if budget.snr >= self.min_snr_db and budget.capacity > 0:
                found.append((node_id, band, budget))
        # stable: carrier order breaks capacity ties
        return sorted(found, key=lambda t: -t[2].capacity)

    def sub6_streams(self, picks: Sequence[LinkChoice | None]) -> tuple[Sub6Stream, ...]:
        """Front ends driven by the lowest-numbered cellular IFs left idle by ``picks``."""
        free_ifs = [i for i, c in enumerate(picks) if c is None or c.kind != CELL]
        k = min(self.fabric.n_sub6_fe, len(free_ifs), len(self.sub6_choices))
        return tuple(
            Sub6Stream(fe, free_ifs[fe], node_id, band, budget)
            for fe, (node_id, band, budget) in zip(range(k), self.sub6_choices)
        )

    def max_sub6_capacity(self) -> float:
        return math.fsum(b.capacity for _, _, b in self.sub6_choices[: self.fabric.n_sub6_fe])

    def decision_gap(self, picks: Sequence[LinkChoice | None], n_sub6: int) -> str | None:
        """Why ``picks`` does not serve the decided mode, or None if it does."""
        n_cell = sum(1 for c in picks if c is not None and c.kind == CELL)
        n_wigig = sum(1 for c in picks if c is not None and c.kind == WIGIG)
        mode = self.decision.mode
        if mode is Mode.NO_SERVICE:
            return None if n_cell + n_wigig + n_sub6 == 0 else "NoService admits no active link"
        if mode is Mode.WIFI_ONLY:
            return None if n_wigig else "no WiGig link can be established"
        cellular_path = n_cell + n_sub6 > 0
        if mode is Mode.CELLULAR_ONLY or self.decision.is_laa:
            return None if cellular_path else "no cellular link can be established"
        if not n_wigig:
            return "Super-CA needs a WiGig link"
        return None if cellular_path else "Super-CA needs a cellular link"

    def conflicts(self, picks: Sequence[LinkChoice | None], i: int, choice: LinkChoice) -> bool:
        for j in self.neighbor_index[i]:
            other = picks[j]
            if other is not None and other.carrier.id == choice.carrier.id:
                return True
        return False

    def objective(self, picks: Sequence[LinkChoice | None], sub6: Sequence[Sub6Stream]) -> float:
        return math.fsum([c.capacity for c in picks if c is not None] + [s.capacity for s in sub6])

    def build(self, picks: Sequence[LinkChoice | None], solver: str) -> Assignment:
        sub6 = self.sub6_streams(picks)
        gap = self.decision_gap(picks, len(sub6))
        if gap is not None:
            return self.infeasible(solver, gap)
        return Assignment(dict(zip(self.module_ids, picks)), sub6,
                          self.objective(picks, sub6), solver, None)

    def infeasible(self, solver: str, reason: str) -> Assignment:
        return Assignment({m: None for m in self.module_ids}, (), 0.0, solver, reason)


def brute_force_assign(problem: AllocationProblem) -> Assignment:
    """Exact optimum by depth-first search over every module's Off/link/carrier choice.

    Branches are cut only on hard constraints or when an optimistic bound
    cannot reach the incumbent, so the search stays exhaustive in effect.
    Among equal objectives the lexicographically smallest encoding (module
    order, Off < cellular < WiGig, carriers in catalog order) wins.
    """
    n = len(problem.module_ids)
    if n > ORACLE_MAX_MODULES:
        raise DomainError(f"oracle limited to {ORACLE_MAX_MODULES} modules, got {n}")
    if problem.decision.mode is Mode.NO_SERVICE:
        return problem.build([None] * n, "oracle")

    options = problem.options
    best_tail = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        best_tail[i] = best_tail[i + 1] + max((c.capacity for c in options[i]), default=0.0)
    sub6_bound = problem.max_sub6_capacity()
    cap = problem.fabric.n_wigig_if

    picks: list[LinkChoice | None] = [None] * n
    best: dict = {"obj": -1.0, "picks": None}

    def dfs(i: int, partial: float, n_wigig: int) -> None:
        if best["picks"] is not None:
            slack = 1e-9 * max(1.0, best["obj"])
            if partial + best_tail[i] + sub6_bound < best["obj"] - slack:
                return
        if i == n:
            sub6 = problem.sub6_streams(picks)
            if problem.decision_gap(picks, len(sub6)) is not None:
                return
            obj = problem.objective(picks, sub6)
            if obj > best["obj"]:
                best["obj"] = obj
                best["picks"] = list(picks)
            return
        picks[i] = None
        dfs(i + 1, partial, n_wigig)
        for choice in options[i]:
            if choice.kind == WIGIG and n_wigig >= cap:
                continue
            if problem.conflicts(picks, i, choice):
                continue
            picks[i] = choice
            dfs(i + 1, partial + choice.capacity, n_wigig + (choice.kind == WIGIG))
            picks[i] = None

    dfs(0, 0.0, 0)
    if best["picks"] is None:
        return problem.infeasible("oracle", _infeasible_reason(problem))
    return problem.build(best["picks"], "oracle")


def _infeasible_reason(problem: AllocationProblem) -> str:
    mode = problem.decision.mode
    if mode in (Mode.WIFI_ONLY, Mode.CELLULAR_AND_WIFI) and problem.decision.allows_wifi:
        if problem.fabric.n_wigig_if == 0:
            return "no WiGig IF-radio available"
        if not problem.carriers.wigig:
            return "no WiGig carrier selected"
    if problem.decision.allows_cellular and not (problem.carriers.cellular or problem.carriers.sub6):
        return "no cellular carrier selected"
    return "no assignment satisfies the fabric, carrier and mode constraints"


def greedy_assign(problem: AllocationProblem) -> Assignment:
    """Best-first heuristic.

    Modules are visited by descending best post-blockage SNR (lower id first on
    ties). Each takes the choice with the largest objective gain that clashes
    with no already-placed neighbour and fits the WiGig IF budget; a module is
    left Off when nothing improves the objective. A final single-move repair
    tries to satisfy the decided mode (e.g. Super-CA needing both links),
    then a local search swaps one module's choice at a time, evicting clashing
    neighbours and refilling idle modules, while the objective strictly rises.
    """
    ids = problem.module_ids
    n = len(ids)
    if problem.decision.mode is Mode.NO_SERVICE:
        return problem.build([None] * n, "greedy")
    options = problem.options
    cap = problem.fabric.n_wigig_if
    order = sorted(range(n), key=lambda i: (-max((c.snr for c in options[i]), default=-math.inf), i))

    picks: list[LinkChoice | None] = [None] * n
    current = problem.objective(picks, problem.sub6_streams(picks))
    for i in order:
        n_wigig = sum(1 for c in picks if c is not None and c.kind == WIGIG)
        best_choice, best_obj = None, current
        for choice in sorted(options[i], key=lambda c: (c.carrier.center_ghz, c.code)):
            if choice.kind == WIGIG and n_wigig >= cap:
                continue
            if problem.conflicts(picks, i, choice):
                continue
            picks[i] = choice
            obj = problem.objective(picks, problem.sub6_streams(picks))
            picks[i] = None
            if obj > best_obj:
                best_choice, best_obj = choice, obj
        if best_choice is not None:
            picks[i] = best_choice
            current = best_obj

    if problem.decision_gap(picks, len(problem.sub6_streams(picks))) is not None:
        picks = _repair(problem, picks)
        if picks is None:
            return problem.infeasible("greedy", _infeasible_reason(problem))
    picks = _improve(problem, picks)
    return problem.build(picks, "greedy")


def _fill(problem: AllocationProblem, picks: list[LinkChoice | None]) -> None:
    """Repeatedly place the largest non-clashing choice on an idle module, in place."""
    cap = problem.fabric.n_wigig_if
    while True:
        n_wigig = sum(1 for c in picks if c is not None and c.kind == WIGIG)
        best, best_key = None, None
        for i, opts in enumerate(problem.options):
            if picks[i] is not None:
                continue
            for choice in opts:
                if choice.kind == WIGIG and n_wigig >= cap:
                    continue
                if problem.conflicts(picks, i, choice):
                    continue
                key = (-choice.capacity, i, choice.carrier.center_ghz, choice.code)
                if best_key is None or key < best_key:
                    best, best_key = (i, choice), key
        if best is None:
            return
        picks[best[0]] = best[1]


def _value(problem: AllocationProblem, picks: list[LinkChoice | None]) -> float | None:
    sub6 = problem.sub6_streams(picks)
    if problem.decision_gap(picks, len(sub6)) is not None:
        return None
    return problem.objective(picks, sub6)


def _improve(problem: AllocationProblem, picks: list[LinkChoice | None]) -> list[LinkChoice | None]:
    current = _value(problem, picks)
    cap = problem.fabric.n_wigig_if
    improved = True
    while improved:
        improved = False
        for i, opts in enumerate(problem.options):
            for choice in sorted(opts, key=lambda c: (c.carrier.center_ghz, c.code)):
                if picks[i] is choice or (choice.kind == WIGIG and cap == 0):
                    continue
                trial = list(picks)
                trial[i] = choice
                for j in problem.neighbor_index[i]:
                    if trial[j] is not None and trial[j].carrier.id == choice.carrier.id:
                        trial[j] = None
                if choice.kind == WIGIG and sum(1 for c in trial if c is not None and c.kind == WIGIG) > cap:
                    # free a WiGig IF by idling the weakest other WiGig module
                    others = [j for j, c in enumerate(trial) if j != i and c is not None and c.kind == WIGIG]
                    trial[min(others, key=lambda j: (trial[j].capacity, j))] = None
                _fill(problem, trial)
                value = _value(problem, trial)
                if value is not None and value > current * (1 + 1e-12):
                    picks, current, improved = trial, value, True
    return picks


def _repair(problem: AllocationProblem, picks: list[LinkChoice | None]) -> list[LinkChoice | None] | None:
    """Best single reassignment that makes ``picks`` serve the decided mode."""
    cap = problem.fabric.n_wigig_if
    best, best_obj = None, -1.0
    for i, opts in enumerate(problem.options):
        for choice in sorted(opts, key=lambda c: (c.carrier.center_ghz, c.code)):
            trial = list(picks)
            trial[i] = choice
            if sum(1 for c in trial if c is not None and c.kind == WIGIG) > cap:
                continue
            if problem.conflicts(trial, i, choice):
                continue
            sub6 = problem.sub6_streams(trial)
            if problem.decision_gap(trial, len(sub6)) is not None:
                continue
            obj = problem.objective(trial, sub6)
            if obj > best_obj:
                best, best_obj = trial, obj
    return best


def check_carrier_rule(assignment: Assignment, adjacency: AdjacencyGraph) -> list[tuple[str, str]]:
    """Adjacency edges joining two active modules on the same carrier (empty means ok)."""
    active = assignment.active()
    bad = []
    for a, b in adjacency.edge_list():
        if a in active and b in active and active[a].carrier.id == active[b].carrier.id:
            bad.append((a, b))
    return bad
