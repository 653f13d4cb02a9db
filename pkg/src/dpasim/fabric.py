"""Switch fabric multiplexing BF modules between cellular and WiGig IF-radios.

BF module ``i`` is paired with cellular IF-radio ``i`` (one IF chain per module).
Each cellular IF-radio can instead drive a sub-6 GHz front end, and any WiGig
IF-radio can attach to any BF module through the cellular/WiGig mode switch.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import TYPE_CHECKING, Iterable, Iterator

from .errors import ConfigError, DomainError, FabricStructureError

if TYPE_CHECKING:
    from .modesel import ModeDecision

CELLULAR = "cellular"
WIGIG = "wigig"
OFF = "off"
TO_BF = "bf"
TO_SUB6 = "sub6"


@dataclass(frozen=True)
class FabricConfig:
    n_bf: int
    n_wigig_if: int = 0
    n_sub6_fe: int = 0

    def __post_init__(self):
        if self.n_bf < 0 or self.n_wigig_if < 0 or self.n_sub6_fe < 0:
            raise ConfigError("fabric resource counts must be non-negative", "fabric")
        if self.n_wigig_if > self.n_bf:
            raise ConfigError(
                f"n_wigig_if={self.n_wigig_if} exceeds n_bf={self.n_bf}", "fabric.n_wigig_if"
            )

    @property
    def n_cell_if(self) -> int:
        return self.n_bf


@dataclass(frozen=True, order=True)
class BfMode:
    kind: str
    radio: int = -1

    def __str__(self) -> str:
        return OFF if self.kind == OFF else f"{self.kind}:{self.radio}"


@dataclass(frozen=True, order=True)
class IfRoute:
    kind: str
    target: int = -1

    def __str__(self) -> str:
        return OFF if self.kind == OFF else f"{self.kind}:{self.target}"


BF_OFF = BfMode(OFF)
IF_OFF = IfRoute(OFF)


# switch positions are immutable, so identical ones are shared
@lru_cache(maxsize=None)
def cellular(cell_if: int) -> BfMode:
    return BfMode(CELLULAR, cell_if)


@lru_cache(maxsize=None)
def wigig(wigig_if: int) -> BfMode:
    return BfMode(WIGIG, wigig_if)


@lru_cache(maxsize=None)
def to_bf(bf: int) -> IfRoute:
    return IfRoute(TO_BF, bf)


@lru_cache(maxsize=None)
def to_sub6(fe: int) -> IfRoute:
    return IfRoute(TO_SUB6, fe)


@dataclass(frozen=True)
class FabricState:
    bf_mode: tuple[BfMode, ...]
    cell_if_route: tuple[IfRoute, ...]
    active_sub6: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "bf_mode", tuple(self.bf_mode))
        object.__setattr__(self, "cell_if_route", tuple(self.cell_if_route))
        object.__setattr__(self, "active_sub6", frozenset(self.active_sub6))

    @property
    def active_modules(self) -> frozenset[int]:
        return frozenset(i for i, m in enumerate(self.bf_mode) if m.kind != OFF)

    def modules_in(self, kind: str) -> list[int]:
        return [i for i, m in enumerate(self.bf_mode) if m.kind == kind]

    def to_dict(self) -> dict:
        return {
            "bf_mode": [str(m) for m in self.bf_mode],
            "cell_if_route": [str(r) for r in self.cell_if_route],
            "active_sub6": sorted(self.active_sub6),
        }


def all_off(config: FabricConfig) -> FabricState:
    return FabricState((BF_OFF,) * config.n_bf, (IF_OFF,) * config.n_cell_if)


@dataclass(frozen=True)
class Violation:
    kind: str
    resources: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(self.resources)})"


def _check_structure(config: FabricConfig, state: FabricState) -> None:
    if len(state.bf_mode) != config.n_bf:
        raise FabricStructureError(f"expected {config.n_bf} BF modes, got {len(state.bf_mode)}")
    if len(state.cell_if_route) != config.n_cell_if:
        raise FabricStructureError(
            f"expected {config.n_cell_if} cellular IF routes, got {len(state.cell_if_route)}"
        )
    for i, m in enumerate(state.bf_mode):
        limit = {CELLULAR: config.n_cell_if, WIGIG: config.n_wigig_if, OFF: None}.get(m.kind, -1)
        if limit == -1:
            raise FabricStructureError(f"bf{i}: unknown mode {m.kind!r}")
        if limit is not None and not 0 <= m.radio < limit:
            raise FabricStructureError(f"bf{i}: {m.kind} IF-radio {m.radio} out of range")
    for c, r in enumerate(state.cell_if_route):
        limit = {TO_BF: config.n_bf, TO_SUB6: config.n_sub6_fe, OFF: None}.get(r.kind, -1)
        if limit == -1:
            raise FabricStructureError(f"cell_if{c}: unknown route {r.kind!r}")
        if limit is not None and not 0 <= r.target < limit:
            raise FabricStructureError(f"cell_if{c}: {r.kind} target {r.target} out of range")
    for f in state.active_sub6:
        if not 0 <= f < config.n_sub6_fe:
            raise FabricStructureError(f"sub-6 front end {f} out of range")


def validate(config: FabricConfig, state: FabricState) -> list[Violation]:
    """Return every logical violation in ``state``; an empty list means valid.

    Out-of-range ids raise :class:`FabricStructureError` instead.
    """
    _check_structure(config, state)
    out: list[Violation] = []
    feeders: dict[int, list[int]] = defaultdict(list)
    drivers: dict[int, list[int]] = defaultdict(list)
    for c, r in enumerate(state.cell_if_route):
        if r.kind == TO_BF:
            feeders[r.target].append(c)
        elif r.kind == TO_SUB6:
            drivers[r.target].append(c)

    wigig_users: dict[int, list[int]] = defaultdict(list)
    for b, m in enumerate(state.bf_mode):
        fed = feeders.get(b, [])
        ifs = tuple(f"cell_if{c}" for c in fed)
        if m.kind == OFF:
            if fed:
                out.append(Violation("orphan-route", (f"bf{b}",) + ifs))
        elif m.kind == CELLULAR:
            if m.radio != b:
                out.append(Violation("unpaired-cellular", (f"bf{b}", f"cell_if{m.radio}")))
            if m.radio not in fed:
                out.append(Violation("cellular-unfed", (f"bf{b}", f"cell_if{m.radio}")))
            extra = tuple(f"cell_if{c}" for c in fed if c != m.radio)
            if extra:
                out.append(Violation("multi-feed", (f"bf{b}",) + extra))
        else:
            wigig_users[m.radio].append(b)
            if fed:
                out.append(Violation("dual-drive", (f"bf{b}", f"wigig_if{m.radio}") + ifs))

    for w, users in sorted(wigig_users.items()):
        if len(users) > 1:
            out.append(Violation("wigig-shared", (f"wigig_if{w}",) + tuple(f"bf{b}" for b in users)))
    n_wigig_modules = sum(len(u) for u in wigig_users.values())
    if n_wigig_modules > config.n_wigig_if:
        out.append(Violation("wigig-capacity", (f"{n_wigig_modules}>{config.n_wigig_if}",)))

    for f, cs in sorted(drivers.items()):
        if len(cs) > 1:
            out.append(Violation("fe-shared", (f"fe{f}",) + tuple(f"cell_if{c}" for c in cs)))
        if f not in state.active_sub6:
            out.append(Violation("sub6-inactive", (f"fe{f}",) + tuple(f"cell_if{c}" for c in cs)))
    for f in sorted(state.active_sub6):
        if f not in drivers:
            out.append(Violation("sub6-undriven", (f"fe{f}",)))
    return out


def is_valid(config: FabricConfig, state: FabricState) -> bool:
    return not validate(config, state)


def enumerate_valid_states(config: FabricConfig, active_modules: Iterable[int],
                           active_sub6: Iterable[int] = ()) -> Iterator[FabricState]:
    """Yield every valid state whose non-Off modules and active front ends are exactly the given sets.

    Order is deterministic: per-module modes vary cellular-before-WiGig in
    module order, then WiGig IF and sub-6 driver permutations lexicographically.
    Intended for ``n_bf <= 8``; the count grows factorially with WiGig IFs.
    """
    active = sorted(set(active_modules))
    sub6 = sorted(set(active_sub6))
    if any(not 0 <= b < config.n_bf for b in active):
        raise DomainError("active module id out of range")
    if any(not 0 <= f < config.n_sub6_fe for f in sub6):
        raise DomainError("active sub-6 front end id out of range")

    for kinds in product((CELLULAR, WIGIG), repeat=len(active)):
        wigig_mods = [b for b, k in zip(active, kinds) if k == WIGIG]
        if len(wigig_mods) > config.n_wigig_if:
            continue
        cell_mods = {b for b, k in zip(active, kinds) if k == CELLULAR}
        free_ifs = [c for c in range(config.n_cell_if) if c not in cell_mods]
        for w_perm in permutations(range(config.n_wigig_if), len(wigig_mods)):
            modes = [BF_OFF] * config.n_bf
            routes = [IF_OFF] * config.n_cell_if
            for b in cell_mods:
                modes[b] = cellular(b)
                routes[b] = to_bf(b)
            for b, w in zip(wigig_mods, w_perm):
                modes[b] = wigig(w)
            for d_perm in permutations(free_ifs, len(sub6)):
                r = list(routes)
                for f, c in zip(sub6, d_perm):
                    r[c] = to_sub6(f)
                yield FabricState(tuple(modes), tuple(r), frozenset(sub6))


def state_matches_decision(state: FabricState, decision: "ModeDecision") -> bool:
    """Whether the switch configuration realizes the selected mode.

    WiFi-only excludes both cellular mmWave modules and sub-6 front ends. LAA
    keeps its unlicensed carriers on the cellular interface, so it needs a
    cellular path but no WiGig module; Super-CA needs a WiGig module plus a
    cellular path (mmWave or sub-6).
    """
    from .modesel import Mode

    n_cell = len(state.modules_in(CELLULAR))
    n_wigig = len(state.modules_in(WIGIG))
    n_sub6 = len(state.active_sub6)
    mode = decision.mode
    if mode is Mode.NO_SERVICE:
        return n_cell == n_wigig == n_sub6 == 0
    if mode is Mode.CELLULAR_ONLY:
        return n_wigig == 0
    if mode is Mode.WIFI_ONLY:
        return n_cell == 0 and n_sub6 == 0
    if decision.is_laa:
        return n_wigig == 0 and n_cell + n_sub6 > 0
    return n_wigig > 0 and n_cell + n_sub6 > 0


def states_for_decision(config: FabricConfig, decision: "ModeDecision",
                        active_modules: Iterable[int],
                        active_sub6: Iterable[int] = ()) -> Iterator[FabricState]:
    for state in enumerate_valid_states(config, active_modules, active_sub6):
        if state_matches_decision(state, decision):
            yield state
