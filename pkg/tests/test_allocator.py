import math

import pytest
from hypothesis import given, settings, strategies as st

from dpasim.allocator import (GREEDY_QUALITY_FLOOR, AllocationProblem, Assignment, CarrierSet,
                              UeLinkModel, brute_force_assign, check_carrier_rule, greedy_assign)
from dpasim.blockage import blockage_mask
from dpasim.errors import ConfigError, DomainError
from dpasim.fabric import FabricConfig, state_matches_decision, validate
from dpasim.instances import random_problem, rng_for
from dpasim.layout import HousingSpec, ModulePlacement, Rect, UeLayout, adjacency, preset
from dpasim.link import shannon_capacity, DEFAULT_BS_RADIO, DEFAULT_ROUTER_RADIO, DEFAULT_UE_RADIO, NodeRole, NodeSpec
from dpasim.modesel import Mode, ModeDecision
from dpasim.spectrum import AggregationClass, default_catalog

CAT = default_catalog()
NODES = (
    NodeSpec("ue", NodeRole.UE, (0.0, 0.0), DEFAULT_UE_RADIO),
    NodeSpec("bs", NodeRole.BASE_STATION, (100.0, 0.0), DEFAULT_BS_RADIO),
    NodeSpec("router", NodeRole.WIFI_ROUTER, (0.0, 5.0), DEFAULT_ROUTER_RADIO),
)
MM = frozenset(b.id for b in CAT if b.tier.value == "mmwave")


def layout_of(*xy):
    return UeLayout(HousingSpec(), tuple(ModulePlacement(f"bf{i}", Rect(x, y, 12, 12), MM)
                                         for i, (x, y) in enumerate(xy)))


def problem(layout, bands, mode=Mode.CELLULAR_ONLY, agg=None, grip="FreeSpace",
            n_wigig=0, n_fe=0, nodes=NODES):
    decision = ModeDecision(mode, agg, tuple(bands))
    return AllocationProblem(layout, adjacency(layout), blockage_mask(layout, grip),
                             FabricConfig(len(layout), n_wigig, n_fe),
                             CarrierSet.from_decision(decision, CAT), UeLinkModel(nodes), decision)


def checked(p, a):
    assert check_carrier_rule(a, p.adjacency) == []
    state = a.fabric_state(p.fabric)
    assert validate(p.fabric, state) == []
    if a.feasible:
        assert state_matches_decision(state, p.decision)
    return a


def test_single_module_single_carrier():
    p = problem(layout_of((30, 60)), ["cell_28"])
    a = brute_force_assign(p)
    assert a.active()["bf0"].carrier.id == "cell_28"
    assert a.objective == p.options[0][0].capacity


def test_adjacent_pair_one_carrier():
    p = problem(layout_of((10, 60), (40, 60)), ["cell_28"])
    assert p.adjacency.has_edge("bf0", "bf1")
    a = checked(p, brute_force_assign(p))
    assert len(a.active()) == 1


def test_adjacent_pair_two_carriers():
    p = problem(layout_of((10, 60), (40, 60)), ["cell_28", "cell_39"])
    a = checked(p, brute_force_assign(p))
    carriers = {c.carrier.id for c in a.active().values()}
    assert carriers == {"cell_28", "cell_39"}


def test_non_adjacent_greedy_equals_oracle():
    lay = layout_of((0, 0), (63, 0), (0, 138), (63, 138), (31, 69))
    assert not adjacency(lay).edges
    for bands in (["cell_28"], ["cell_28", "cell_u71"], ["cell_37", "wigig_ch1"]):
        mode = Mode.CELLULAR_ONLY if len(bands) < 2 or "wigig_ch1" not in bands else Mode.CELLULAR_AND_WIFI
        agg = AggregationClass.SUPER_CA if mode is Mode.CELLULAR_AND_WIFI else None
        for grip in ("FreeSpace", "OneHandCenter", "TwoHandLandscape"):
            p = problem(lay, bands, mode, agg, grip, n_wigig=5)
            g, o = greedy_assign(p), brute_force_assign(p)
            assert g.objective == o.objective
            assert g.encoding() == o.encoding()


def test_dpa8_two_carriers_full_coloring():
    lay = preset("dpa_8")
    p = problem(lay, ["cell_28", "cell_u71"])
    for solver in (greedy_assign, brute_force_assign):
        a = checked(p, solver(p))
        assert len(a.active()) == 8
        colors = {m: c.carrier.id for m, c in a.active().items()}
        for u, v in p.adjacency.edge_list():
            assert colors[u] != colors[v]


def test_top_bottom_two_hand_penalty():
    lay = preset("top_bottom")
    free = greedy_assign(problem(lay, ["cell_28"]))
    held = problem(lay, ["cell_28"], grip="TwoHandLandscape")
    blocked = greedy_assign(held)
    assert len(free.active()) == len(blocked.active()) == 2
    for m, c in blocked.active().items():
        assert free.active()[m].snr - c.snr == pytest.approx(35)
    # each stream loses exactly what a 35 dB SNR drop costs
    expected = math.fsum(shannon_capacity(c.carrier.bandwidth_hz, c.snr - 35)
                         for c in free.active().values())
    assert blocked.objective == pytest.approx(expected, rel=1e-12)
    assert blocked.objective < free.objective


def test_carrier_rule_examples():
    lay = layout_of((10, 60), (40, 60))
    g = adjacency(lay)
    p = problem(lay, ["cell_28"])
    off = Assignment({"bf0": None, "bf1": None})
    assert check_carrier_rule(off, g) == []
    c = p.options[0][0]
    bad = Assignment({"bf0": c, "bf1": p.options[1][0]})
    assert check_carrier_rule(bad, g) == [("bf0", "bf1")]


def test_wifi_only_without_wigig_if_is_infeasible():
    p = problem(layout_of((30, 60)), ["wigig_ch1"], Mode.WIFI_ONLY)
    for solver in (greedy_assign, brute_force_assign):
        a = solver(p)
        assert not a.feasible
        assert a.infeasible_reason == "no WiGig IF-radio available"
        assert a.objective == 0


def test_superca_needs_both_kinds():
    lay = layout_of((10, 60), (40, 60))
    p = problem(lay, ["cell_u71", "wigig_ch1"], Mode.CELLULAR_AND_WIFI,
                AggregationClass.SUPER_CA, n_wigig=2)
    for solver in (greedy_assign, brute_force_assign):
        a = checked(p, solver(p))
        assert a.count("cellular") >= 1 and a.count("wigig") >= 1


def test_wigig_cap_respected():
    lay = preset("dpa_8")
    p = problem(lay, ["wigig_ch1", "wigig_ch2"], Mode.WIFI_ONLY, n_wigig=3)
    for solver in (greedy_assign, brute_force_assign):
        a = checked(p, solver(p))
        assert a.count("wigig") == 3


def test_sub6_streams_use_idle_ifs():
    lay = layout_of((30, 60))
    p = problem(lay, ["cell_sub6", "wigig_ch1"], Mode.CELLULAR_AND_WIFI,
                AggregationClass.SUPER_CA, n_wigig=1, n_fe=1)
    a = checked(p, brute_force_assign(p))
    assert a.count("wigig") == 1
    (s,) = a.sub6
    assert (s.fe, s.cell_if, s.carrier.id) == (0, 0, "cell_sub6")


def test_oracle_limit():
    lay = UeLayout(HousingSpec(200, 200), tuple(
        ModulePlacement(f"bf{i}", Rect(20 * (i % 3) * 3, 60 * (i // 3), 12, 12), MM) for i in range(9)))
    with pytest.raises(DomainError):
        brute_force_assign(problem(lay, ["cell_28"]))


def test_problem_checks_fabric_size():
    lay = layout_of((30, 60))
    d = ModeDecision(Mode.CELLULAR_ONLY, None, ("cell_28",))
    with pytest.raises(ConfigError):
        AllocationProblem(lay, adjacency(lay), blockage_mask(lay, "FreeSpace"), FabricConfig(2),
                          CarrierSet.from_decision(d, CAT), UeLinkModel(NODES), d)


def test_link_model_needs_one_ue():
    with pytest.raises(ConfigError):
        UeLinkModel(NODES[1:])


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_oracle_dominance_and_constraints(seed):
    p = random_problem(rng_for(seed))
    g, o = greedy_assign(p), brute_force_assign(p)
    checked(p, g)
    checked(p, o)
    assert g.objective <= o.objective
    assert g.feasible <= o.feasible


def test_oracle_is_exhaustive_on_small_instances():
    # independent full enumeration of per-module choices
    import itertools
    for seed in range(40):
        p = random_problem(rng_for(seed), max_bf=4)
        best = -1.0
        for picks in itertools.product(*[[None] + list(o) for o in p.options]):
            picks = list(picks)
            if sum(1 for c in picks if c is not None and c.kind == "wigig") > p.fabric.n_wigig_if:
                continue
            if any(picks[i] is not None and p.conflicts(picks, i, picks[i]) for i in range(len(picks))):
                continue
            a = p.build(picks, "enum")
            if a.feasible:
                best = max(best, a.objective)
        o = brute_force_assign(p)
        if best < 0:
            assert not o.feasible
        else:
            assert o.objective == pytest.approx(best, rel=1e-12)


def test_solvers_are_deterministic():
    for seed in range(20):
        a = greedy_assign(random_problem(rng_for(seed)))
        b = greedy_assign(random_problem(rng_for(seed)))
        assert a == b
        assert brute_force_assign(random_problem(rng_for(seed))) == brute_force_assign(random_problem(rng_for(seed)))


def test_quality_floor_sample():
    # the full 1,000-instance run lives in the acceptance suite
    worst = 1.0
    for seed in range(100):
        p = random_problem(rng_for(seed))
        o = brute_force_assign(p)
        if o.feasible and o.objective > 0:
            worst = min(worst, greedy_assign(p).objective / o.objective)
    assert worst >= GREEDY_QUALITY_FLOOR


def test_assignment_to_dict():
    p = problem(layout_of((30, 60)), ["cell_28"])
    d = brute_force_assign(p).to_dict()
    assert d["modules"]["bf0"] == {"kind": "cellular", "target": "bs", "carrier": "cell_28"}
    assert d["solver"] == "oracle"
