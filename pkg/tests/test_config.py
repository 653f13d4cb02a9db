import pytest

from conftest import CONFIGS
from dpasim.config import (build_scenario, compare_base_config, dump_config, hetnet_config,
                           load_config, parse_config, superca_config, with_overrides)
from dpasim.errors import ConfigError


@pytest.mark.parametrize("name,builder", [("hetnet", hetnet_config), ("superca", superca_config),
                                          ("compare", compare_base_config)])
def test_shipped_configs_match_builders(name, builder):
    assert load_config(CONFIGS / f"{name}.yaml") == builder()


def test_dump_roundtrip():
    cfg = hetnet_config()
    import yaml
    assert parse_config(yaml.safe_load(dump_config(cfg))) == cfg


def base():
    return hetnet_config().to_dict()


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d.pop("schema_version"), "schema_version"),
    (lambda d: d.update(schema_version=2), "schema_version"),
    (lambda d: d.update(colour="blue"), "colour"),
    (lambda d: d["fabric"].update(turbo=True), "fabric.turbo"),
    (lambda d: d.update(grip="Pocket"), "grip"),
    (lambda d: d["requirement"].update(max_latency_ms=0), "requirement.max_latency_ms"),
    (lambda d: d["knobs"].update(full_blockage_db=45) if "knobs" in d else d.update(knobs={"full_blockage_db": 45}),
     "knobs.full_blockage_db"),
])
def test_schema_errors_carry_paths(mutate, path):
    d = base()
    mutate(d)
    with pytest.raises(ConfigError) as err:
        build_scenario(d)
    assert err.value.path == path


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d["fabric"].update(n_wigig_if=9), "fabric.n_wigig_if"),
    (lambda d: d["fabric"].update(n_bf=3), "fabric.n_bf"),
    (lambda d: d["bands"].update(cell_99={"available": True}), "bands.cell_99"),
    (lambda d: d.update(nodes=[n for n in d["nodes"] if n["role"] != "UE"]), "nodes"),
    (lambda d: d.update(layout={"modules": [{"id": "a", "x": 0, "y": 0, "w": 10, "h": 10, "bands": ["nope"]}]}),
     "layout.modules.0.bands"),
    (lambda d: d.update(layout={"modules": [{"id": "a", "x": 70, "y": 0, "w": 10, "h": 10}]}), "layout"),
])
def test_cross_field_errors(mutate, path):
    d = base()
    mutate(d)
    with pytest.raises(ConfigError) as err:
        build_scenario(d)
    assert err.value.path == path


def test_not_a_mapping(tmp_path):
    p = tmp_path / "x.yaml"
    p.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")
    p.write_text("a: [1, 2\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_json_documents_load(tmp_path):
    import json
    p = tmp_path / "hetnet.json"
    p.write_text(json.dumps(base()))
    assert load_config(p) == hetnet_config()


def test_overrides():
    cfg = with_overrides(hetnet_config(), {"grip": "FreeSpace", "nodes.1.position": [50.0, 0.0]})
    assert cfg.grip == "FreeSpace"
    assert cfg.nodes[1].position == (50.0, 0.0)
    with pytest.raises(ConfigError):
        with_overrides(hetnet_config(), {"grip": "Pocket"})


def test_custom_catalog_and_explicit_layout():
    d = base()
    d["catalog"] = [
        {"id": "c28", "service": "cellular", "regime": "licensed", "center_ghz": 28, "bandwidth_mhz": 400},
        {"id": "w60", "service": "wifi", "regime": "unlicensed", "center_ghz": 60.48, "bandwidth_mhz": 2160},
    ]
    d["bands"] = {}
    d["layout"] = {"modules": [{"id": "a", "x": 5, "y": 5, "w": 12, "h": 12},
                               {"id": "b", "x": 50, "y": 120, "w": 12, "h": 12, "bands": ["c28"]}]}
    sc = build_scenario(d)
    assert sc.catalog.ids() == ["c28", "w60"]
    assert sc.layout.placements[0].supported_band_ids == {"c28", "w60"}
    assert sc.fabric.n_bf == 2
