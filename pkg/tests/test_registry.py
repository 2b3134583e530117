import json

import pytest

from calgrass.registry import Registry, RegistryError, default_registry

REG = default_registry()
SECTIONS = ["homology", "homotopy", "poincare_polynomials", "rings", "ring_homs", "duality_pairings",
            "acceptance"]


@pytest.mark.parametrize("section", SECTIONS)
def test_every_entry_carries_a_citation(section):
    keys = REG.keys(section)
    assert keys
    assert all(REG.citation(section, k) for k in keys)


def test_every_scenario_loads_with_citation():
    for name in REG.scenario_names():
        s = REG.scenario(name)
        assert s.name == name and s.citation


def test_homology_lists_have_declared_length():
    for key in REG.keys("homology"):
        assert len(REG.homology(key)) == REG.space(key)["dim"] + 1


def test_unknown_key_lists_options():
    with pytest.raises(RegistryError, match="available: .*g3r6"):
        REG.homology("nope")
    with pytest.raises(RegistryError):
        REG.scenario("nope")


def test_override_registry(tmp_path):
    data = dict(REG.data)
    data["homology"] = {"pt": {"groups": ["Z"], "dim": 0, "citation": "point"}}
    path = tmp_path / "reg.json"
    path.write_text(json.dumps(data))
    reg = Registry.load(path)
    assert reg.keys("homology") == ["pt"]
    with pytest.raises(ValueError, match="missing"):
        Registry({"homology": {}})
    # bundled corpora stay reachable
    assert reg.complex("rp2").homology()[1].torsion == (2,)
