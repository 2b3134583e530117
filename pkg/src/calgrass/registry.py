"""Tables of groups, rings and scenarios shipped with the package.

The default registry lives in ``data/papertables.json`` next to the
scenario and chain-complex corpora.  Another file with the same layout can
be loaded with :meth:`Registry.load`; scenarios and complexes are then
looked up relative to that file first.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .fgab import ChainComplex, FgAbGroup, group_list
from .ring import TruncatedRing
from .spectral import FibrationScenario

_SECTIONS = ("homology", "homotopy", "rings")


def _data_dir() -> Path:
    return Path(str(resources.files("calgrass") / "data"))


class RegistryError(KeyError):
    pass


class Registry:
    def __init__(self, data: dict, root: Path | None = None):
        self.data = data
        self.root = root
        for section in _SECTIONS:
            if section not in data:
                raise ValueError(f"registry is missing the {section!r} section")

    @classmethod
    def load(cls, path=None) -> "Registry":
        path = Path(path) if path is not None else _data_dir() / "papertables.json"
        return cls(json.loads(path.read_text()), path.parent)

    def _entry(self, section: str, key: str) -> dict:
        table = self.data.get(section, {})
        if key not in table:
            raise RegistryError(f"no {section} entry {key!r}; available: {', '.join(sorted(table))}")
        return table[key]

    def keys(self, section: str) -> list[str]:
        return sorted(self.data.get(section, {}))

    def citation(self, section: str, key: str) -> str:
        return self._entry(section, key).get("citation", "")

    # groups
    def homology(self, key: str) -> list[FgAbGroup]:
        return group_list(self._entry("homology", key)["groups"])

    def homotopy(self, key: str) -> list[FgAbGroup]:
        return group_list(self._entry("homotopy", key)["groups"])

    def space(self, key: str) -> dict:
        return self._entry("homology", key)

    def poincare_polynomial(self, key: str) -> str:
        return self._entry("poincare_polynomials", key)["polynomial"]

    # rings
    def ring(self, key: str) -> TruncatedRing:
        return TruncatedRing.from_dict(self._entry("rings", key), name=key)

    def ring_entry(self, key: str) -> dict:
        return self._entry("rings", key)

    def ring_hom(self, key: str) -> tuple[dict, TruncatedRing, TruncatedRing]:
        e = self._entry("ring_homs", key)
        return dict(e["map"]), self.ring(e["source"]), self.ring(e["target"])

    def duality_pairing(self, key: str) -> dict:
        return self._entry("duality_pairings", key)

    # corpora
    def _find(self, sub: str, name: str) -> Path:
        candidates = []
        if self.root is not None:
            candidates.append(self.root / sub / f"{name}.json")
        candidates.append(_data_dir() / sub / f"{name}.json")
        for c in candidates:
            if c.exists():
                return c
        raise RegistryError(f"no {sub[:-1]} named {name!r}")

    def scenario_names(self) -> list[str]:
        return list(self.data.get("scenarios", []))

    def scenario(self, name: str) -> FibrationScenario:
        return FibrationScenario.load(self._find("scenarios", name))

    def complex(self, name: str) -> ChainComplex:
        return ChainComplex.from_json(self._find("complexes", name).read_text())


def default_registry() -> Registry:
    return Registry.load()
