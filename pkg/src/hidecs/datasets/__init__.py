"""Embedded data: the Indian Village and Community & Privacy tables plus reference partitions.

Tables are transcribed as printed, one-way entries included.  A SHA-256
over each canonical serialization guards against transcription drift.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Mapping

from ..graph import AsymmetryReport, Graph, Partition, RawInteractionTable, parse_interactions, symmetrize

DATASETS = {
    "indian-village": ("indian_village.txt", "indian_village_requirements.json"),
    "community-privacy": ("community_privacy.txt", "community_privacy_requirements.json"),
}

# sha256 of RawInteractionTable.to_text() for each dataset
CHECKSUMS = {
    "indian-village": "0809b5ac04f2998b751e1ed275ba1ad0fc1d70b718ffde848e80d5b67094563b",
    "community-privacy": "4ac8b5c6ba701fe44de6d8fb1c7ba594dccff47bcf614342d5f0584cf69437c3",
}


@dataclass(frozen=True)
class DatasetBundle:
    name: str
    requirements: Mapping[int, str]
    groups: tuple[tuple[str, tuple[int, ...]], ...]
    raw: RawInteractionTable
    provenance: str

    def symmetrize(self, promote: bool = False) -> tuple[Graph, AsymmetryReport]:
        return symmetrize(self.raw, promote=promote, labels=dict(self.requirements))

    @property
    def graph(self) -> Graph:
        return self.symmetrize()[0]

    def checksum(self) -> str:
        return table_checksum(self.raw)


def table_checksum(raw: RawInteractionTable) -> str:
    return hashlib.sha256(raw.to_text().encode("utf-8")).hexdigest()


def _read(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")


def dataset_names() -> list[str]:
    return list(DATASETS)


@lru_cache(maxsize=None)
def load_dataset(name: str) -> DatasetBundle:
    if name not in DATASETS:
        raise ValueError(f"unknown dataset {name!r}; choose from {', '.join(DATASETS)}")
    table_file, req_file = DATASETS[name]
    text = _read(table_file)
    raw = parse_interactions(text)
    meta = json.loads(_read(req_file))
    reqs = {int(k): v for k, v in meta["requirements"].items()}
    groups = tuple((g["name"], tuple(g["ids"])) for g in meta["groups"])
    provenance = next((ln.lstrip("# ").strip() for ln in text.splitlines() if ln.startswith("#")), "")
    bundle = DatasetBundle(name, reqs, groups, raw, provenance)
    expected = CHECKSUMS.get(name)
    if expected and bundle.checksum() != expected:
        raise RuntimeError(f"embedded dataset {name} failed its checksum")
    return bundle


@dataclass(frozen=True)
class ReferencePartitions:
    ca_letters: Partition
    ca_minor: Partition
    ca_pi1: Partition
    rpg1_pi4: Partition
    rpg2_pi4: Partition
    newman_4: Partition

    @property
    def named(self) -> dict[str, Partition]:
        """Partitions addressable by id from the command line."""
        return {
            "ca-pi1": self.ca_pi1,
            "ca-pi2": self.ca_letters,
            "ca-pi4": self.ca_minor,
            "rpg1-pi4": self.rpg1_pi4,
            "rpg2-pi4": self.rpg2_pi4,
            "newman-4": self.newman_4,
        }

    def letter(self, name: str) -> frozenset[int]:
        for n, c in zip(self.ca_letters.cell_names(), self.ca_letters.cells):
            if n == name:
                return c
        raise KeyError(f"no set named {name!r}")

    def cell(self, name: str) -> frozenset[int]:
        for p in (self.ca_letters, self.ca_minor, self.rpg1_pi4, self.rpg2_pi4, self.newman_4):
            for n, c in zip(p.cell_names(), p.cells):
                if n == name:
                    return c
        raise KeyError(f"no set named {name!r}")


IV_UNIVERSE = frozenset(range(1, 142))


@lru_cache(maxsize=None)
def reference_partitions() -> ReferencePartitions:
    d = json.loads(_read("reference_partitions.json"))

    def part(key: str) -> Partition:
        sets = d[key]
        return Partition.of(sets.values(), names=list(sets), universe=IV_UNIVERSE)

    letters = part("ca-letters")
    L = dict(zip(letters.cell_names(), letters.cells))
    pi1 = Partition.of([L["A"] | L["C"], L["B"] | L["D"]], names=["A∪C", "B∪D"], universe=IV_UNIVERSE)
    return ReferencePartitions(
        ca_letters=letters,
        ca_minor=part("ca-minor"),
        ca_pi1=pi1,
        rpg1_pi4=part("rpg1-pi4"),
        rpg2_pi4=part("rpg2-pi4"),
        newman_4=part("newman-4"),
    )
