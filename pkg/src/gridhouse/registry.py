"""Category registry: capability flags and frozen numeric ids.

Categories are data, not code: new objects/furniture are added by editing
``data/registry.json``. Numeric ids used in observation tensors are frozen
in ``data/ids.lock.json`` so encodings stay stable across versions.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

# Absolute states in channel-bit order.
STATE_ORDER = ("Cooked", "Dusty", "Frozen", "Opened", "Sliced", "Soaked", "Stained", "ToggledOn")
FURNITURE_STATES = ("Dusty", "Opened", "Stained", "ToggledOn")

FLOOR_CATEGORY = "floor"


class RegistryError(Exception):
    pass


@dataclass(frozen=True)
class ObjectSpec:
    name: str
    movable: bool = True
    openable: bool = False
    toggleable: bool = False
    sliceable: bool = False
    soakable: bool = False
    food: bool = False
    container: bool = False
    cleaning_tool: bool = False
    soap: bool = False
    slicer: bool = False
    sweeper: bool = False
    dustyable: bool = False
    stainable: bool = False

    def can_hold(self, state: str) -> bool:
        return {
            "Cooked": self.food,
            "Dusty": self.dustyable,
            "Frozen": self.food,
            "Opened": self.openable,
            "Sliced": self.sliceable,
            "Soaked": self.soakable,
            "Stained": self.stainable,
            "ToggledOn": self.toggleable,
        }.get(state, False)


@dataclass(frozen=True)
class FurnitureSpec:
    name: str
    footprint: tuple[int, int] = (1, 1)
    height: int = 1  # occupied z-levels, starting at 0; 0 = flush floor entity
    container: bool = False
    openable: bool = False
    toggleable: bool = False
    dustyable: bool = True
    stainable: bool = True

    def can_hold(self, state: str) -> bool:
        return {
            "Dusty": self.dustyable,
            "Opened": self.openable,
            "Stained": self.stainable,
            "ToggledOn": self.toggleable,
        }.get(state, False)


class Registry:
    def __init__(self, objects: dict[str, ObjectSpec], furniture: dict[str, FurnitureSpec],
                 object_ids: dict[str, int], furniture_ids: dict[str, int]):
        self.objects = objects
        self.furniture = furniture
        self.object_ids = object_ids
        self.furniture_ids = furniture_ids

    def is_object(self, category: str) -> bool:
        return category in self.objects

    def is_furniture(self, category: str) -> bool:
        return category in self.furniture

    def spec(self, category: str) -> ObjectSpec | FurnitureSpec:
        if category in self.objects:
            return self.objects[category]
        if category in self.furniture:
            return self.furniture[category]
        raise RegistryError(f"unknown category: {category}")


def data_dir() -> Path:
    """Shipped data directory, overridable via GRIDHOUSE_DATA."""
    override = os.environ.get("GRIDHOUSE_DATA")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _load(path: Path) -> Registry:
    raw = json.loads((path / "registry.json").read_text())
    lock = json.loads((path / "ids.lock.json").read_text())
    objects = {name: ObjectSpec(name=name, **flags) for name, flags in raw["objects"].items()}
    furniture = {
        name: FurnitureSpec(name=name, **{**flags, "footprint": tuple(flags.get("footprint", [1, 1]))})
        for name, flags in raw["furniture"].items()
    }
    object_ids = {k: int(v) for k, v in lock["objects"].items()}
    furniture_ids = {k: int(v) for k, v in lock["furniture"].items()}
    for name in objects:
        if name not in object_ids:
            raise RegistryError(f"object category {name!r} missing from ids.lock.json")
    for name in furniture:
        if name not in furniture_ids:
            raise RegistryError(f"furniture category {name!r} missing from ids.lock.json")
    if len(set(object_ids.values())) != len(object_ids) or 0 in object_ids.values():
        raise RegistryError("object ids must be unique and nonzero")
    if len(set(furniture_ids.values())) != len(furniture_ids) or 0 in furniture_ids.values():
        raise RegistryError("furniture ids must be unique and nonzero")
    return Registry(objects, furniture, object_ids, furniture_ids)


@lru_cache(maxsize=4)
def _cached(path_str: str) -> Registry:
    return _load(Path(path_str))


def load_registry(path: Path | None = None) -> Registry:
    return _cached(str(path or data_dir()))


def generate_ids_lock(registry_json: Path) -> dict:
    """Assign ids by registry order, 1-based (0 means empty in observations)."""
    raw = json.loads(registry_json.read_text())
    return {
        "objects": {name: i + 1 for i, name in enumerate(raw["objects"])},
        "furniture": {name: i + 1 for i, name in enumerate(raw["furniture"])},
    }
