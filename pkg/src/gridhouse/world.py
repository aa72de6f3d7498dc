"""Grid geometry, entity storage, and placement/occupancy operations.

The world is an n x m grid of cells, each with three vertical object slots
(bottom/middle/top). Furniture spans a rectangular footprint of cells and a
contiguous z-range starting at level 0; objects are 1x1x1 and movable.
Every mutation goes through this module so occupancy stays consistent.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field

from .registry import FLOOR_CATEGORY, FurnitureSpec, ObjectSpec, Registry, load_registry
from .rng import Rng

Z_LEVELS = 3

# Headings: N, E, S, W with y growing downward.
HEADING_NAMES = ("N", "E", "S", "W")
HEADING_DELTAS = ((0, -1), (1, 0), (0, 1), (-1, 0))

FORMAT_NAME = "gridhouse-world"
FORMAT_VERSION = 1


class WorldError(Exception):
    code = "WorldError"


class OutOfBounds(WorldError):
    code = "OutOfBounds"


class WallCell(WorldError):
    code = "WallCell"


class SlotOccupied(WorldError):
    code = "SlotOccupied"


class Overlap(WorldError):
    code = "Overlap"


class SpansRooms(WorldError):
    code = "SpansRooms"


class UnknownEntity(WorldError):
    code = "UnknownEntity"


class Cell:
    __slots__ = ("wall", "door", "furniture", "slots", "room")

    def __init__(self, wall=False, door=None, furniture=None, room=-1):
        self.wall = wall
        self.door = door            # door id or None
        self.furniture = furniture  # furniture id or None (floors not included)
        self.slots = [None, None, None]
        self.room = room


@dataclass
class Room:
    id: int
    bounds: tuple[int, int, int, int]  # x0, y0, x1, y1 inclusive interior
    name: str | None = None

    def cells(self):
        x0, y0, x1, y1 = self.bounds
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                yield (x, y)

    @property
    def width(self) -> int:
        return self.bounds[2] - self.bounds[0] + 1

    @property
    def height(self) -> int:
        return self.bounds[3] - self.bounds[1] + 1


@dataclass
class ObjectInstance:
    id: str
    category: str
    x: int | None = None
    y: int | None = None
    z: int | None = None
    carried: bool = False
    states: set[str] = field(default_factory=set)

    @property
    def on_grid(self) -> bool:
        return not self.carried


@dataclass
class FurnitureInstance:
    id: str
    category: str
    x: int = 0
    y: int = 0
    w: int = 1
    d: int = 1
    height: int = 1
    container: bool = False
    openable: bool = False
    states: set[str] = field(default_factory=set)
    room: int = -1
    dust_cells: set[tuple[int, int]] = field(default_factory=set)  # floors only

    @property
    def is_floor(self) -> bool:
        return self.category == FLOOR_CATEGORY

    def cells(self):
        for dy in range(self.d):
            for dx in range(self.w):
                yield (self.x + dx, self.y + dy)

    def covers(self, x: int, y: int) -> bool:
        return self.x <= x < self.x + self.w and self.y <= y < self.y + self.d

    def occupied_z(self) -> range:
        return range(0, self.height)

    def surface_level(self) -> int | None:
        """Level where objects rest on top, or None if all three are filled."""
        return self.height if self.height < Z_LEVELS else None


@dataclass
class AgentState:
    x: int = 1
    y: int = 1
    heading: int = 0
    carrying: list[str] = field(default_factory=list)


class GridWorld:
    def __init__(self, width: int, height: int, registry: Registry | None = None,
                 rng: Rng | None = None):
        if width < 3 or height < 3:
            raise ValueError("grid must be at least 3x3")
        self.width = width
        self.height = height
        self.registry = registry or load_registry()
        self.cells = [Cell() for _ in range(width * height)]
        self.rooms: list[Room] = []
        self.furniture: dict[str, FurnitureInstance] = {}
        self.objects: dict[str, ObjectInstance] = {}
        self.agent = AgentState()
        self.step_count = 0
        self.rng = rng or Rng(0)
        self.doors: dict[int, tuple[int, int]] = {}

    # -- geometry ---------------------------------------------------------

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def cell(self, x: int, y: int) -> Cell:
        return self.cells[y * self.width + x]

    def facing_cell(self) -> tuple[int, int] | None:
        """Cell one step along the agent heading, or None at the boundary."""
        dx, dy = HEADING_DELTAS[self.agent.heading]
        x, y = self.agent.x + dx, self.agent.y + dy
        if not self.in_bounds(x, y):
            return None
        return (x, y)

    def walkable(self, x: int, y: int) -> bool:
        if not self.in_bounds(x, y):
            return False
        c = self.cell(x, y)
        return not c.wall and c.furniture is None

    # -- entity lookup ----------------------------------------------------

    def entity(self, eid: str) -> ObjectInstance | FurnitureInstance:
        e = self.objects.get(eid) or self.furniture.get(eid)
        if e is None:
            raise UnknownEntity(eid)
        return e

    def object_spec(self, obj: ObjectInstance) -> ObjectSpec:
        return self.registry.objects[obj.category]

    def furniture_spec(self, f: FurnitureInstance) -> FurnitureSpec:
        return self.registry.furniture[f.category]

    def floor_of_room(self, room_id: int) -> FurnitureInstance | None:
        for f in self.furniture.values():
            if f.is_floor and f.room == room_id:
                return f
        return None

    def room_of_entity(self, e) -> int:
        if isinstance(e, FurnitureInstance):
            return e.room
        if e.carried:
            return self.cell(self.agent.x, self.agent.y).room
        return self.cell(e.x, e.y).room

    # -- mutation ---------------------------------------------------------

    def add_object(self, oid: str, category: str) -> ObjectInstance:
        if oid in self.objects or oid in self.furniture:
            raise WorldError(f"duplicate entity id {oid!r}")
        if category not in self.registry.objects:
            raise WorldError(f"not an object category: {category!r}")
        obj = ObjectInstance(id=oid, category=category, carried=True)
        self.objects[oid] = obj
        return obj

    def place_object(self, oid: str, x: int, y: int, z: int) -> None:
        """Move or place an object at a grid slot; occupancy index stays consistent."""
        obj = self.objects.get(oid)
        if obj is None:
            raise UnknownEntity(oid)
        if not self.in_bounds(x, y) or not 0 <= z < Z_LEVELS:
            raise OutOfBounds(f"({x},{y},{z})")
        c = self.cell(x, y)
        if c.wall:
            raise WallCell(f"({x},{y})")
        if c.slots[z] is not None:
            raise SlotOccupied(f"({x},{y},{z})")
        self._detach_object(obj)
        c.slots[z] = oid
        obj.x, obj.y, obj.z = x, y, z
        obj.carried = False

    def carry_object(self, oid: str) -> None:
        obj = self.objects.get(oid)
        if obj is None:
            raise UnknownEntity(oid)
        self._detach_object(obj)
        obj.carried = True
        obj.x = obj.y = obj.z = None
        if oid not in self.agent.carrying:
            self.agent.carrying.append(oid)

    def _detach_object(self, obj: ObjectInstance) -> None:
        if obj.carried:
            if obj.id in self.agent.carrying:
                self.agent.carrying.remove(obj.id)
        elif obj.x is not None:
            self.cell(obj.x, obj.y).slots[obj.z] = None

    def place_furniture(self, fid: str, category: str, anchor: tuple[int, int],
                        size: tuple[int, int] | None = None) -> FurnitureInstance:
        """Register furniture with its footprint; rejects overlap with walls,
        doors, other furniture, and the agent. Position is immutable afterwards."""
        if fid in self.furniture or fid in self.objects:
            raise WorldError(f"duplicate entity id {fid!r}")
        spec = self.registry.furniture.get(category)
        if spec is None:
            raise WorldError(f"not a furniture category: {category!r}")
        w, d = size or spec.footprint
        x0, y0 = anchor
        if w < 1 or d < 1:
            raise WorldError("footprint must be at least 1x1")
        if not (self.in_bounds(x0, y0) and self.in_bounds(x0 + w - 1, y0 + d - 1)):
            raise OutOfBounds(f"footprint at {anchor} size {w}x{d}")
        room_id = self.cell(x0, y0).room
        for dy in range(d):
            for dx in range(w):
                c = self.cell(x0 + dx, y0 + dy)
                if c.wall or c.door is not None:
                    raise Overlap(f"wall/door at ({x0 + dx},{y0 + dy})")
                if c.furniture is not None:
                    raise Overlap(f"furniture at ({x0 + dx},{y0 + dy})")
                if (self.agent.x, self.agent.y) == (x0 + dx, y0 + dy):
                    raise Overlap("agent in footprint")
                if c.room != room_id:
                    raise SpansRooms(f"footprint crosses rooms at ({x0 + dx},{y0 + dy})")
        f = FurnitureInstance(
            id=fid, category=category, x=x0, y=y0, w=w, d=d,
            height=spec.height, container=spec.container, openable=spec.openable,
            room=room_id,
        )
        self.furniture[fid] = f
        for cx, cy in f.cells():
            self.cell(cx, cy).furniture = fid
        return f

    def add_floor(self, room: Room) -> FurnitureInstance:
        """Implicit per-room floor entity; not registered in cell.furniture."""
        label = room.name or str(room.id)
        fid = f"floor_{label}"
        x0, y0, x1, y1 = room.bounds
        f = FurnitureInstance(
            id=fid, category=FLOOR_CATEGORY, x=x0, y=y0,
            w=x1 - x0 + 1, d=y1 - y0 + 1, height=0, room=room.id,
        )
        self.furniture[fid] = f
        return f

    # -- hashing and serialization ----------------------------------------

    def state_hash(self) -> int:
        """Stable 64-bit digest of pose, entities, states, and geometry."""
        h = hashlib.blake2b(digest_size=8)
        pack = struct.pack
        h.update(pack("<iiq", self.width, self.height, self.step_count))
        a = self.agent
        h.update(pack("<iii", a.x, a.y, a.heading))
        for oid in a.carrying:
            h.update(oid.encode())
        for room in self.rooms:
            h.update(pack("<iiiii", room.id, *room.bounds))
            h.update((room.name or "").encode())
        for did in sorted(self.doors):
            h.update(pack("<iii", did, *self.doors[did]))
        h.update(bytes(c.wall for c in self.cells))
        for oid in sorted(self.objects):
            o = self.objects[oid]
            h.update(oid.encode())
            h.update(o.category.encode())
            if o.carried:
                h.update(b"~carried")
            else:
                h.update(pack("<iii", o.x, o.y, o.z))
            h.update(",".join(sorted(o.states)).encode())
        for fid in sorted(self.furniture):
            f = self.furniture[fid]
            h.update(fid.encode())
            h.update(f.category.encode())
            h.update(pack("<iiiii", f.x, f.y, f.w, f.d, f.height))
            h.update(",".join(sorted(f.states)).encode())
            for cx, cy in sorted(f.dust_cells):
                h.update(pack("<ii", cx, cy))
        return int.from_bytes(h.digest(), "little")

    def clone(self) -> "GridWorld":
        w = GridWorld.__new__(GridWorld)
        w.width = self.width
        w.height = self.height
        w.registry = self.registry
        w.rooms = self.rooms  # immutable after generation
        w.doors = self.doors
        w.step_count = self.step_count
        w.rng = Rng(self.rng.seed, self.rng.state)
        w.cells = []
        append = w.cells.append
        for c in self.cells:
            nc = Cell.__new__(Cell)
            nc.wall = c.wall
            nc.door = c.door
            nc.furniture = c.furniture
            nc.slots = c.slots.copy()
            nc.room = c.room
            append(nc)
        w.objects = {
            oid: ObjectInstance(oid, o.category, o.x, o.y, o.z, o.carried, set(o.states))
            for oid, o in self.objects.items()
        }
        w.furniture = {
            fid: FurnitureInstance(fid, f.category, f.x, f.y, f.w, f.d, f.height,
                                   f.container, f.openable, set(f.states), f.room,
                                   set(f.dust_cells))
            for fid, f in self.furniture.items()
        }
        a = self.agent
        w.agent = AgentState(a.x, a.y, a.heading, list(a.carrying))
        return w

    def to_dict(self) -> dict:
        room_grid = [[self.cell(x, y).room for x in range(self.width)]
                     for y in range(self.height)]
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "width": self.width,
            "height": self.height,
            "z_levels": Z_LEVELS,
            "rooms": [{"id": r.id, "bounds": list(r.bounds), "name": r.name}
                      for r in self.rooms],
            "doors": [{"id": did, "x": x, "y": y}
                      for did, (x, y) in sorted(self.doors.items())],
            "room_grid": room_grid,
            "walls": sorted([x, y] for y in range(self.height) for x in range(self.width)
                            if self.cell(x, y).wall),
            "furniture": [
                {
                    "id": f.id, "category": f.category, "anchor": [f.x, f.y],
                    "size": [f.w, f.d], "height": f.height,
                    "states": sorted(f.states), "room": f.room,
                    "dust_cells": sorted(list(c) for c in f.dust_cells),
                }
                for f in sorted(self.furniture.values(), key=lambda f: f.id)
            ],
            "objects": [
                {
                    "id": o.id, "category": o.category,
                    "placement": "carried" if o.carried else [o.x, o.y, o.z],
                    "states": sorted(o.states),
                }
                for o in sorted(self.objects.values(), key=lambda o: o.id)
            ],
            "agent": {"x": self.agent.x, "y": self.agent.y,
                      "heading": HEADING_NAMES[self.agent.heading],
                      "carrying": list(self.agent.carrying)},
            "step_count": self.step_count,
            "rng": self.rng.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict, registry: Registry | None = None) -> "GridWorld":
        if d.get("format") != FORMAT_NAME:
            raise WorldError(f"not a {FORMAT_NAME} document")
        if d.get("version") != FORMAT_VERSION:
            raise WorldError(f"unsupported world format version {d.get('version')}")
        w = cls(d["width"], d["height"], registry=registry,
                rng=Rng.from_dict(d["rng"]))
        w.rooms = [Room(r["id"], tuple(r["bounds"]), r["name"]) for r in d["rooms"]]
        for y, row in enumerate(d["room_grid"]):
            for x, room_id in enumerate(row):
                w.cell(x, y).room = room_id
        for x, y in d["walls"]:
            w.cell(x, y).wall = True
        for door in d["doors"]:
            w.doors[door["id"]] = (door["x"], door["y"])
            w.cell(door["x"], door["y"]).door = door["id"]
        for fd in d["furniture"]:
            spec = w.registry.furniture[fd["category"]]
            f = FurnitureInstance(
                id=fd["id"], category=fd["category"],
                x=fd["anchor"][0], y=fd["anchor"][1], w=fd["size"][0], d=fd["size"][1],
                height=fd["height"], container=spec.container, openable=spec.openable,
                states=set(fd["states"]), room=fd["room"],
                dust_cells={tuple(c) for c in fd["dust_cells"]},
            )
            w.furniture[f.id] = f
            if not f.is_floor:
                for cx, cy in f.cells():
                    w.cell(cx, cy).furniture = f.id
        for od in d["objects"]:
            obj = ObjectInstance(id=od["id"], category=od["category"],
                                 states=set(od["states"]), carried=True)
            w.objects[obj.id] = obj
            if od["placement"] != "carried":
                x, y, z = od["placement"]
                obj.carried = False
                obj.x, obj.y, obj.z = x, y, z
                w.cell(x, y).slots[z] = obj.id
        ad = d["agent"]
        w.agent = AgentState(ad["x"], ad["y"], HEADING_NAMES.index(ad["heading"]),
                             list(ad["carrying"]))
        w.step_count = d["step_count"]
        return w

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str, registry: Registry | None = None) -> "GridWorld":
        return cls.from_dict(json.loads(text), registry=registry)

    # -- validation (used by fuzz tests and procgen) ------------------------

    def check_occupancy(self) -> list[str]:
        """Full-scan consistency check; returns a list of violation messages."""
        problems = []
        seen = {}
        for y in range(self.height):
            for x in range(self.width):
                c = self.cell(x, y)
                if c.wall and (c.furniture is not None or any(c.slots)):
                    problems.append(f"wall cell ({x},{y}) holds entities")
                if c.wall and c.door is not None:
                    problems.append(f"door on wall cell ({x},{y})")
                for z, oid in enumerate(c.slots):
                    if oid is None:
                        continue
                    o = self.objects.get(oid)
                    if o is None:
                        problems.append(f"slot ({x},{y},{z}) references unknown {oid}")
                    elif o.carried or (o.x, o.y, o.z) != (x, y, z):
                        problems.append(f"slot ({x},{y},{z}) vs object {oid} placement mismatch")
                    if oid in seen:
                        problems.append(f"object {oid} in two slots")
                    seen[oid] = (x, y, z)
        for o in self.objects.values():
            if o.carried:
                if o.id not in self.agent.carrying:
                    problems.append(f"{o.id} carried but not in agent list")
            elif seen.get(o.id) != (o.x, o.y, o.z):
                problems.append(f"{o.id} placement not indexed")
        for oid in self.agent.carrying:
            o = self.objects.get(oid)
            if o is None or not o.carried:
                problems.append(f"agent carries non-carried {oid}")
        claimed = {}
        for f in self.furniture.values():
            if f.is_floor:
                continue
            for cx, cy in f.cells():
                c = self.cell(cx, cy)
                if c.wall or c.door is not None:
                    problems.append(f"furniture {f.id} over wall/door ({cx},{cy})")
                if (cx, cy) in claimed:
                    problems.append(f"furniture overlap at ({cx},{cy})")
                claimed[(cx, cy)] = f.id
                if c.furniture != f.id:
                    problems.append(f"cell ({cx},{cy}) not indexed to {f.id}")
                if c.room != f.room:
                    problems.append(f"furniture {f.id} spans rooms")
        agent_cell = self.cell(self.agent.x, self.agent.y)
        if agent_cell.wall:
            problems.append("agent in wall")
        if agent_cell.furniture is not None:
            problems.append("agent inside furniture footprint")
        return problems


def blank_world(width: int, height: int, registry: Registry | None = None,
                seed: int = 0) -> GridWorld:
    """Perimeter-walled single-room world (handy for tests and tools)."""
    w = GridWorld(width, height, registry=registry, rng=Rng(seed))
    for y in range(height):
        for x in range(width):
            if x in (0, width - 1) or y in (0, height - 1):
                w.cell(x, y).wall = True
    room = Room(0, (1, 1, width - 2, height - 2))
    w.rooms = [room]
    for x, y in room.cells():
        w.cell(x, y).room = 0
    w.add_floor(room)
    w.agent.x, w.agent.y = 1, 1
    return w
