"""Procedural generation: floor plans, furniture/object placement, and
task instantiation.

A floor plan starts as one perimeter-walled room and is recursively split by
axis-aligned walls, each carrying exactly one door cell, until the target
room count is reached (every room keeps a >= 3x3 interior). Furniture and
objects are then rejection-sampled into place; generation restarts from the
floor plan when placement or the reachability check fails.

Named RNG sub-streams (floorplan / furniture / objects) keep the stages
independent: changing object placement never perturbs the floor plan drawn
for the same seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .registry import FLOOR_CATEGORY, Registry, data_dir, load_registry
from .rng import Rng
from .tasks import Atom, Expr, Not, TaskDefinition, check_goal
from .world import GridWorld, Room, WorldError

PER_ITEM_ATTEMPTS = 100
PLAN_RESTARTS = 20
MIN_ROOM_SIDE = 3
FLOOR_DUST_CELLS = 3

# Categories used to top up rooms that a task leaves unfurnished.
DECOR_CATEGORIES = ("chair", "table", "bed", "shelf")


class ProcGenError(Exception):
    pass


class Unsplittable(ProcGenError):
    pass


class PlacementExhausted(ProcGenError):
    pass


@dataclass
class FurniturePlan:
    fid: str
    category: str
    size: tuple[int, int] | None = None
    room: str | int | None = None  # room label, explicit room id, or anywhere
    states: set[str] = field(default_factory=set)


@dataclass
class ObjectPlan:
    oid: str
    category: str
    where: tuple = ("floor", None)  # ("floor", label) | ("on", eid) | ("in", fid)
    states: set[str] = field(default_factory=set)


@dataclass
class ProcGenConfig:
    width: int = 10
    height: int = 10
    num_rooms: int = 1
    room_labels: tuple[str, ...] = ()
    furniture_spec: list[FurniturePlan] | str = "random"
    object_spec: list[ObjectPlan] | str = "random"
    seed: int = 0
    layout: str | None = None  # fixed floor-plan file name or path
    dusty_floors: tuple[str, ...] = ()
    assert_absent: tuple[tuple[str, str], ...] = ()  # (state, entity)

    def __post_init__(self):
        if self.num_rooms < 1:
            raise ProcGenError("num_rooms must be >= 1")
        interior = (self.width - 2) * (self.height - 2)
        if interior < self.num_rooms * MIN_ROOM_SIDE * MIN_ROOM_SIDE:
            raise ProcGenError("grid too small for the requested room count")


# -- floor plan -----------------------------------------------------------------


def _wall_cells(rect, orient, offset):
    x0, y0, x1, y1 = rect
    if orient == "v":
        return [(offset, y) for y in range(y0, y1 + 1)]
    return [(x, offset) for x in range(x0, x1 + 1)]


def _feasible_offsets(rect, orient, protected: set) -> list[int]:
    """Wall offsets keeping both children >= MIN_ROOM_SIDE and never walling
    a cell an existing door opens onto."""
    x0, y0, x1, y1 = rect
    lo, hi = (x0, x1) if orient == "v" else (y0, y1)
    return [off for off in range(lo + MIN_ROOM_SIDE, hi - MIN_ROOM_SIDE + 1)
            if not any(c in protected for c in _wall_cells(rect, orient, off))]


def generate_floor_plan(world: GridWorld, num_rooms: int, rng: Rng,
                        labels: tuple[str, ...] = ()) -> list[Room]:
    """Perimeter walls, then repeated wall-with-door splits. Mutates the
    world's cells and room table."""
    for y in range(world.height):
        for x in range(world.width):
            c = world.cell(x, y)
            c.wall = x in (0, world.width - 1) or y in (0, world.height - 1)
            c.room = -1
            c.door = None
    rects = [(1, 1, world.width - 2, world.height - 2)]
    doors: list[tuple[int, int]] = []
    while len(rects) < num_rooms:
        protected = set()
        for dx, dy in doors:
            protected.add((dx, dy))
            for ox, oy in ((0, -1), (1, 0), (0, 1), (-1, 0)):
                if world.in_bounds(dx + ox, dy + oy) and not world.cell(dx + ox, dy + oy).wall:
                    protected.add((dx + ox, dy + oy))
        feasible = {}
        for i, rect in enumerate(rects):
            orients = [o for o in ("v", "h")
                       if _feasible_offsets(rect, o, protected)]
            if orients:
                feasible[i] = orients
        if not feasible:
            raise Unsplittable(
                f"cannot reach {num_rooms} rooms of {MIN_ROOM_SIDE}x{MIN_ROOM_SIDE}+ "
                f"on a {world.width}x{world.height} grid")
        idx = rng.choice(sorted(feasible))
        x0, y0, x1, y1 = rects.pop(idx)
        orient = rng.choice(feasible[idx])
        offset = rng.choice(_feasible_offsets((x0, y0, x1, y1), orient, protected))
        for cell in _wall_cells((x0, y0, x1, y1), orient, offset):
            world.cell(*cell).wall = True
        if orient == "v":
            door = (offset, rng.randint(y0, y1))
            rects.append((x0, y0, offset - 1, y1))
            rects.append((offset + 1, y0, x1, y1))
        else:
            door = (rng.randint(x0, x1), offset)
            rects.append((x0, y0, x1, offset - 1))
            rects.append((x0, offset + 1, x1, y1))
        doors.append(door)
        world.cell(*door).wall = False

    world.rooms = []
    order = list(range(len(rects)))
    rng.shuffle(order)
    for rid, rect_idx in enumerate(order):
        name = labels[rid] if rid < len(labels) else None
        room = Room(rid, rects[rect_idx], name)
        world.rooms.append(room)
        for x, y in room.cells():
            world.cell(x, y).room = rid
    world.doors = {}
    for did, (dx, dy) in enumerate(doors):
        world.doors[did] = (dx, dy)
        cell = world.cell(dx, dy)
        cell.door = did
        for ox, oy in ((0, -1), (1, 0), (0, 1), (-1, 0)):
            if world.in_bounds(dx + ox, dy + oy):
                nroom = world.cell(dx + ox, dy + oy).room
                if nroom >= 0:
                    cell.room = nroom
                    break
    for room in world.rooms:
        world.add_floor(room)
    return world.rooms


def load_layout(name_or_path: str) -> dict:
    path = Path(name_or_path)
    if not path.exists():
        path = data_dir() / "layouts" / f"{name_or_path}.json"
    if not path.exists():
        raise ProcGenError(f"unknown layout {name_or_path!r}")
    return json.loads(path.read_text())


def build_layout(world: GridWorld, layout: dict,
                 labels: tuple[str, ...] = ()) -> list[Room]:
    """Fixed (hand-authored) floor plan: rooms are explicit rectangles, walls
    are every cell outside them, doors punch through."""
    if (layout["width"], layout["height"]) != (world.width, world.height):
        raise ProcGenError("layout size does not match the world")
    for y in range(world.height):
        for x in range(world.width):
            c = world.cell(x, y)
            c.wall = True
            c.room = -1
            c.door = None
    world.rooms = []
    for rid, rd in enumerate(layout["rooms"]):
        room = Room(rid, tuple(rd["bounds"]), rd.get("name"))
        world.rooms.append(room)
        for x, y in room.cells():
            c = world.cell(x, y)
            c.wall = False
            c.room = rid
    world.doors = {}
    for did, (dx, dy) in enumerate(layout["doors"]):
        c = world.cell(dx, dy)
        c.wall = False
        c.door = did
        world.doors[did] = (dx, dy)
        for ox, oy in ((0, -1), (1, 0), (0, 1), (-1, 0)):
            if world.in_bounds(dx + ox, dy + oy):
                nroom = world.cell(dx + ox, dy + oy).room
                if nroom >= 0:
                    c.room = nroom
                    break
    # rooms a task requires but the layout lacks take over spare rooms
    required = set(labels)
    spare = [r for r in world.rooms if r.name not in required]
    for label in labels:
        if not any(r.name == label for r in world.rooms):
            if not spare:
                raise ProcGenError(f"layout has no spare room for label {label!r}")
            spare.pop(0).name = label
    for room in world.rooms:
        world.add_floor(room)
    return world.rooms


# -- count formulas ---------------------------------------------------------------


def furniture_count_bounds(room: Room) -> tuple[int, int]:
    """Inclusive lower, exclusive upper for furniture per room."""
    return 1, max(2, (room.width * room.height) // 12)


def sample_furniture_count(room: Room, rng: Rng) -> int:
    lo, hi = furniture_count_bounds(room)
    return lo + rng.randrange(hi - lo)


def object_count_bounds(fw: int, fd: int) -> tuple[int, int]:
    """Inclusive lower, exclusive upper for objects per furniture; the empty
    range (1x1 footprint) clamps to exactly one."""
    area = fw * fd
    if area <= 1:
        return 1, 2
    return 1, area


def sample_object_count(furniture, rng: Rng) -> int:
    lo, hi = object_count_bounds(furniture.w, furniture.d)
    return lo + rng.randrange(hi - lo)


# -- reachability ------------------------------------------------------------------


def reachability_check(world: GridWorld) -> bool:
    """True iff all non-wall, furniture-free cells form one 4-connected
    component (door cells are passable)."""
    free = [(x, y) for y in range(world.height) for x in range(world.width)
            if world.walkable(x, y)]
    if not free:
        return False
    seen = {free[0]}
    stack = [free[0]]
    while stack:
        x, y = stack.pop()
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if (nx, ny) not in seen and world.walkable(nx, ny):
                seen.add((nx, ny))
                stack.append((nx, ny))
    return len(seen) == len(free)


def furniture_accessible(world: GridWorld) -> bool:
    """Every footprint cell of every placed furniture can be faced from some
    walkable cell, so agents can always interact with it."""
    for f in world.furniture.values():
        if f.is_floor:
            continue
        for x, y in f.cells():
            if not any(world.walkable(x + dx, y + dy)
                       for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))):
                return False
    return True


# -- placement ---------------------------------------------------------------------


def _room_by_label(world: GridWorld, label: str | int | None, rng: Rng) -> Room:
    if label is None:
        return rng.choice(world.rooms)
    if isinstance(label, int):
        return world.rooms[label]
    for room in world.rooms:
        if room.name == label:
            return room
    raise ProcGenError(f"no room labeled {label!r}")


def _try_place_furniture(world: GridWorld, plan: FurniturePlan, rng: Rng) -> bool:
    spec = world.registry.furniture[plan.category]
    w, d = plan.size or spec.footprint
    for _ in range(PER_ITEM_ATTEMPTS):
        room = _room_by_label(world, plan.room, rng)
        x0, y0, x1, y1 = room.bounds
        if x1 - x0 + 1 < w or y1 - y0 + 1 < d:
            continue
        ax = rng.randint(x0, x1 - w + 1)
        ay = rng.randint(y0, y1 - d + 1)
        try:
            f = world.place_furniture(plan.fid, plan.category, (ax, ay), (w, d))
            f.states = set(plan.states)
            return True
        except WorldError:
            continue
    return False


def _free_floor_cells(world: GridWorld, room: Room) -> list[tuple[int, int]]:
    return [(x, y) for x, y in room.cells()
            if world.walkable(x, y) and world.cell(x, y).door is None
            and world.cell(x, y).slots[0] is None]


def _surface_slots(world: GridWorld, f) -> list[tuple[int, int, int]]:
    z = f.surface_level()
    if z is None:
        return []
    return [(x, y, z) for x, y in f.cells() if world.cell(x, y).slots[z] is None]


def _interior_slots(world: GridWorld, f) -> list[tuple[int, int, int]]:
    return [(x, y, z) for x, y in f.cells() for z in f.occupied_z()
            if world.cell(x, y).slots[z] is None]


def _try_place_object(world: GridWorld, plan: ObjectPlan, rng: Rng) -> bool:
    kind, target = plan.where
    obj = world.add_object(plan.oid, plan.category)
    obj.states = set(plan.states)
    if kind == "floor":
        rooms = ([r for r in world.rooms if r.name == target]
                 if target else list(world.rooms))
        cells = [c for room in rooms for c in _free_floor_cells(world, room)]
        if not cells:
            return False
        x, y = cells[rng.randrange(len(cells))]
        world.place_object(plan.oid, x, y, 0)
        return True
    if kind == "on":
        base = world.furniture.get(target)
        if base is not None:
            slots = _surface_slots(world, base)
        else:
            o = world.objects[target]
            if o.carried or o.z + 1 >= 3 or world.cell(o.x, o.y).slots[o.z + 1]:
                return False
            slots = [(o.x, o.y, o.z + 1)]
        if not slots:
            return False
        x, y, z = slots[rng.randrange(len(slots))]
        world.place_object(plan.oid, x, y, z)
        return True
    if kind == "in":
        f = world.furniture[target]
        slots = _interior_slots(world, f)
        if not slots:
            return False
        x, y, z = slots[rng.randrange(len(slots))]
        world.place_object(plan.oid, x, y, z)
        return True
    raise ProcGenError(f"unknown placement {plan.where!r}")


def _random_furniture_plans(world: GridWorld, rng: Rng) -> list[FurniturePlan]:
    categories = sorted(c for c in world.registry.furniture if c != FLOOR_CATEGORY)
    plans = []
    i = 0
    for room in world.rooms:
        count = sample_furniture_count(room, rng)
        for _ in range(count):
            plans.append(FurniturePlan(f"f{i}", rng.choice(categories), room=room.id))
            i += 1
    return plans


def _random_object_plans(world: GridWorld, rng: Rng) -> list[ObjectPlan]:
    categories = sorted(c for c, s in world.registry.objects.items() if s.movable)
    plans = []
    i = 0
    for fid, f in sorted(world.furniture.items()):
        if f.is_floor:
            continue
        count = sample_object_count(f, rng)
        surface = f.surface_level() is not None
        for _ in range(count):
            kind = "in" if f.container and (not surface or rng.randrange(2)) else "on"
            plans.append(ObjectPlan(f"o{i}", rng.choice(categories), (kind, fid)))
            i += 1
    return plans


def _place_agent(world: GridWorld, rng: Rng) -> bool:
    cells = [(x, y) for y in range(world.height) for x in range(world.width)
             if world.walkable(x, y)]
    if not cells:
        return False
    x, y = cells[rng.randrange(len(cells))]
    world.agent.x, world.agent.y = x, y
    world.agent.heading = rng.randrange(4)
    world.agent.carrying = []
    return True


def generate_world(config: ProcGenConfig, registry: Registry | None = None,
                   init_checks: tuple[Expr, ...] = ()) -> GridWorld:
    """Full pipeline: floor plan, furniture, objects, states, agent spawn,
    reachability, and init-condition verification. Restarts from the floor
    plan on failure, up to the restart budget."""
    registry = registry or load_registry()
    root = Rng(config.seed)
    floor_rng = root.derive("floorplan")
    furn_rng = root.derive("furniture")
    obj_rng = root.derive("objects")
    layout = load_layout(config.layout) if config.layout else None

    for _ in range(PLAN_RESTARTS):
        world = GridWorld(config.width, config.height, registry=registry,
                          rng=root.derive("world"))
        if layout is not None:
            build_layout(world, layout, config.room_labels)
        else:
            generate_floor_plan(world, config.num_rooms, floor_rng,
                                config.room_labels)
        world.agent.x = world.agent.y = -1  # parked until spawn

        if config.furniture_spec == "random":
            furn_plans = _random_furniture_plans(world, furn_rng)
        else:
            furn_plans = list(config.furniture_spec)
        ok = True
        for plan in furn_plans:
            if not _try_place_furniture(world, plan, furn_rng):
                ok = False
                break
        if not ok:
            continue

        # top up rooms a task leaves empty, so every room holds furniture
        for room in world.rooms:
            if any(not f.is_floor and f.room == room.id
                   for f in world.furniture.values()):
                continue
            decor = FurniturePlan(f"decor_{room.id}",
                                  furn_rng.choice(DECOR_CATEGORIES), room=room.id)
            if not _try_place_furniture(world, decor, furn_rng):
                ok = False
                break
        if not ok:
            continue

        if config.object_spec == "random":
            obj_plans = _random_object_plans(world, obj_rng)
        else:
            obj_plans = list(config.object_spec)
        for plan in obj_plans:
            if not _try_place_object(world, plan, obj_rng):
                ok = False
                break
        if not ok:
            continue

        for label in config.dusty_floors:
            floor = next((f for f in world.furniture.values()
                          if f.is_floor and f.id == f"floor_{label}"), None)
            if floor is None:
                ok = False
                break
            room = world.rooms[floor.room]
            cells = _free_floor_cells(world, room)
            if not cells:
                ok = False
                break
            count = min(FLOOR_DUST_CELLS, len(cells))
            picks = list(cells)
            obj_rng.shuffle(picks)
            floor.dust_cells = set(picks[:count])
        if not ok:
            continue

        if not _place_agent(world, floor_rng):
            continue
        if not reachability_check(world) or not furniture_accessible(world):
            continue
        for state, eid in config.assert_absent:
            if state in world.entity(eid).states:
                ok = False
                break
        if not ok:
            continue
        if all(check_goal(world, expr) for expr in init_checks):
            return world
    raise PlacementExhausted(
        f"no valid instance after {PLAN_RESTARTS} floor-plan restarts (seed {config.seed})")


# -- task instantiation ----------------------------------------------------------


def plans_from_task(task: TaskDefinition, registry: Registry) -> tuple[
        list[FurniturePlan], list[ObjectPlan], tuple[str, ...],
        tuple[tuple[str, str], ...]]:
    """Translate init atoms into placement plans. Returns furniture plans,
    object plans (dependency-ordered), dusty floor labels, and
    (state, entity) pairs asserted absent."""
    furn = {eid: FurniturePlan(eid, cat, size)
            for eid, cat, size in task.furniture(registry)}
    objs = {eid: ObjectPlan(eid, cat) for eid, cat in task.objects(registry)}
    dusty_floors: list[str] = []
    absent: list[tuple[str, str]] = []

    for expr in task.init:
        if isinstance(expr, Not):
            atom = expr.body
            if not isinstance(atom, Atom):
                raise ProcGenError("init negation must wrap an atom")
            absent.append((atom.pred, atom.args[0]))
            continue
        if not isinstance(expr, Atom):
            raise ProcGenError("init conditions must be atoms")
        pred, args = expr.pred, expr.args
        if pred == "InRoom":
            eid, label = args
            if eid in furn:
                furn[eid].room = label
            elif eid in objs:
                kind, target = objs[eid].where
                if kind == "floor":
                    objs[eid].where = ("floor", label)
            else:
                raise ProcGenError(f"InRoom on unknown entity {eid}")
        elif pred == "OnFloor" or (pred == "OnTop" and args[-1] == "floor"):
            oid = args[0]
            kind, target = objs[oid].where
            objs[oid].where = ("floor", target if kind == "floor" else None)
        elif pred == "OnTop":
            objs[args[0]].where = ("on", args[1])
        elif pred == "Inside":
            objs[args[0]].where = ("in", args[1])
        elif pred == "Dusty" and args[0].startswith("floor_"):
            dusty_floors.append(args[0][len("floor_"):])
        else:
            eid = args[0]
            if eid in objs:
                objs[eid].states.add(pred)
            elif eid in furn:
                furn[eid].states.add(pred)
            else:
                raise ProcGenError(f"initial state on unknown entity {eid}")

    # place support objects before the objects resting on them
    ordered: list[ObjectPlan] = []
    placed: set[str] = set()
    pending = dict(objs)
    while pending:
        progressed = False
        for oid, plan in list(pending.items()):
            kind, target = plan.where
            if kind == "on" and target in objs and target not in placed:
                continue
            ordered.append(plan)
            placed.add(oid)
            del pending[oid]
            progressed = True
        if not progressed:
            raise ProcGenError("cyclic initial placement")
    return (list(furn.values()), ordered, tuple(dusty_floors), tuple(absent))


def config_for_task(task: TaskDefinition, seed: int,
                    registry: Registry | None = None,
                    grid: tuple[int, int] | None = None,
                    num_rooms: int | None = None,
                    layout: str | None = None) -> ProcGenConfig:
    registry = registry or load_registry()
    furn_plans, obj_plans, dusty, absent = plans_from_task(task, registry)
    width, height = grid or task.config.grid
    return ProcGenConfig(
        width=width, height=height,
        num_rooms=num_rooms or max(task.config.rooms, len(task.rooms), 1),
        room_labels=task.rooms,
        furniture_spec=furn_plans,
        object_spec=obj_plans,
        seed=seed,
        layout=layout,
        dusty_floors=dusty,
        assert_absent=absent,
    )


def instantiate_task(task: TaskDefinition, seed: int,
                     registry: Registry | None = None,
                     grid: tuple[int, int] | None = None,
                     num_rooms: int | None = None,
                     layout: str | None = None) -> GridWorld:
    registry = registry or load_registry()
    config = config_for_task(task, seed, registry, grid, num_rooms, layout)
    return generate_world(config, registry=registry, init_checks=task.init)
