"""Agents: seeded random, scripted task solvers, and a breadth-first solver.

Scripted solvers plan on a cloned world, executing as they go, and return the
primitive-action encodings; since the simulation is deterministic the same
sequence replays identically through the environment.
"""

from __future__ import annotations

from collections import deque

from .actions import PrimitiveAction, apply_primitive, valid_primitives
from .rng import Rng
from .states import eval_relative
from .tasks import TaskDefinition, check_goal
from .world import HEADING_DELTAS, GridWorld, ObjectInstance


class PlanningError(Exception):
    pass


class RandomAgent:
    """Uniform choice among currently valid primitives."""

    def __init__(self, seed: int):
        self.rng = Rng(seed).derive("random-agent")

    def choose(self, world: GridWorld) -> PrimitiveAction:
        options = sorted(valid_primitives(world))
        return options[self.rng.randrange(len(options))]


def _turns(current: int, desired: int) -> list[PrimitiveAction]:
    diff = (desired - current) % 4
    if diff == 0:
        return []
    if diff == 1:
        return [PrimitiveAction.turn_right]
    if diff == 3:
        return [PrimitiveAction.turn_left]
    return [PrimitiveAction.turn_right, PrimitiveAction.turn_right]


def path_to_face(world: GridWorld, targets: set[tuple[int, int]]) -> list[PrimitiveAction] | None:
    """Shortest walk ending with the agent facing one of the target cells.
    Returns None when no stand cell is reachable; [] when already facing."""
    start = (world.agent.x, world.agent.y)

    def facing_from(cell):
        for h, (dx, dy) in enumerate(HEADING_DELTAS):
            if (cell[0] + dx, cell[1] + dy) in targets:
                return h
        return None

    parents: dict[tuple[int, int], tuple[int, int] | None] = {start: None}
    queue = deque([start])
    stand = None
    while queue:
        cell = queue.popleft()
        if facing_from(cell) is not None:
            stand = cell
            break
        for dx, dy in HEADING_DELTAS:
            nxt = (cell[0] + dx, cell[1] + dy)
            if nxt not in parents and world.walkable(*nxt):
                parents[nxt] = cell
                queue.append(nxt)
    if stand is None:
        return None
    path = []
    cur = stand
    while cur is not None:
        path.append(cur)
        cur = parents[cur]
    path.reverse()

    actions: list[PrimitiveAction] = []
    heading = world.agent.heading
    for prev, nxt in zip(path, path[1:]):
        desired = HEADING_DELTAS.index((nxt[0] - prev[0], nxt[1] - prev[1]))
        actions.extend(_turns(heading, desired))
        actions.append(PrimitiveAction.forward)
        heading = desired
    final = facing_from(stand)
    actions.extend(_turns(heading, final))
    return actions


class Scripter:
    """Executes a plan on a cloned world while recording the actions."""

    def __init__(self, world: GridWorld):
        self.world = world.clone()
        self.actions: list[int] = []

    def do(self, action: PrimitiveAction) -> None:
        outcome = apply_primitive(self.world, action)
        if not outcome.succeeded:
            raise PlanningError(f"{action.name} failed: {outcome.reason}")
        self.actions.append(int(action))

    def goto_face(self, targets: set[tuple[int, int]]) -> None:
        path = path_to_face(self.world, targets)
        if path is None:
            raise PlanningError(f"no path to face {sorted(targets)}")
        for a in path:
            self.do(a)

    def nudge(self) -> None:
        """Spin in place so end-of-step transitions get a chance to fire."""
        self.do(PrimitiveAction.turn_left)
        self.do(PrimitiveAction.turn_right)

    # -- convenience lookups ------------------------------------------------

    def obj(self, oid: str):
        return self.world.objects[oid]

    def furn(self, fid: str):
        return self.world.furniture[fid]

    def obj_cell(self, oid: str) -> tuple[int, int]:
        o = self.obj(oid)
        if o.carried:
            raise PlanningError(f"{oid} is carried")
        return (o.x, o.y)

    def pickup(self, oid: str) -> None:
        """Fetch an object into the hand: frees the hand first and opens a
        closed container in the way."""
        o = self.obj(oid)
        if o.carried:
            return
        if self.world.agent.carrying:
            self.drop_on_floor()
        self.goto_face({(o.x, o.y)})
        cell = self.world.cell(o.x, o.y)
        if cell.furniture is not None:
            f = self.world.furniture[cell.furniture]
            if o.z in f.occupied_z() and f.openable and "Opened" not in f.states:
                self.do(PrimitiveAction.open)
        self.do([PrimitiveAction.pickup_bottom, PrimitiveAction.pickup_middle,
                 PrimitiveAction.pickup_top][o.z])

    def drop_at(self, x: int, y: int, z: int) -> None:
        self.goto_face({(x, y)})
        self.do([PrimitiveAction.drop_bottom, PrimitiveAction.drop_middle,
                 PrimitiveAction.drop_top][z])

    def drop_on_surface(self, fid: str) -> None:
        f = self.furn(fid)
        z = f.surface_level()
        free = [(x, y) for x, y in f.cells() if self.world.cell(x, y).slots[z] is None]
        if not free:
            raise PlanningError(f"no free surface slot on {fid}")
        self.goto_face(set(free))
        fx, fy = self.world.facing_cell()
        if self.world.cell(fx, fy).slots[z] is not None:
            raise PlanningError("surface slot taken en route")
        self.do([PrimitiveAction.drop_bottom, PrimitiveAction.drop_middle,
                 PrimitiveAction.drop_top][z])

    def drop_into(self, fid: str) -> None:
        f = self.furn(fid)
        self.open_if_closed(fid)
        free = [(x, y) for x, y in f.cells()
                if any(self.world.cell(x, y).slots[z] is None for z in f.occupied_z())]
        if not free:
            raise PlanningError(f"no free interior slot in {fid}")
        self.goto_face(set(free))
        self.do(PrimitiveAction.drop_in)

    def drop_on_floor(self) -> None:
        w = self.world
        cells = {(x, y) for y in range(w.height) for x in range(w.width)
                 if w.walkable(x, y) and w.cell(x, y).slots[0] is None}
        if not cells:
            raise PlanningError("nowhere to drop")
        self.goto_face(cells)
        self.do(PrimitiveAction.drop_bottom)

    def open_if_closed(self, fid: str) -> None:
        f = self.furn(fid)
        if f.openable and "Opened" not in f.states:
            self.goto_face(set(f.cells()))
            self.do(PrimitiveAction.open)

    def toggle_on(self, fid: str) -> None:
        if "ToggledOn" not in self.furn(fid).states:
            self.goto_face(set(self.furn(fid).cells()))
            self.do(PrimitiveAction.toggle)

    def face_until(self, cells: set[tuple[int, int]], done) -> None:
        """Face a target and give end-of-step transitions a chance to fire."""
        self.goto_face(cells)
        if not done():
            self.nudge()
        if not done():
            raise PlanningError(f"condition never fired at {sorted(cells)}")

    def soak(self, tool_id: str, sink_id: str) -> None:
        """Soak a tool at the sink and take it back into the hand."""
        if "Soaked" in self.obj(tool_id).states:
            if not self.obj(tool_id).carried:
                self.pickup(tool_id)
            return
        self.pickup(tool_id)
        self.drop_into(sink_id)
        if "ToggledOn" not in self.furn(sink_id).states:
            self.do(PrimitiveAction.toggle)  # facing the sink after drop_in
        else:
            self.nudge()
        if "Soaked" not in self.obj(tool_id).states:
            raise PlanningError(f"{tool_id} never soaked")
        self.pickup(tool_id)

    def entity_cells(self, eid: str) -> set[tuple[int, int]]:
        entity = self.world.entity(eid)
        if isinstance(entity, ObjectInstance):
            return {self.obj_cell(eid)}
        return set(entity.cells())

    def _stack_slot(self, x: int, y: int) -> int | None:
        """Lowest slot at (x, y) where a plain drop would rest: the floor, a
        surface, or on top of an existing stack. Container interiors are
        skipped (they would need drop_in)."""
        w = self.world
        cell = w.cell(x, y)
        if cell.wall:
            return None
        base = 0
        if cell.furniture is not None:
            surface = w.furniture[cell.furniture].surface_level()
            if surface is None:
                return None
            base = surface
        for z in range(base, 3):
            if cell.slots[z] is None:
                if z == base or cell.slots[z - 1] is not None:
                    return z
        return None

    def _near_spots(self, cells: set[tuple[int, int]]) -> list[tuple[int, int, int]]:
        """Drop slots at or 4-adjacent to the target cells, best first."""
        w = self.world
        spots = []
        seen = set()
        for x, y in sorted(cells):
            neighbors = [(x, y)] + [(x + dx, y + dy)
                                    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))]
            for nx, ny in neighbors:
                if (nx, ny) in seen or not w.in_bounds(nx, ny):
                    continue
                seen.add((nx, ny))
                z = self._stack_slot(nx, ny)
                if z is not None:
                    spots.append((nx, ny, z))
        return spots

    def place_near(self, oid: str, target_cells: set[tuple[int, int]]) -> None:
        """Put an object at or next to the target cells (same-cell stacking
        first, then adjacent surface/floor slots)."""
        self.pickup(oid)
        for x, y, z in self._near_spots(target_cells):
            path = path_to_face(self.world, {(x, y)})
            if path is None:
                continue
            for a in path:
                self.do(a)
            drop = [PrimitiveAction.drop_bottom, PrimitiveAction.drop_middle,
                    PrimitiveAction.drop_top][z]
            outcome = apply_primitive(self.world, drop)
            if outcome.succeeded:
                self.actions.append(int(drop))
                return
        raise PlanningError(f"no spot near {sorted(target_cells)} for {oid}")

    def clean(self, target_id: str, tool_id: str, soap_id: str | None = None) -> None:
        """Clear Dusty/Stained from a target using a soaked tool; stains also
        need the soap parked at or next to the target."""
        target = self.world.entity(target_id)
        if "Stained" in target.states and soap_id is not None:
            soap = self.obj(soap_id)
            near = (eval_relative(self.world, soap, target, "AtSameLocation")
                    or eval_relative(self.world, soap, target, "NextTo"))
            if not near:
                self.place_near(soap_id, self.entity_cells(target_id))
        if "Dusty" in target.states or "Stained" in target.states:
            self.soak(tool_id, self._sink_id())
            self.face_until(
                self.entity_cells(target_id),
                lambda: "Dusty" not in target.states and "Stained" not in target.states)

    def _sink_id(self) -> str:
        for fid, f in sorted(self.world.furniture.items()):
            if f.category == "sink":
                return fid
        raise PlanningError("no sink in this world")

    def sweep(self, floor_id: str, broom_id: str) -> None:
        self.pickup(broom_id)
        floor = self.furn(floor_id)
        while floor.dust_cells:
            cell = sorted(floor.dust_cells)[0]
            self.face_until({cell}, lambda: cell not in floor.dust_cells)


def solve_installing_a_printer(task: TaskDefinition, world: GridWorld) -> list[int]:
    s = Scripter(world)
    s.pickup("printer_0")
    s.drop_on_surface("table_0")
    s.do(PrimitiveAction.toggle)  # still facing the printer on the table
    if not check_goal(s.world, task.goal):
        raise PlanningError("plan finished without reaching the goal")
    return s.actions


def solve_putting_away_dishes(task: TaskDefinition, world: GridWorld) -> list[int]:
    s = Scripter(world)
    s.open_if_closed("cabinet_0")
    for plate in ("plate_0", "plate_1", "plate_2"):
        s.pickup(plate)
        s.drop_into("cabinet_0")
    if not check_goal(s.world, task.goal):
        raise PlanningError("plan finished without reaching the goal")
    return s.actions


def _soap_near(s: Scripter, soap_id: str, target_id: str) -> bool:
    soap = s.obj(soap_id)
    target = s.obj(target_id)
    return (eval_relative(s.world, soap, target, "AtSameLocation")
            or eval_relative(s.world, soap, target, "NextTo"))


def solve_washing_pots_and_pans(task: TaskDefinition, world: GridWorld) -> list[int]:
    s = Scripter(world)
    appliances = ("teapot_0", "kettle_0", "pan_0")

    # soak the scrub brush at the sink
    s.pickup("scrub_brush_0")
    s.drop_into("sink_0")
    if "ToggledOn" not in s.furn("sink_0").states:
        s.do(PrimitiveAction.toggle)
    else:
        s.nudge()
    s.pickup("scrub_brush_0")

    for target in appliances:
        if "Stained" not in s.obj(target).states:
            continue
        if not _soap_near(s, "soap_0", target):
            s.drop_on_floor()  # park the brush
            s.pickup("soap_0")
            tx, ty = s.obj_cell(target)
            s.goto_face({(tx, ty)})
            s.do(PrimitiveAction.drop_top)  # soap rests right above the target
            s.pickup("scrub_brush_0")
        s.goto_face({s.obj_cell(target)})
        if "Stained" in s.obj(target).states:
            s.nudge()
        if "Stained" in s.obj(target).states:
            raise PlanningError(f"{target} still stained")

    s.drop_on_floor()  # free the hand before stowing
    s.open_if_closed("cabinet_0")
    for target in appliances:
        s.pickup(target)
        s.drop_into("cabinet_0")
    if not check_goal(s.world, task.goal):
        raise PlanningError("plan finished without reaching the goal")
    return s.actions


def _finish(s: Scripter, task: TaskDefinition) -> list[int]:
    if not check_goal(s.world, task.goal):
        raise PlanningError(f"{task.name}: plan finished without reaching the goal")
    return s.actions


def solve_boxing_books(task, world):
    s = Scripter(world)
    for book in ("book_0", "book_1"):
        s.pickup(book)
        s.drop_into("box_0")
    return _finish(s, task)


def solve_cleaning_a_car(task, world):
    s = Scripter(world)
    s.clean("car_0", "rag_0")
    s.drop_into("bucket_0")  # the soaked rag, straight from the hand
    s.pickup("soap_0")
    s.drop_into("bucket_0")
    return _finish(s, task)


def solve_cleaning_shoes(task, world):
    s = Scripter(world)
    for shoe in ("shoe_0", "shoe_1", "shoe_2", "shoe_3"):
        s.clean(shoe, "towel_0", "soap_0")
    return _finish(s, task)


def solve_cleaning_up_the_kitchen(task, world):
    s = Scripter(world)
    s.clean("cabinet_0", "rag_0")
    s.clean("pan_0", "rag_0")
    s.clean("plate_0", "rag_0", "soap_0")
    s.clean("blender_0", "rag_0", "soap_0")
    s.sweep("floor_kitchen", "broom_0")
    return _finish(s, task)


def solve_collect_misplaced_items(task, world):
    s = Scripter(world)
    for item in ("gym_shoe_0", "necklace_0", "notebook_0", "sock_0"):
        s.pickup(item)
        s.drop_on_surface("table_0")
    return _finish(s, task)


def solve_laying_wood_floors(task, world):
    s = Scripter(world)
    w = s.world
    pieces = ("plywood_0", "plywood_1", "plywood_2")

    def free_floor(x, y):
        return w.walkable(x, y) and w.cell(x, y).slots[0] is None

    run = None
    for y in range(w.height):
        for x in range(w.width - 2):
            cells = [(x + i, y) for i in range(3)]
            if all(free_floor(*c) for c in cells):
                run = cells
                break
        if run:
            break
    if run is None:
        raise PlanningError("no clear 3-cell run for the plywood")
    for piece, cell in zip(pieces, run):
        s.pickup(piece)
        s.drop_at(cell[0], cell[1], 0)
    return _finish(s, task)


def solve_making_tea(task, world):
    s = Scripter(world)
    s.pickup("lemon_0")
    s.drop_on_floor()
    s.pickup("knife_0")
    lemon = s.obj("lemon_0")
    s.goto_face({(lemon.x, lemon.y)})
    s.do(PrimitiveAction.slice)
    s.pickup("teapot_0")       # parks the knife on the floor first
    s.drop_on_surface("stove_0")
    s.pickup("teabag_0")
    teapot = s.obj("teapot_0")
    s.drop_at(teapot.x, teapot.y, teapot.z + 1)  # into the teapot
    s.toggle_on("stove_0")
    return _finish(s, task)


def solve_moving_boxes(task, world):
    s = Scripter(world)
    s.pickup("carton_1")
    base = s.obj("carton_0")
    s.drop_at(base.x, base.y, base.z + 1)
    return _finish(s, task)


def solve_opening_packages(task, world):
    s = Scripter(world)
    for package in ("package_0", "package_1"):
        s.goto_face({s.obj_cell(package)})
        s.do(PrimitiveAction.open)
    return _finish(s, task)


def solve_organizing_file_cabinet(task, world):
    s = Scripter(world)
    s.pickup("marker_0")
    s.drop_on_surface("table_0")
    s.pickup("folder_0")
    s.drop_into("cabinet_0")
    s.pickup("document_1")
    s.drop_into("cabinet_0")  # document_0 starts inside already
    return _finish(s, task)


def solve_preparing_salad(task, world):
    s = Scripter(world)
    s.open_if_closed("refrigerator_0")
    s.pickup("carving_knife_0")
    to_slice = ["apple_0", "apple_1", "tomato_0", "tomato_1"]
    while True:
        remaining = [oid for oid in to_slice if "Sliced" not in s.obj(oid).states]
        if not remaining:
            break
        target = s.obj(remaining[0])
        s.goto_face({(target.x, target.y)})
        s.do(PrimitiveAction.slice)  # slices the topmost unsliced in the cell
    plate_cell = s.obj_cell("plate_0")
    for item in ("apple_0", "apple_1", "tomato_0", "tomato_1",
                 "lettuce_0", "radish_0"):
        obj = s.obj(item)
        target = s.obj("plate_0")
        if (eval_relative(s.world, obj, target, "AtSameLocation")
                or eval_relative(s.world, obj, target, "NextTo")):
            continue
        s.place_near(item, {plate_cell})
    return _finish(s, task)


def solve_setting_up_candles(task, world):
    s = Scripter(world)
    for candle in ("candle_0", "candle_1"):
        s.pickup(candle)
        s.drop_on_surface("table_0")
    return _finish(s, task)


def solve_sorting_books(task, world):
    s = Scripter(world)
    for book in ("book_0", "book_1", "hardback_0", "hardback_1"):
        s.pickup(book)
        s.drop_into("shelf_0")
    return _finish(s, task)


def solve_storing_food(task, world):
    s = Scripter(world)
    for item in ("oatmeal_0", "chips_0", "olive_oil_0", "sugar_0"):
        s.pickup(item)
        s.drop_into("cabinet_0")
    return _finish(s, task)


def solve_thawing_frozen_food(task, world):
    s = Scripter(world)
    for item in ("fish_0", "date_0", "olive_0"):
        s.pickup(item)  # opens the refrigerator on first contact
        s.drop_into("sink_0")
    return _finish(s, task)


def solve_throwing_away_leftovers(task, world):
    s = Scripter(world)
    for burger in ("hamburger_0", "hamburger_1"):
        s.pickup(burger)
        s.drop_into("trash_can_0")
    return _finish(s, task)


def solve_watering_houseplants(task, world):
    s = Scripter(world)
    s.toggle_on("sink_0")
    for plant in ("pot_plant_0", "pot_plant_1"):
        s.pickup(plant)
        s.drop_into("sink_0")
        if "Soaked" not in s.obj(plant).states:
            s.nudge()
    return _finish(s, task)


SCRIPTED_SOLVERS = {
    "boxing_books_up_for_storage": solve_boxing_books,
    "cleaning_a_car": solve_cleaning_a_car,
    "cleaning_shoes": solve_cleaning_shoes,
    "cleaning_up_the_kitchen_only": solve_cleaning_up_the_kitchen,
    "collect_misplaced_items": solve_collect_misplaced_items,
    "installing_a_printer": solve_installing_a_printer,
    "laying_wood_floors": solve_laying_wood_floors,
    "making_tea": solve_making_tea,
    "moving_boxes_to_storage": solve_moving_boxes,
    "opening_packages": solve_opening_packages,
    "organizing_file_cabinet": solve_organizing_file_cabinet,
    "preparing_salad": solve_preparing_salad,
    "putting_away_dishes_after_cleaning": solve_putting_away_dishes,
    "setting_up_candles": solve_setting_up_candles,
    "sorting_books": solve_sorting_books,
    "storing_food": solve_storing_food,
    "thawing_frozen_food": solve_thawing_frozen_food,
    "throwing_away_leftovers": solve_throwing_away_leftovers,
    "washing_pots_and_pans": solve_washing_pots_and_pans,
    "watering_houseplants": solve_watering_houseplants,
}


def scripted_actions(task: TaskDefinition, world: GridWorld) -> list[int]:
    solver = SCRIPTED_SOLVERS.get(task.name)
    if solver is None:
        raise PlanningError(f"no scripted solver for task {task.name!r}")
    return solver(task, world)


def bfs_solve(task: TaskDefinition, world: GridWorld,
              max_nodes: int = 200_000) -> list[int] | None:
    """Uninformed breadth-first search over primitive actions, deduplicating
    states by hash. Intended for small grids only."""
    if check_goal(world, task.goal):
        return []
    start = world.clone()
    seen = {start.state_hash()}
    queue = deque([(start, [])])
    nodes = 0
    while queue:
        current, actions = queue.popleft()
        nodes += 1
        if nodes > max_nodes:
            return None
        for action in sorted(valid_primitives(current)):
            child = current.clone()
            apply_primitive(child, action)
            digest = child.state_hash()
            if digest in seen:
                continue
            seen.add(digest)
            child_actions = actions + [int(action)]
            if check_goal(child, task.goal):
                return child_actions
            queue.append((child, child_actions))
    return None
