"""Primitive and Cartesian action spaces with preconditions and effects.

The primitive space is a fixed 15-way discrete space shared by every task:
3 navigation actions plus 12 interactions, all resolved against the cell the
agent faces. The Cartesian space is task-specific: 4 base actions plus one
entry per valid (verb, object) pair, which lifts the one-item carry limit.

Failed actions never mutate the world; the outcome carries a reason code
(Blocked, HandFull, HandEmpty, NothingThere, Incapable, ContainerClosed,
Unsupported, NotInSpace).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from .registry import Registry
from .states import apply_transitions
from .world import GridWorld, ObjectInstance, Z_LEVELS


class PrimitiveAction(IntEnum):
    forward = 0
    turn_left = 1
    turn_right = 2
    close = 3
    cook = 4
    drop_bottom = 5
    drop_middle = 6
    drop_top = 7
    drop_in = 8
    open = 9
    pickup_bottom = 10
    pickup_middle = 11
    pickup_top = 12
    slice = 13
    toggle = 14


NAVIGATION_ACTIONS = (PrimitiveAction.forward, PrimitiveAction.turn_left,
                      PrimitiveAction.turn_right)
DROP_Z = {PrimitiveAction.drop_bottom: 0, PrimitiveAction.drop_middle: 1,
          PrimitiveAction.drop_top: 2}
PICKUP_Z = {PrimitiveAction.pickup_bottom: 0, PrimitiveAction.pickup_middle: 1,
            PrimitiveAction.pickup_top: 2}

# Verbs usable in (verb, object) pairs; pickup needs no z (the object's own).
CARTESIAN_VERBS = ("close", "cook", "drop_bottom", "drop_middle", "drop_top",
                   "drop_in", "open", "pickup", "slice", "toggle")
CARTESIAN_BASE = ("forward", "turn_left", "turn_right", "no_op")


@dataclass
class ActionOutcome:
    succeeded: bool
    reason: str | None = None
    state_changes: list[str] = field(default_factory=list)


_FAIL_CODES = ("Blocked", "HandFull", "HandEmpty", "NothingThere", "Incapable",
               "ContainerClosed", "Unsupported", "NotInSpace")


def _fail(reason: str) -> ActionOutcome:
    assert reason in _FAIL_CODES
    return ActionOutcome(False, reason)


# -- shared precondition helpers ----------------------------------------------


def _facing(world: GridWorld):
    xy = world.facing_cell()
    if xy is None:
        return None, None
    return xy, world.cell(*xy)


def _interior_gate(world: GridWorld, cell, z: int) -> str | None:
    """ContainerClosed when slot z sits inside a closed openable container."""
    if cell.furniture is None:
        return None
    f = world.furniture[cell.furniture]
    if z in f.occupied_z():
        if not f.container:
            return "Blocked"
        if f.openable and "Opened" not in f.states:
            return "ContainerClosed"
    return None


def _check_pickup(world: GridWorld, z: int, enforce_cap: bool) -> str | None:
    xy, cell = _facing(world)
    if cell is None or cell.wall:
        return "NothingThere"
    oid = cell.slots[z]
    if oid is None:
        return "NothingThere"
    if enforce_cap and world.agent.carrying:
        return "HandFull"
    if not world.object_spec(world.objects[oid]).movable:
        return "Incapable"
    gate = _interior_gate(world, cell, z)
    if gate == "ContainerClosed":
        return gate
    return None


def _check_drop(world: GridWorld, z: int, carrying_ok: bool) -> str | None:
    if not carrying_ok:
        return "HandEmpty"
    xy, cell = _facing(world)
    if cell is None or cell.wall:
        return "Blocked"
    if cell.slots[z] is not None:
        return "Blocked"
    if cell.furniture is not None:
        f = world.furniture[cell.furniture]
        if z in f.occupied_z():
            if not f.container:
                return "Blocked"
            if f.openable and "Opened" not in f.states:
                return "ContainerClosed"
            return None  # resting inside the container
        if z == 0 or (z - 1) in f.occupied_z() or cell.slots[z - 1] is not None:
            return None
        return "Unsupported"
    if z == 0 or cell.slots[z - 1] is not None:
        return None
    return "Unsupported"


def _drop_in_target(world: GridWorld):
    """(slot_z, container_entity) for the facing cell, or a failure code.

    Object containers win over the cell's furniture, scanned top-down."""
    xy, cell = _facing(world)
    if cell is None or cell.wall:
        return None, "NothingThere"
    first_err = None
    for z in (2, 1, 0):
        oid = cell.slots[z]
        if oid is None:
            continue
        obj = world.objects[oid]
        spec = world.object_spec(obj)
        if not spec.container:
            continue
        if spec.openable and "Opened" not in obj.states:
            first_err = first_err or "ContainerClosed"
        elif z + 1 < Z_LEVELS and cell.slots[z + 1] is None:
            return (z + 1, obj), None
        else:
            first_err = first_err or "Blocked"
    if cell.furniture is not None:
        f = world.furniture[cell.furniture]
        if f.container:
            if f.openable and "Opened" not in f.states:
                return None, first_err or "ContainerClosed"
            for z in f.occupied_z():
                if cell.slots[z] is None:
                    return (z, f), None
            return None, first_err or "Blocked"
    return None, first_err or "NothingThere"


def _flip_target(world: GridWorld, capability: str, want_state: str | None,
                 present: bool | None):
    """Topmost capable object in the facing cell, else the facing furniture.

    want_state/present filter by current state (open needs not-Opened etc.);
    returns (entity, None) or (None, failure code)."""
    xy, cell = _facing(world)
    if cell is None or cell.wall:
        return None, "NothingThere"
    anything = cell.furniture is not None or any(cell.slots)
    for z in (2, 1, 0):
        oid = cell.slots[z]
        if oid is None:
            continue
        obj = world.objects[oid]
        if getattr(world.object_spec(obj), capability):
            if want_state is None or ((want_state in obj.states) == present):
                return obj, None
    if cell.furniture is not None:
        f = world.furniture[cell.furniture]
        if getattr(world.furniture_spec(f), capability):
            if want_state is None or ((want_state in f.states) == present):
                return f, None
    return None, ("Incapable" if anything else "NothingThere")


def _slice_target(world: GridWorld):
    if not any(world.object_spec(world.objects[oid]).slicer
               for oid in world.agent.carrying):
        return None, "Incapable"
    xy, cell = _facing(world)
    if cell is None or cell.wall:
        return None, "NothingThere"
    for z in (2, 1, 0):
        oid = cell.slots[z]
        if oid is None:
            continue
        obj = world.objects[oid]
        if world.object_spec(obj).sliceable and "Sliced" not in obj.states:
            return obj, None
    return None, "NothingThere"


def _cook_target(world: GridWorld):
    xy, cell = _facing(world)
    if cell is None or cell.wall:
        return None, "Incapable"
    if cell.furniture is None:
        return None, "Incapable"
    stove = world.furniture[cell.furniture]
    if stove.category != "stove" or "ToggledOn" not in stove.states:
        return None, "Incapable"
    for z in (2, 1, 0):
        oid = cell.slots[z]
        if oid is not None:
            obj = world.objects[oid]
            if world.object_spec(obj).food and "Cooked" not in obj.states:
                return obj, None
    for oid in world.agent.carrying:
        obj = world.objects[oid]
        if world.object_spec(obj).food and "Cooked" not in obj.states:
            return obj, None
    return None, "NothingThere"


def _check_primitive(world: GridWorld, action: PrimitiveAction) -> str | None:
    """Failure code if the action cannot succeed right now, else None."""
    if action == PrimitiveAction.forward:
        xy = world.facing_cell()
        if xy is None or not world.walkable(*xy):
            return "Blocked"
        return None
    if action in (PrimitiveAction.turn_left, PrimitiveAction.turn_right):
        return None
    if action in PICKUP_Z:
        return _check_pickup(world, PICKUP_Z[action], enforce_cap=True)
    if action in DROP_Z:
        return _check_drop(world, DROP_Z[action], bool(world.agent.carrying))
    if action == PrimitiveAction.drop_in:
        if not world.agent.carrying:
            return "HandEmpty"
        _, err = _drop_in_target(world)
        return err
    if action == PrimitiveAction.open:
        _, err = _flip_target(world, "openable", "Opened", False)
        return err
    if action == PrimitiveAction.close:
        _, err = _flip_target(world, "openable", "Opened", True)
        return err
    if action == PrimitiveAction.toggle:
        _, err = _flip_target(world, "toggleable", None, None)
        return err
    if action == PrimitiveAction.slice:
        _, err = _slice_target(world)
        return err
    if action == PrimitiveAction.cook:
        _, err = _cook_target(world)
        return err
    raise ValueError(action)


def valid_primitives(world: GridWorld) -> set[PrimitiveAction]:
    """Exactly the primitives whose application would succeed; pure."""
    return {a for a in PrimitiveAction if _check_primitive(world, a) is None}


def _apply_effect(world: GridWorld, action: PrimitiveAction) -> ActionOutcome:
    err = _check_primitive(world, action)
    if err is not None:
        return _fail(err)
    changes: list[str] = []
    if action == PrimitiveAction.forward:
        x, y = world.facing_cell()
        world.agent.x, world.agent.y = x, y
    elif action == PrimitiveAction.turn_left:
        world.agent.heading = (world.agent.heading - 1) % 4
    elif action == PrimitiveAction.turn_right:
        world.agent.heading = (world.agent.heading + 1) % 4
    elif action in PICKUP_Z:
        x, y = world.facing_cell()
        oid = world.cell(x, y).slots[PICKUP_Z[action]]
        world.carry_object(oid)
    elif action in DROP_Z:
        oid = world.agent.carrying[-1]
        x, y = world.facing_cell()
        world.place_object(oid, x, y, DROP_Z[action])
    elif action == PrimitiveAction.drop_in:
        (z, _), _ = _drop_in_target(world)
        oid = world.agent.carrying[-1]
        x, y = world.facing_cell()
        world.place_object(oid, x, y, z)
    elif action == PrimitiveAction.open:
        target, _ = _flip_target(world, "openable", "Opened", False)
        target.states.add("Opened")
        changes.append(f"+Opened({target.id})")
    elif action == PrimitiveAction.close:
        target, _ = _flip_target(world, "openable", "Opened", True)
        target.states.discard("Opened")
        changes.append(f"-Opened({target.id})")
    elif action == PrimitiveAction.toggle:
        target, _ = _flip_target(world, "toggleable", None, None)
        if "ToggledOn" in target.states:
            target.states.discard("ToggledOn")
            changes.append(f"-ToggledOn({target.id})")
        else:
            target.states.add("ToggledOn")
            changes.append(f"+ToggledOn({target.id})")
    elif action == PrimitiveAction.slice:
        target, _ = _slice_target(world)
        target.states.add("Sliced")
        changes.append(f"+Sliced({target.id})")
    elif action == PrimitiveAction.cook:
        target, _ = _cook_target(world)
        target.states.add("Cooked")
        changes.append(f"+Cooked({target.id})")
    return ActionOutcome(True, state_changes=changes)


def apply_primitive(world: GridWorld, action: PrimitiveAction) -> ActionOutcome:
    """Apply one primitive; on success, end-of-step transitions run too.
    A failed action leaves the world byte-identical."""
    outcome = _apply_effect(world, action)
    if outcome.succeeded:
        outcome.state_changes.extend(
            c.atom_delta() for c in apply_transitions(world))
    return outcome


# -- Cartesian space ----------------------------------------------------------


class UnknownCategory(Exception):
    pass


@dataclass(frozen=True)
class CartesianActionSpace:
    base_actions: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...]  # (verb, object_id), task-file order

    @property
    def dimension(self) -> int:
        return len(self.base_actions) + len(self.pairs)

    def decode(self, index: int):
        if index < 0 or index >= self.dimension:
            raise IndexError(index)
        if index < len(self.base_actions):
            return self.base_actions[index]
        return self.pairs[index - len(self.base_actions)]

    def encode(self, entry) -> int:
        if isinstance(entry, str):
            return self.base_actions.index(entry)
        return len(self.base_actions) + self.pairs.index(tuple(entry))


def default_validity_table(registry: Registry) -> dict[str, tuple[str, ...]]:
    """Verb validity per object category, derived from capability flags."""
    table = {}
    for name, spec in registry.objects.items():
        verbs = []
        for verb in CARTESIAN_VERBS:
            if verb in ("pickup", "drop_bottom", "drop_middle", "drop_top", "drop_in"):
                ok = spec.movable
            elif verb in ("open", "close"):
                ok = spec.openable
            elif verb == "toggle":
                ok = spec.toggleable
            elif verb == "slice":
                ok = spec.sliceable
            else:  # cook
                ok = spec.food
            if ok:
                verbs.append(verb)
        table[name] = tuple(verbs)
    return table


def build_cartesian_space(task_objects: list[tuple[str, str]],
                          validity_table: dict[str, tuple[str, ...]]) -> CartesianActionSpace:
    """4 base actions + valid (verb, object) pairs, deterministic order:
    objects as listed, verbs in CARTESIAN_VERBS order."""
    pairs = []
    for oid, category in task_objects:
        if category not in validity_table:
            raise UnknownCategory(category)
        valid = set(validity_table[category])
        for verb in CARTESIAN_VERBS:
            if verb in valid:
                pairs.append((verb, oid))
    return CartesianActionSpace(CARTESIAN_BASE, tuple(pairs))


def _object_in_reach(world: GridWorld, obj: ObjectInstance) -> bool:
    if obj.carried:
        return True
    facing = world.facing_cell()
    return facing is not None and (obj.x, obj.y) == facing


def _apply_cartesian_effect(world: GridWorld, entry) -> ActionOutcome:
    if isinstance(entry, str):
        if entry == "no_op":
            return ActionOutcome(True)
        return _apply_effect(world, PrimitiveAction[entry])

    verb, oid = entry
    obj = world.objects.get(oid)
    if obj is None:
        return _fail("NothingThere")
    spec = world.object_spec(obj)
    changes: list[str] = []

    if verb == "pickup":
        if obj.carried:
            return _fail("Incapable")
        if not _object_in_reach(world, obj):
            return _fail("NothingThere")
        if not spec.movable:
            return _fail("Incapable")
        cell = world.cell(obj.x, obj.y)
        gate = _interior_gate(world, cell, obj.z)
        if gate == "ContainerClosed":
            return _fail(gate)
        world.carry_object(oid)
        return ActionOutcome(True)

    if verb in ("drop_bottom", "drop_middle", "drop_top"):
        z = {"drop_bottom": 0, "drop_middle": 1, "drop_top": 2}[verb]
        if oid not in world.agent.carrying:
            return _fail("HandEmpty")
        err = _check_drop(world, z, True)
        if err is not None:
            return _fail(err)
        x, y = world.facing_cell()
        world.place_object(oid, x, y, z)
        return ActionOutcome(True)

    if verb == "drop_in":
        if oid not in world.agent.carrying:
            return _fail("HandEmpty")
        target, err = _drop_in_target(world)
        if err is not None:
            return _fail(err)
        z, _container = target
        x, y = world.facing_cell()
        world.place_object(oid, x, y, z)
        return ActionOutcome(True)

    if not _object_in_reach(world, obj):
        return _fail("NothingThere")

    if verb == "toggle":
        if not spec.toggleable:
            return _fail("Incapable")
        if "ToggledOn" in obj.states:
            obj.states.discard("ToggledOn")
            changes.append(f"-ToggledOn({oid})")
        else:
            obj.states.add("ToggledOn")
            changes.append(f"+ToggledOn({oid})")
        return ActionOutcome(True, state_changes=changes)
    if verb == "open":
        if not spec.openable or "Opened" in obj.states:
            return _fail("Incapable")
        obj.states.add("Opened")
        return ActionOutcome(True, state_changes=[f"+Opened({oid})"])
    if verb == "close":
        if not spec.openable or "Opened" not in obj.states:
            return _fail("Incapable")
        obj.states.discard("Opened")
        return ActionOutcome(True, state_changes=[f"-Opened({oid})"])
    if verb == "slice":
        if not spec.sliceable or "Sliced" in obj.states:
            return _fail("Incapable")
        if not any(world.object_spec(world.objects[c]).slicer
                   for c in world.agent.carrying):
            return _fail("Incapable")
        obj.states.add("Sliced")
        return ActionOutcome(True, state_changes=[f"+Sliced({oid})"])
    if verb == "cook":
        if not spec.food or "Cooked" in obj.states:
            return _fail("Incapable")
        facing = world.facing_cell()
        if facing is None:
            return _fail("Incapable")
        cell = world.cell(*facing)
        if cell.furniture is None:
            return _fail("Incapable")
        stove = world.furniture[cell.furniture]
        if stove.category != "stove" or "ToggledOn" not in stove.states:
            return _fail("Incapable")
        obj.states.add("Cooked")
        return ActionOutcome(True, state_changes=[f"+Cooked({oid})"])
    raise ValueError(f"unknown verb {verb!r}")


def apply_cartesian(world: GridWorld, entry,
                    space: CartesianActionSpace | None = None) -> ActionOutcome:
    """Apply a base-action name or (verb, object_id) pair. With a space given,
    entries outside it fail as NotInSpace. Transitions run after success."""
    if space is not None:
        if isinstance(entry, str):
            if entry not in space.base_actions:
                return _fail("NotInSpace")
        elif tuple(entry) not in space.pairs:
            return _fail("NotInSpace")
    outcome = _apply_cartesian_effect(world, entry)
    if outcome.succeeded:
        outcome.state_changes.extend(
            c.atom_delta() for c in apply_transitions(world))
    return outcome
