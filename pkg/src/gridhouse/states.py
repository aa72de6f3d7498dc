"""Symbolic state evaluation and end-of-step transition rules.

Eighteen predicates in three kinds: agent-related (InFOV, InHand, InReach,
InSameRoom), absolute (the eight stored states plus computed OnFloor), and
relative (AtSameLocation, Inside, NextTo, OnTop, Under). Transitions T1-T5
implement soaking, freezing, cleaning, and sweeping so the cleaning/thawing
activities are completable with the primitive action set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .registry import STATE_ORDER
from .world import FurnitureInstance, GridWorld, ObjectInstance

AGENT_PREDICATES = ("InFOV", "InHand", "InReach", "InSameRoom")
ABSOLUTE_PREDICATES = STATE_ORDER + ("OnFloor",)
RELATIVE_PREDICATES = ("AtSameLocation", "Inside", "NextTo", "OnTop", "Under")


@dataclass(frozen=True)
class Predicate:
    name: str
    kind: str  # agent | absolute | relative
    arity: int


PREDICATES: dict[str, Predicate] = {}
for _n in AGENT_PREDICATES:
    PREDICATES[_n] = Predicate(_n, "agent", 1)
for _n in ABSOLUTE_PREDICATES:
    PREDICATES[_n] = Predicate(_n, "absolute", 1)
for _n in RELATIVE_PREDICATES:
    PREDICATES[_n] = Predicate(_n, "relative", 2)

assert len(PREDICATES) == 18


def render_atom(pred: str, *args: str) -> str:
    return f"{pred}({', '.join(args)})"


def can_hold_state(world: GridWorld, entity, state: str) -> bool:
    if isinstance(entity, ObjectInstance):
        return world.object_spec(entity).can_hold(state)
    return world.furniture_spec(entity).can_hold(state)


# -- per-atom evaluation ----------------------------------------------------

def eval_absolute(world: GridWorld, entity, pred: str) -> bool:
    """Unary stored state, or computed OnFloor. Incapable categories are
    simply false; use can_hold_state to distinguish."""
    if pred == "OnFloor":
        if not isinstance(entity, ObjectInstance) or entity.carried:
            return False
        return entity.z == 0 and world.cell(entity.x, entity.y).furniture is None
    if not can_hold_state(world, entity, pred):
        return False
    if pred == "Dusty" and isinstance(entity, FurnitureInstance) and entity.is_floor:
        return bool(entity.dust_cells)
    return pred in entity.states


def eval_agent(world: GridWorld, entity, pred: str) -> bool:
    if pred == "InHand":
        return isinstance(entity, ObjectInstance) and entity.carried
    if pred == "InFOV":
        facing = world.facing_cell()
        if facing is None:
            return False
        if isinstance(entity, FurnitureInstance):
            return not entity.is_floor and entity.covers(*facing)
        return (not entity.carried) and (entity.x, entity.y) == facing
    if pred == "InReach":
        return eval_agent(world, entity, "InFOV") or eval_agent(world, entity, "InHand")
    if pred == "InSameRoom":
        return world.room_of_entity(entity) == world.cell(world.agent.x, world.agent.y).room
    raise ValueError(f"not an agent predicate: {pred}")


def _cells_of(entity) -> list[tuple[int, int]]:
    if isinstance(entity, FurnitureInstance):
        return list(entity.cells())
    if entity.carried:
        return []
    return [(entity.x, entity.y)]


def eval_relative(world: GridWorld, a, b, pred: str) -> bool:
    """Binary spatial relation. Carried entities relate to nothing."""
    if a is b:
        return False
    if pred == "AtSameLocation":
        ca, cb = _cells_of(a), _cells_of(b)
        return bool(set(ca) & set(cb))
    if pred == "NextTo":
        ca, cb = _cells_of(a), _cells_of(b)
        bset = set(cb)
        for x, y in ca:
            if ((x + 1, y) in bset or (x - 1, y) in bset
                    or (x, y + 1) in bset or (x, y - 1) in bset):
                return True
        return False
    if pred == "OnTop":
        if not isinstance(a, ObjectInstance) or a.carried:
            return False
        if isinstance(b, FurnitureInstance):
            if b.is_floor:
                return a.z == 0 and world.cell(a.x, a.y).furniture is None \
                    and world.cell(a.x, a.y).room == b.room
            return b.surface_level() == a.z and b.covers(a.x, a.y)
        if b.carried:
            return False
        return (a.x, a.y) == (b.x, b.y) and a.z == b.z + 1
    if pred == "Under":
        return eval_relative(world, b, a, "OnTop")
    if pred == "Inside":
        if not isinstance(a, ObjectInstance) or a.carried:
            return False
        if isinstance(b, FurnitureInstance):
            return (b.container and not b.is_floor
                    and b.covers(a.x, a.y) and a.z in b.occupied_z())
        if b.carried or not world.object_spec(b).container:
            return False
        return (a.x, a.y) == (b.x, b.y) and a.z == b.z + 1
    raise ValueError(f"not a relative predicate: {pred}")


def eval_atom(world: GridWorld, pred: str, args: tuple) -> bool:
    spec = PREDICATES[pred]
    entities = [world.entity(a) if isinstance(a, str) else a for a in args]
    if spec.kind == "agent":
        return eval_agent(world, entities[0], pred)
    if spec.kind == "absolute":
        return eval_absolute(world, entities[0], pred)
    return eval_relative(world, entities[0], entities[1], pred)


# -- exhaustive enumeration (independent brute-force route) -------------------

def all_true_predicates(world: GridWorld) -> list[str]:
    """Every true ground atom, re-derived from raw geometry with its own
    scans (kept independent of the eval_* fast paths on purpose)."""
    atoms: list[str] = []
    agent = world.agent
    fx_fy = None
    dx, dy = ((0, -1), (1, 0), (0, 1), (-1, 0))[agent.heading]
    if 0 <= agent.x + dx < world.width and 0 <= agent.y + dy < world.height:
        fx_fy = (agent.x + dx, agent.y + dy)
    agent_room = world.cell(agent.x, agent.y).room

    objects = sorted(world.objects.values(), key=lambda o: o.id)
    furniture = sorted(world.furniture.values(), key=lambda f: f.id)
    footprints = {f.id: set(f.cells()) for f in furniture}

    def cellset(e):
        if isinstance(e, FurnitureInstance):
            return footprints[e.id]
        return set() if e.carried else {(e.x, e.y)}

    for o in objects:
        in_hand = o.id in agent.carrying
        in_fov = fx_fy is not None and not o.carried and (o.x, o.y) == fx_fy
        if in_fov:
            atoms.append(render_atom("InFOV", o.id))
        if in_hand:
            atoms.append(render_atom("InHand", o.id))
        if in_fov or in_hand:
            atoms.append(render_atom("InReach", o.id))
        room = agent_room if o.carried else world.cell(o.x, o.y).room
        if room == agent_room:
            atoms.append(render_atom("InSameRoom", o.id))
        spec = world.object_spec(o)
        for state in STATE_ORDER:
            if state in o.states and spec.can_hold(state):
                atoms.append(render_atom(state, o.id))
        if not o.carried and o.z == 0 and world.cell(o.x, o.y).furniture is None:
            atoms.append(render_atom("OnFloor", o.id))

    for f in furniture:
        if not f.is_floor and fx_fy is not None and fx_fy in footprints[f.id]:
            atoms.append(render_atom("InFOV", f.id))
            atoms.append(render_atom("InReach", f.id))
        if f.room == agent_room:
            atoms.append(render_atom("InSameRoom", f.id))
        spec = world.furniture_spec(f)
        if f.is_floor:
            if f.dust_cells:
                atoms.append(render_atom("Dusty", f.id))
            continue
        for state in ("Dusty", "Opened", "Stained", "ToggledOn"):
            if state in f.states and spec.can_hold(state):
                atoms.append(render_atom(state, f.id))

    entities = objects + furniture
    for a in entities:
        ca = cellset(a)
        if not ca:
            continue
        for b in entities:
            if a is b:
                continue
            cb = cellset(b)
            if not cb:
                continue
            if ca & cb:
                atoms.append(render_atom("AtSameLocation", a.id, b.id))
            if any((x + ddx, y + ddy) in cb
                   for x, y in ca for ddx, ddy in ((1, 0), (-1, 0), (0, 1), (0, -1))):
                atoms.append(render_atom("NextTo", a.id, b.id))
            if isinstance(a, ObjectInstance):
                on_top = False
                if isinstance(b, FurnitureInstance):
                    if b.is_floor:
                        on_top = (a.z == 0 and world.cell(a.x, a.y).furniture is None
                                  and world.cell(a.x, a.y).room == b.room)
                    else:
                        on_top = (b.height < 3 and a.z == b.height
                                  and (a.x, a.y) in cb)
                elif not b.carried:
                    on_top = (a.x, a.y) == (b.x, b.y) and a.z == b.z + 1
                if on_top:
                    atoms.append(render_atom("OnTop", a.id, b.id))
                    atoms.append(render_atom("Under", b.id, a.id))
                inside = False
                if isinstance(b, FurnitureInstance):
                    inside = (b.container and not b.is_floor
                              and (a.x, a.y) in cb and a.z < b.height)
                elif not b.carried and world.object_spec(b).container:
                    inside = (a.x, a.y) == (b.x, b.y) and a.z == b.z + 1
                if inside:
                    atoms.append(render_atom("Inside", a.id, b.id))
    return atoms


# -- end-of-step transitions --------------------------------------------------

TRANSITION_RULES = ("T1_soak", "T2_freeze", "T3_clean_dust", "T4_clean_stain", "T5_sweep")


@dataclass(frozen=True)
class StateChange:
    rule: str
    entity: str
    state: str
    gained: bool

    def atom_delta(self) -> str:
        sign = "+" if self.gained else "-"
        return f"{sign}{self.state}({self.entity})"


def _toggled_container_of(world: GridWorld, obj: ObjectInstance, category: str):
    if obj.carried:
        return None
    f_id = world.cell(obj.x, obj.y).furniture
    if f_id is None:
        return None
    f = world.furniture[f_id]
    if f.category == category and "ToggledOn" in f.states and obj.z in f.occupied_z():
        return f
    return None


def _near_target(world: GridWorld, mover, target) -> bool:
    """mover is at/next to target, or the agent reaches target while holding mover."""
    if eval_relative(world, mover, target, "AtSameLocation"):
        return True
    if eval_relative(world, mover, target, "NextTo"):
        return True
    return (isinstance(mover, ObjectInstance) and mover.carried
            and eval_agent(world, target, "InReach"))


def apply_transitions(world: GridWorld) -> list[StateChange]:
    """Apply rules T1..T5 in order; deterministic and idempotent.

    T1 soak: soakable object inside a toggled-on sink becomes Soaked.
    T2 freeze: food inside a toggled-on refrigerator becomes Frozen.
    T3 clean-dust: a dusty entity loses Dusty when a soaked cleaning tool is
       held with the target in reach, or lies at/next to the target.
    T4 clean-stain: as T3, additionally requiring soap at/next to/in reach.
    T5 sweep: a dusty floor cell is cleared when the agent faces it holding
       a broom.
    """
    changes: list[StateChange] = []
    objects = sorted(world.objects.values(), key=lambda o: o.id)

    for o in objects:  # T1
        if world.object_spec(o).soakable and "Soaked" not in o.states \
                and _toggled_container_of(world, o, "sink") is not None:
            o.states.add("Soaked")
            changes.append(StateChange("T1_soak", o.id, "Soaked", True))

    for o in objects:  # T2
        if world.object_spec(o).food and "Frozen" not in o.states \
                and _toggled_container_of(world, o, "refrigerator") is not None:
            o.states.add("Frozen")
            changes.append(StateChange("T2_freeze", o.id, "Frozen", True))

    tools = [o for o in objects
             if world.object_spec(o).cleaning_tool and "Soaked" in o.states]
    soaps = [o for o in objects if world.object_spec(o).soap]
    targets = sorted(
        [e for e in list(world.objects.values()) + list(world.furniture.values())
         if not (isinstance(e, FurnitureInstance) and e.is_floor)],
        key=lambda e: e.id)

    def tool_at(target) -> bool:
        return any(_near_target(world, t, target) for t in tools if t is not target)

    def soap_at(target) -> bool:
        return any(
            eval_agent(world, s, "InReach")
            or eval_relative(world, s, target, "AtSameLocation")
            or eval_relative(world, s, target, "NextTo")
            for s in soaps if s is not target)

    for e in targets:  # T3
        if "Dusty" in e.states and tool_at(e):
            e.states.discard("Dusty")
            changes.append(StateChange("T3_clean_dust", e.id, "Dusty", False))

    for e in targets:  # T4
        if "Stained" in e.states and tool_at(e) and soap_at(e):
            e.states.discard("Stained")
            changes.append(StateChange("T4_clean_stain", e.id, "Stained", False))

    facing = world.facing_cell()
    if facing is not None and any(
            world.object_spec(world.objects[oid]).sweeper for oid in world.agent.carrying):
        for f in sorted(world.furniture.values(), key=lambda f: f.id):  # T5
            if f.is_floor and facing in f.dust_cells:
                f.dust_cells.discard(facing)
                changes.append(StateChange("T5_sweep", f.id, "Dusty", False))
    return changes
