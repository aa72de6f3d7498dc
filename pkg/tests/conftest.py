"""Shared builders for unit and property tests."""

from __future__ import annotations

import pytest

from gridhouse.procgen import ProcGenConfig, generate_world
from gridhouse.registry import STATE_ORDER, load_registry
from gridhouse.rng import Rng
from gridhouse.world import GridWorld, blank_world


@pytest.fixture(scope="session")
def registry():
    return load_registry()


def world_with(furniture=(), objects=(), size=10, seed=0) -> GridWorld:
    """Blank single-room world with entities at explicit spots.

    furniture: (fid, category, anchor) or (fid, category, anchor, size)
    objects: (oid, category, (x, y, z)) with z None meaning carried
    """
    w = blank_world(size, size, seed=seed)
    for spec in furniture:
        fid, category, anchor = spec[:3]
        size_override = spec[3] if len(spec) > 3 else None
        w.place_furniture(fid, category, anchor, size_override)
    for oid, category, pos in objects:
        w.add_object(oid, category)
        if pos is None:
            w.agent.carrying.append(oid)
        else:
            w.place_object(oid, *pos)
    return w


def random_world(seed: int) -> GridWorld:
    """Procedurally generated world with randomized states and carrying,
    for fuzz/property tests."""
    rng = Rng(seed).derive("fuzz")
    size = 6 + rng.randrange(5)
    # an interior split needs at least 3+1+3 cells in one dimension
    rooms = 1 + rng.randrange(2) if size >= 9 else 1
    config = ProcGenConfig(width=size, height=size, num_rooms=rooms, seed=seed)
    w = generate_world(config)

    # scatter a few objects onto the floor for OnFloor/NextTo variety
    floor_cells = [(x, y) for y in range(w.height) for x in range(w.width)
                   if w.walkable(x, y) and w.cell(x, y).slots[0] is None]
    for oid in sorted(w.objects):
        if floor_cells and rng.randrange(3) == 0:
            cell = floor_cells.pop(rng.randrange(len(floor_cells)))
            w.place_object(oid, cell[0], cell[1], 0)

    for o in sorted(w.objects.values(), key=lambda o: o.id):
        spec = w.registry.objects[o.category]
        for state in STATE_ORDER:
            if spec.can_hold(state) and rng.randrange(4) == 0:
                o.states.add(state)
    for f in sorted(w.furniture.values(), key=lambda f: f.id):
        if f.is_floor:
            continue
        spec = w.registry.furniture[f.category]
        for state in ("Dusty", "Opened", "Stained", "ToggledOn"):
            if spec.can_hold(state) and rng.randrange(4) == 0:
                f.states.add(state)

    movable = [o.id for o in w.objects.values()
               if w.registry.objects[o.category].movable and not o.carried]
    if movable and rng.randrange(3) == 0:
        w.carry_object(movable[rng.randrange(len(movable))])
    w.agent.heading = rng.randrange(4)
    return w
