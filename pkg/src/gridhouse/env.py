"""Episode lifecycle: reset/step, observation encoding, rewards, time limits.

Observations are integer tensors with 31 channels per cell: three z-levels of
[object category id, 8 state bits in fixed order] (27 channels), then
[furniture category id, opened, toggled-on, dirty] (4 channels). Partial mode
is a 7x7 egocentric window rotated so the agent faces up, anchored at the
agent's own cell (bottom-center of the window); out-of-bounds cells are zero.
Implicit floor entities are not encoded, so empty cells are all-zero.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .actions import (CartesianActionSpace, PrimitiveAction, _apply_cartesian_effect,
                      _apply_effect, ActionOutcome, build_cartesian_space,
                      default_validity_table)
from .registry import STATE_ORDER, Registry, load_registry
from .states import apply_transitions
from .tasks import (DenseUnavailable, GoalProgress, TaskDefinition, compute_reward,
                    load_task)
from .procgen import instantiate_task
from .world import HEADING_DELTAS, GridWorld

OBS_CHANNELS = 31
PARTIAL_VIEW = 7

_STATE_BIT = {name: i + 1 for i, name in enumerate(STATE_ORDER)}


class EpisodeFinished(Exception):
    pass


@dataclass(frozen=True)
class EnvConfig:
    task: str = "installing_a_printer"
    action_mode: str = "primitive"        # primitive | cartesian
    observation_mode: str = "partial"     # partial | full
    reward_mode: str = "sparse"           # sparse | dense
    max_steps: int = 1000
    grid: tuple[int, int] | None = None
    rooms: int | None = None
    layout: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.action_mode not in ("primitive", "cartesian"):
            raise ValueError(f"unknown action mode {self.action_mode!r}")
        if self.observation_mode not in ("partial", "full"):
            raise ValueError(f"unknown observation mode {self.observation_mode!r}")
        if self.reward_mode not in ("sparse", "dense"):
            raise ValueError(f"unknown reward mode {self.reward_mode!r}")

    def to_dict(self) -> dict:
        return {
            "task": self.task, "action_mode": self.action_mode,
            "observation_mode": self.observation_mode, "reward_mode": self.reward_mode,
            "max_steps": self.max_steps,
            "grid": list(self.grid) if self.grid else None,
            "rooms": self.rooms, "layout": self.layout, "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnvConfig":
        d = dict(d)
        if d.get("grid"):
            d["grid"] = tuple(d["grid"])
        return cls(**d)


@dataclass
class StepResult:
    observation: np.ndarray
    reward: float
    terminated: bool
    truncated: bool
    info: dict = field(default_factory=dict)


def _encode_cell(world: GridWorld, cell, out) -> None:
    reg = world.registry
    slots = cell.slots
    for z in (0, 1, 2):
        oid = slots[z]
        if oid is None:
            continue
        obj = world.objects[oid]
        base = z * 9
        out[base] = reg.object_ids[obj.category]
        for state in obj.states:
            out[base + _STATE_BIT[state]] = 1
    fid = cell.furniture
    if fid is not None:
        f = world.furniture[fid]
        out[27] = reg.furniture_ids[f.category]
        states = f.states
        if "Opened" in states:
            out[28] = 1
        if "ToggledOn" in states:
            out[29] = 1
        if "Dusty" in states or "Stained" in states:
            out[30] = 1


def encode_observation(world: GridWorld, mode: str) -> np.ndarray:
    """Pure function of the world; identical worlds give identical tensors."""
    if mode == "full":
        obs = np.zeros((world.height, world.width, OBS_CHANNELS), dtype=np.uint8)
        for y in range(world.height):
            row = obs[y]
            for x in range(world.width):
                cell = world.cell(x, y)
                if cell.furniture is not None or cell.slots[0] is not None \
                        or cell.slots[1] is not None or cell.slots[2] is not None:
                    _encode_cell(world, cell, row[x])
        return obs
    if mode != "partial":
        raise ValueError(f"unknown observation mode {mode!r}")
    obs = np.zeros((PARTIAL_VIEW, PARTIAL_VIEW, OBS_CHANNELS), dtype=np.uint8)
    ax, ay = world.agent.x, world.agent.y
    fdx, fdy = HEADING_DELTAS[world.agent.heading]
    rdx, rdy = HEADING_DELTAS[(world.agent.heading + 1) % 4]
    for row in range(PARTIAL_VIEW):
        forward = PARTIAL_VIEW - 1 - row
        bx, by = ax + forward * fdx, ay + forward * fdy
        for col in range(PARTIAL_VIEW):
            lateral = col - PARTIAL_VIEW // 2
            x, y = bx + lateral * rdx, by + lateral * rdy
            if not world.in_bounds(x, y):
                continue
            cell = world.cell(x, y)
            if cell.furniture is not None or cell.slots[0] is not None \
                    or cell.slots[1] is not None or cell.slots[2] is not None:
                _encode_cell(world, cell, obs[row, col])
    return obs


def observation_bytes(obs: np.ndarray) -> bytes:
    """Flat little-endian dump for cross-implementation diffing."""
    return np.ascontiguousarray(obs, dtype="<u1").tobytes()


@dataclass(frozen=True)
class ActionSpaceDescriptor:
    mode: str
    n: int
    entries: tuple  # action names, or (verb, object_id) pairs after the base 4

    def encode(self, entry) -> int:
        return self.entries.index(entry)

    def decode(self, index: int):
        return self.entries[index]


class Environment:
    """One exclusively-owned world per instance; reset/step are the only
    mutation points. Identical (config, seed, actions) replays bit-identically."""

    def __init__(self, config: EnvConfig, registry: Registry | None = None):
        self.config = config
        self.seed = config.seed
        self.registry = registry or load_registry()
        self.task: TaskDefinition = load_task(config.task, registry=self.registry)
        if config.reward_mode == "dense" and self.task.milestones is None:
            raise DenseUnavailable(self.task.name)
        self.world: GridWorld | None = None
        self.progress = GoalProgress()
        self._finished = True
        self._cartesian: CartesianActionSpace | None = None
        if config.action_mode == "cartesian":
            self._cartesian = build_cartesian_space(
                self.task.objects(self.registry),
                default_validity_table(self.registry))

    # -- spaces -----------------------------------------------------------

    def action_space(self) -> ActionSpaceDescriptor:
        if self.config.action_mode == "primitive":
            return ActionSpaceDescriptor(
                "primitive", len(PrimitiveAction),
                tuple(a.name for a in PrimitiveAction))
        space = self._cartesian
        return ActionSpaceDescriptor(
            "cartesian", space.dimension, tuple(space.base_actions) + space.pairs)

    def observation_space(self) -> dict:
        if self.config.observation_mode == "partial":
            shape = (PARTIAL_VIEW, PARTIAL_VIEW, OBS_CHANNELS)
        else:
            grid = self.config.grid or self.task.config.grid
            shape = (grid[1], grid[0], OBS_CHANNELS)
        return {"shape": shape, "dtype": "uint8"}

    @property
    def cartesian_space(self) -> CartesianActionSpace | None:
        return self._cartesian

    # -- lifecycle ----------------------------------------------------------

    def reset(self, seed: int | None = None) -> np.ndarray:
        if seed is not None:
            self.seed = seed
        self.world = instantiate_task(
            self.task, self.seed, registry=self.registry,
            grid=self.config.grid, num_rooms=self.config.rooms,
            layout=self.config.layout)
        self.world.step_count = 0
        self.progress = GoalProgress()
        self._finished = False
        return encode_observation(self.world, self.config.observation_mode)

    def effective_config(self) -> EnvConfig:
        return dataclasses.replace(self.config, seed=self.seed)

    def step(self, action) -> StepResult:
        if self.world is None or self._finished:
            raise EpisodeFinished("call reset() before stepping")
        world = self.world
        outcome = self._apply(action)
        transition_changes = apply_transitions(world)
        reward, self.progress = compute_reward(
            world, self.task, self.progress, self.config.reward_mode)
        world.step_count += 1
        terminated = self.progress.goal_met
        truncated = (not terminated) and world.step_count >= self.config.max_steps
        self._finished = terminated or truncated
        obs = encode_observation(world, self.config.observation_mode)
        info = {
            "goal_progress": {
                "satisfied_milestones": len(self.progress.satisfied_milestones),
                "total_milestones": len(self.task.milestones or ()),
                "goal_met": self.progress.goal_met,
            },
            "action_outcome": {"succeeded": outcome.succeeded,
                               "reason": outcome.reason},
            "state_changes": outcome.state_changes
            + [c.atom_delta() for c in transition_changes],
        }
        return StepResult(obs, reward, terminated, truncated, info)

    def _apply(self, action) -> ActionOutcome:
        if self.config.action_mode == "primitive":
            prim = action if isinstance(action, PrimitiveAction) else PrimitiveAction(int(action))
            return _apply_effect(self.world, prim)
        entry = action
        if isinstance(action, (int, np.integer)):
            entry = self._cartesian.decode(int(action))
        elif isinstance(action, tuple):
            if tuple(action) not in self._cartesian.pairs:
                return ActionOutcome(False, "NotInSpace")
        return _apply_cartesian_effect(self.world, entry)

    @property
    def finished(self) -> bool:
        return self._finished
