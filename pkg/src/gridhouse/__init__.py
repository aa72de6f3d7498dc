"""gridhouse: a fast, deterministic 3D-gridworld simulator for long-horizon
household activities."""

from .actions import (ActionOutcome, CartesianActionSpace, PrimitiveAction,
                      apply_cartesian, apply_primitive, build_cartesian_space,
                      default_validity_table, valid_primitives)
from .env import (EnvConfig, Environment, EpisodeFinished, StepResult,
                  encode_observation, observation_bytes)
from .procgen import (PlacementExhausted, ProcGenConfig, Unsplittable,
                      generate_world, instantiate_task, reachability_check)
from .registry import Registry, load_registry
from .rng import Rng
from .states import (all_true_predicates, apply_transitions, eval_absolute,
                     eval_agent, eval_relative)
from .tasks import (GoalProgress, TaskDefinition, check_goal, compute_reward,
                    load_task, load_task_library, parse_task, render_task)
from .world import GridWorld, blank_world

__version__ = "0.1.0"

__all__ = [
    "ActionOutcome", "CartesianActionSpace", "EnvConfig", "Environment",
    "EpisodeFinished", "GoalProgress", "GridWorld", "PlacementExhausted",
    "PrimitiveAction", "ProcGenConfig", "Registry", "Rng", "StepResult",
    "TaskDefinition", "Unsplittable", "all_true_predicates", "apply_cartesian",
    "apply_primitive", "apply_transitions", "blank_world", "build_cartesian_space",
    "check_goal", "compute_reward", "default_validity_table", "encode_observation",
    "eval_absolute", "eval_agent", "eval_relative", "generate_world",
    "instantiate_task", "load_registry", "load_task", "load_task_library",
    "observation_bytes", "parse_task", "reachability_check", "render_task",
    "valid_primitives",
]
