"""Activity definitions: parsing, goal evaluation, and reward computation.

Task files are a small s-expression text format with sections: config, rooms,
objects (entity declarations), init (placement directives and initial
states), goal, and optional milestones (the last milestone is the literal
symbol ``goal``). The twenty shipped activities live in ``data/tasks``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .registry import Registry, data_dir, load_registry
from .states import PREDICATES, eval_atom
from .world import GridWorld

TASK_FORMAT_VERSION = 1

# Directives allowed only in :init (placement, never goals).
INIT_ONLY = ("InRoom",)
PLACEMENT_PREDICATES = ("OnTop", "Inside", "OnFloor", "InRoom")


class TaskError(Exception):
    pass


class TaskSyntaxError(TaskError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownPredicate(TaskError):
    pass


class UnknownCategory(TaskError):
    pass


class ArityMismatch(TaskError):
    pass


class UnknownCapability(TaskError):
    pass


class DenseUnavailable(TaskError):
    pass


# -- condition AST -------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Not:
    body: "Expr"


@dataclass(frozen=True)
class And:
    parts: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Expr", ...]


@dataclass(frozen=True)
class ForAll:
    var: str
    category: str
    body: "Expr"


@dataclass(frozen=True)
class Exists:
    var: str
    category: str
    body: "Expr"


Expr = Atom | Not | And | Or | ForAll | Exists


@dataclass
class GoalProgress:
    satisfied_milestones: set[int] = field(default_factory=set)
    goal_met: bool = False

    def copy(self) -> "GoalProgress":
        return GoalProgress(set(self.satisfied_milestones), self.goal_met)


@dataclass(frozen=True)
class TaskConfig:
    grid: tuple[int, int] = (10, 10)
    rooms: int = 1


@dataclass(frozen=True)
class TaskDefinition:
    name: str
    version: int
    config: TaskConfig
    rooms: tuple[str, ...]
    entities: tuple[tuple[str, str, tuple[int, int] | None], ...]  # id, category, size
    init: tuple[Expr, ...]
    goal: Expr
    milestones: tuple[Expr, ...] | None = None
    header_notes: tuple[str, ...] = ()

    def objects(self, registry: Registry):
        return [(eid, cat) for eid, cat, _ in self.entities if registry.is_object(cat)]

    def furniture(self, registry: Registry):
        return [(eid, cat, size) for eid, cat, size in self.entities
                if registry.is_furniture(cat)]


# -- s-expression reader --------------------------------------------------------


def _tokenize(text: str):
    line = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch in " \t\r":
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield (ch, line)
            i += 1
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();":
                j += 1
            yield (text[i:j], line)
            i = j


def _read_sexprs(text: str):
    stack = [[]]
    last_line = 1
    for tok, line in _tokenize(text):
        last_line = line
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise TaskSyntaxError("unbalanced ')'", line)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise TaskSyntaxError("unbalanced '('", last_line)
    return stack[0]


def _parse_expr(sx, registry: Registry, scope: dict[str, str],
                entity_categories: dict[str, str], allow_placement: bool) -> Expr:
    if not isinstance(sx, list) or not sx:
        raise TaskError(f"expected expression, got {sx!r}")
    head = sx[0]
    if head == "and":
        return And(tuple(_parse_expr(p, registry, scope, entity_categories,
                                     allow_placement) for p in sx[1:]))
    if head == "or":
        return Or(tuple(_parse_expr(p, registry, scope, entity_categories,
                                    allow_placement) for p in sx[1:]))
    if head == "not":
        if len(sx) != 2:
            raise TaskError("not takes one argument")
        return Not(_parse_expr(sx[1], registry, scope, entity_categories,
                               allow_placement))
    if head in ("forall", "exists"):
        if len(sx) != 3 or not isinstance(sx[1], list) or len(sx[1]) != 2:
            raise TaskError(f"{head} needs (?var category) and a body")
        var, category = sx[1]
        if not var.startswith("?"):
            raise TaskError(f"quantified variable must start with '?': {var}")
        if not (registry.is_object(category) or registry.is_furniture(category)):
            raise UnknownCategory(category)
        inner = dict(scope)
        inner[var] = category
        body = _parse_expr(sx[2], registry, inner, entity_categories, allow_placement)
        cls = ForAll if head == "forall" else Exists
        return cls(var, category, body)
    # atom
    pred = head
    args = sx[1:]
    if pred not in PREDICATES and pred not in INIT_ONLY:
        raise UnknownPredicate(pred)
    if pred in INIT_ONLY and not allow_placement:
        raise UnknownPredicate(f"{pred} is an init-only directive")
    arity = 2 if pred in ("InRoom",) else PREDICATES[pred].arity
    if len(args) != arity:
        raise ArityMismatch(f"{pred} takes {arity} argument(s), got {len(args)}")
    for i, a in enumerate(args):
        if not isinstance(a, str):
            raise TaskError(f"atom argument must be a name: {a!r}")
        if a.startswith("?"):
            if a not in scope:
                raise TaskError(f"unbound variable {a}")
            continue
        if pred == "InRoom" and i == 1:
            continue  # room name
        if pred == "OnTop" and i == 1 and a == "floor" and allow_placement:
            continue  # floor keyword, init only
        if a not in entity_categories:
            raise TaskError(f"unknown entity {a!r} in {pred}")
    # capability validation for absolute state atoms
    if pred in PREDICATES and PREDICATES[pred].kind == "absolute" and pred != "OnFloor":
        a = args[0]
        category = scope.get(a) or entity_categories.get(a)
        if category is not None:
            spec = registry.spec(category)
            if not spec.can_hold(pred):
                raise UnknownCapability(f"{pred} invalid for category {category!r}")
    return Atom(pred, tuple(args))


def parse_task(text: str, registry: Registry | None = None) -> TaskDefinition:
    registry = registry or load_registry()
    header_notes = tuple(
        line.strip().lstrip(";").strip()
        for line in text.splitlines()
        if line.strip().startswith(";") and line.strip().lstrip(";").strip())
    forms = _read_sexprs(text)
    if len(forms) != 1 or not isinstance(forms[0], list) or forms[0][:1] != ["task"]:
        raise TaskSyntaxError("expected a single (task ...) form", 1)
    form = forms[0]
    if len(form) < 2 or not isinstance(form[1], str):
        raise TaskSyntaxError("task needs a name", 1)
    name = form[1]
    sections = {}
    for part in form[2:]:
        if not isinstance(part, list) or not part or not isinstance(part[0], str):
            raise TaskError(f"bad section: {part!r}")
        sections[part[0]] = part[1:]

    version = int(sections.get("version", ["1"])[0])
    if version != TASK_FORMAT_VERSION:
        raise TaskError(f"unsupported task format version {version}")

    grid = (10, 10)
    nrooms = None
    for item in sections.get("config", []):
        if item[0] == "grid":
            grid = (int(item[1]), int(item[2]))
        elif item[0] == "rooms":
            nrooms = int(item[1])

    rooms = tuple(sections.get("rooms", []))
    if nrooms is None:
        nrooms = max(1, len(rooms))

    entities = []
    entity_categories: dict[str, str] = {}
    for decl in sections.get("objects", []):
        if not isinstance(decl, list) or len(decl) < 2:
            raise TaskError(f"bad entity declaration: {decl!r}")
        eid, category = decl[0], decl[1]
        if not (registry.is_object(category) or registry.is_furniture(category)):
            raise UnknownCategory(category)
        size = None
        for extra in decl[2:]:
            if isinstance(extra, list) and extra[0] == "size":
                size = (int(extra[1]), int(extra[2]))
        entities.append((eid, category, size))
        entity_categories[eid] = category
    # implicit per-room floor entities are referencable
    for label in rooms:
        entity_categories[f"floor_{label}"] = "floor"

    init = tuple(
        _parse_expr(sx, registry, {}, entity_categories, allow_placement=True)
        for sx in sections.get("init", []))
    if "goal" not in sections or len(sections["goal"]) != 1:
        raise TaskError("task needs exactly one goal expression")
    goal = _parse_expr(sections["goal"][0], registry, {}, entity_categories,
                       allow_placement=False)

    milestones = None
    if "milestones" in sections:
        raw = sections["milestones"]
        if not raw or raw[-1] != "goal":
            raise TaskError("milestone list must end with the goal (symbol 'goal')")
        milestones = tuple(
            _parse_expr(sx, registry, {}, entity_categories, allow_placement=False)
            for sx in raw[:-1]) + (goal,)

    return TaskDefinition(
        name=name, version=version, config=TaskConfig(grid, nrooms),
        rooms=rooms, entities=tuple(entities), init=init, goal=goal,
        milestones=milestones, header_notes=header_notes)


# -- rendering (canonical round-trip form) ---------------------------------------


def _render_expr(e: Expr) -> str:
    if isinstance(e, Atom):
        return f"({e.pred} {' '.join(e.args)})"
    if isinstance(e, Not):
        return f"(not {_render_expr(e.body)})"
    if isinstance(e, And):
        return f"(and {' '.join(_render_expr(p) for p in e.parts)})"
    if isinstance(e, Or):
        return f"(or {' '.join(_render_expr(p) for p in e.parts)})"
    if isinstance(e, ForAll):
        return f"(forall ({e.var} {e.category}) {_render_expr(e.body)})"
    if isinstance(e, Exists):
        return f"(exists ({e.var} {e.category}) {_render_expr(e.body)})"
    raise TypeError(e)


def render_task(task: TaskDefinition) -> str:
    lines = [f"; {note}" for note in task.header_notes]
    lines.append(f"(task {task.name}")
    lines.append(f"  (version {task.version})")
    lines.append(f"  (config (grid {task.config.grid[0]} {task.config.grid[1]})"
                 f" (rooms {task.config.rooms}))")
    if task.rooms:
        lines.append(f"  (rooms {' '.join(task.rooms)})")
    decls = []
    for eid, category, size in task.entities:
        if size is None:
            decls.append(f"    ({eid} {category})")
        else:
            decls.append(f"    ({eid} {category} (size {size[0]} {size[1]}))")
    lines.append("  (objects\n" + "\n".join(decls) + ")")
    lines.append("  (init\n" + "\n".join(f"    {_render_expr(e)}" for e in task.init) + ")")
    lines.append(f"  (goal {_render_expr(task.goal)})")
    if task.milestones is not None:
        body = "\n".join(f"    {_render_expr(e)}" for e in task.milestones[:-1])
        lines.append("  (milestones\n" + body + "\n    goal)")
    lines.append(")")
    return "\n".join(lines) + "\n"


# -- goal evaluation -------------------------------------------------------------


def _entities_of_category(world: GridWorld, category: str) -> list[str]:
    ids = [o.id for o in world.objects.values() if o.category == category]
    ids += [f.id for f in world.furniture.values() if f.category == category]
    return sorted(ids)


def check_goal(world: GridWorld, expr: Expr, bindings: dict[str, str] | None = None) -> bool:
    """First-order evaluation; quantifiers range over live entities of the
    category. ForAll over an empty category is vacuously true."""
    b = bindings or {}
    if isinstance(expr, Atom):
        args = tuple(b.get(a, a) for a in expr.args)
        if expr.pred == "InRoom":
            target = world.entity(args[0])
            room_id = world.room_of_entity(target)
            room = next((r for r in world.rooms if r.id == room_id), None)
            return room is not None and room.name == args[1]
        if expr.pred == "OnTop" and args[1] == "floor":
            return eval_atom(world, "OnFloor", (args[0],))
        return eval_atom(world, expr.pred, args)
    if isinstance(expr, Not):
        return not check_goal(world, expr.body, b)
    if isinstance(expr, And):
        return all(check_goal(world, p, b) for p in expr.parts)
    if isinstance(expr, Or):
        return any(check_goal(world, p, b) for p in expr.parts)
    if isinstance(expr, ForAll):
        return all(check_goal(world, expr.body, {**b, expr.var: eid})
                   for eid in _entities_of_category(world, expr.category))
    if isinstance(expr, Exists):
        return any(check_goal(world, expr.body, {**b, expr.var: eid})
                   for eid in _entities_of_category(world, expr.category))
    raise TypeError(expr)


def compute_reward(world: GridWorld, task: TaskDefinition, progress: GoalProgress,
                   mode: str) -> tuple[float, GoalProgress]:
    """Sparse: 1.0 once, at the step the goal first holds. Dense: newly
    satisfied milestones / total, latched, so a completed episode sums to 1.0."""
    if mode not in ("sparse", "dense"):
        raise ValueError(f"unknown reward mode {mode!r}")
    new = progress.copy()
    goal_now = check_goal(world, task.goal)
    if mode == "sparse":
        reward = 1.0 if (goal_now and not progress.goal_met) else 0.0
        new.goal_met = new.goal_met or goal_now
        return reward, new
    if task.milestones is None:
        raise DenseUnavailable(task.name)
    total = len(task.milestones)
    newly = 0
    for i, m in enumerate(task.milestones):
        if i in new.satisfied_milestones:
            continue
        met = goal_now if m == task.goal else check_goal(world, m)
        if met:
            new.satisfied_milestones.add(i)
            newly += 1
    new.goal_met = new.goal_met or goal_now
    return newly / total, new


# -- library --------------------------------------------------------------------


def task_dir() -> Path:
    return data_dir() / "tasks"


def load_task(name_or_path: str, registry: Registry | None = None) -> TaskDefinition:
    path = Path(name_or_path)
    if not path.exists():
        path = task_dir() / f"{name_or_path}.task"
    if not path.exists():
        raise TaskError(f"unknown task {name_or_path!r}")
    try:
        return parse_task(path.read_text(), registry=registry)
    except TaskError as e:
        raise TaskError(f"{path.name}: {e}") from e


def load_task_library(registry: Registry | None = None) -> dict[str, TaskDefinition]:
    tasks = {}
    for path in sorted(task_dir().glob("*.task")):
        t = load_task(str(path), registry=registry)
        tasks[t.name] = t
    return tasks
