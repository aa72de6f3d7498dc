// Pure snapshot -> scene-graph projection for every view mode. The painter
// (canvas.ts) only walks the scene; all layout and state-marker decisions
// happen here so tests can assert on plain data.

import { FurnitureInfo, ObjectInfo, Snapshot } from "./protocol.js";
import { furnitureColor, iconFor } from "./icons.js";

export type ViewMode =
  | { mode: "default"; closeup: boolean }
  | { mode: "single_dim"; z: 0 | 1 | 2 }
  | { mode: "furniture_only" };

export const OBJECT_STATE_ORDER = [
  "Cooked", "Dusty", "Frozen", "Opened", "Sliced", "Soaked", "Stained", "ToggledOn",
] as const;

export const FURNITURE_STATE_ORDER = ["Dusty", "Opened", "Stained", "ToggledOn"] as const;

// Rectangular furniture state edges: one state per side, green when true.
export const EDGE_STATE: Record<Side, string> = {
  left: "Dusty",
  top: "Opened",
  right: "Stained",
  bottom: "ToggledOn",
};

export type Side = "left" | "top" | "right" | "bottom";

export interface CellFill {
  x: number;
  y: number;
  kind: "wall" | "door" | "furniture";
  color: string;
  furnitureId?: string;
}

export interface EdgeMark {
  furnitureId: string;
  x: number;
  y: number;
  side: Side;
  state: string; // always a true state (edges render green only)
}

export interface IconMark {
  entityId: string;
  category: string;
  icon: string;
  x: number;
  y: number;
  z: number;        // 0..2 for objects, -1 for furniture glyphs
  full: boolean;    // full-cell icon (single-dim view) vs z-offset corner
}

export interface StateSquare {
  entityId: string;
  x: number;
  y: number;
  state: string;
  on: boolean; // green when true, red otherwise
}

export interface DustMark {
  x: number;
  y: number;
}

export interface CloseupSquare {
  slot: "bottom" | "middle" | "top" | "furniture";
  entityId: string | null;
  icon: string | null;
  states: { state: string; on: boolean }[];
}

export interface Scene {
  width: number;
  height: number;
  cells: CellFill[];
  edges: EdgeMark[];
  icons: IconMark[];
  stateSquares: StateSquare[];
  dust: DustMark[];
  agent: { x: number; y: number; heading: string } | null;
  closeup: CloseupSquare[] | null;
  progress: { satisfied: number; total: number; goalMet: boolean };
  toast: string | null;
  banner: string | null;
}

function furnitureCells(f: FurnitureInfo): [number, number][] {
  const cells: [number, number][] = [];
  for (let dy = 0; dy < f.size[1]; dy++) {
    for (let dx = 0; dx < f.size[0]; dx++) {
      cells.push([f.anchor[0] + dx, f.anchor[1] + dy]);
    }
  }
  return cells;
}

function isFloor(f: FurnitureInfo): boolean {
  return f.category === "floor";
}

function placedObjects(snapshot: Snapshot): (ObjectInfo & { x: number; y: number; z: number })[] {
  const out = [];
  for (const o of snapshot.objects) {
    if (o.placement === "carried") continue;
    const [x, y, z] = o.placement;
    out.push({ ...o, x, y, z });
  }
  return out;
}

function baseScene(snapshot: Snapshot): Scene {
  const cells: CellFill[] = [];
  for (const [x, y] of snapshot.walls) {
    cells.push({ x, y, kind: "wall", color: "#9a9a9a" });
  }
  for (const door of snapshot.doors) {
    cells.push({ x: door.x, y: door.y, kind: "door", color: "#d8c38a" });
  }
  const outcome = snapshot.last_action_outcome;
  return {
    width: snapshot.grid.width,
    height: snapshot.grid.height,
    cells,
    edges: [],
    icons: [],
    stateSquares: [],
    dust: [],
    agent: { x: snapshot.agent.x, y: snapshot.agent.y, heading: snapshot.agent.heading },
    closeup: null,
    progress: {
      satisfied: snapshot.goal_progress.satisfied_milestones,
      total: snapshot.goal_progress.total_milestones,
      goalMet: snapshot.goal_progress.goal_met,
    },
    toast: outcome && !outcome.succeeded ? outcome.reason : null,
    banner: snapshot.terminated ? `goal reached! reward ${snapshot.reward}` :
      snapshot.truncated ? "time limit reached" : null,
  };
}

function addFurnitureFills(scene: Scene, snapshot: Snapshot): void {
  for (const f of snapshot.furniture) {
    if (isFloor(f)) {
      for (const [x, y] of f.dust_cells) {
        scene.dust.push({ x, y });
      }
      continue;
    }
    const color = furnitureColor(f.category);
    for (const [x, y] of furnitureCells(f)) {
      scene.cells.push({ x, y, kind: "furniture", color, furnitureId: f.id });
    }
  }
}

// Green edges on the furniture's outer rectangle, one side per true state.
function addFurnitureEdges(scene: Scene, snapshot: Snapshot): void {
  for (const f of snapshot.furniture) {
    if (isFloor(f)) continue;
    const [ax, ay] = f.anchor;
    const [w, d] = f.size;
    for (const side of ["left", "top", "right", "bottom"] as Side[]) {
      const state = EDGE_STATE[side];
      if (!f.states.includes(state)) continue;
      const cells = furnitureCells(f).filter(([x, y]) =>
        side === "left" ? x === ax :
        side === "right" ? x === ax + w - 1 :
        side === "top" ? y === ay : y === ay + d - 1);
      for (const [x, y] of cells) {
        scene.edges.push({ furnitureId: f.id, x, y, side, state });
      }
    }
  }
}

function objectStateSquares(scene: Scene, o: ObjectInfo & { x: number; y: number }): void {
  for (const state of OBJECT_STATE_ORDER) {
    scene.stateSquares.push({
      entityId: o.id, x: o.x, y: o.y, state, on: o.states.includes(state),
    });
  }
}

function buildCloseup(snapshot: Snapshot): CloseupSquare[] {
  const squares: CloseupSquare[] = [];
  const facing = snapshot.facing;
  const byId = new Map(snapshot.objects.map((o) => [o.id, o]));
  const slotNames = ["bottom", "middle", "top"] as const;
  for (let z = 0; z < 3; z++) {
    const oid = facing && !facing.wall ? facing.slots[z] : null;
    const obj = oid ? byId.get(oid) ?? null : null;
    squares.push({
      slot: slotNames[z],
      entityId: obj?.id ?? null,
      icon: obj ? iconFor(obj.category) : null,
      states: obj
        ? OBJECT_STATE_ORDER.map((state) => ({ state, on: obj.states.includes(state) }))
        : [],
    });
  }
  const furniture = facing?.furniture
    ? snapshot.furniture.find((f) => f.id === facing.furniture) ?? null
    : null;
  squares.push({
    slot: "furniture",
    entityId: furniture?.id ?? null,
    icon: furniture ? iconFor(furniture.category) : null,
    states: furniture
      ? FURNITURE_STATE_ORDER.map((state) => ({ state, on: furniture.states.includes(state) }))
      : [],
  });
  return squares;
}

// Bird's-eye view of all levels: furniture as colored background with state
// edges; objects as icons offset inside the cell by z-level; object unary
// states visible only through the closeup panel.
export function renderDefault(snapshot: Snapshot, closeup: boolean): Scene {
  const scene = baseScene(snapshot);
  addFurnitureFills(scene, snapshot);
  addFurnitureEdges(scene, snapshot);
  for (const o of placedObjects(snapshot)) {
    scene.icons.push({
      entityId: o.id, category: o.category, icon: iconFor(o.category),
      x: o.x, y: o.y, z: o.z, full: false,
    });
  }
  if (closeup) {
    scene.closeup = buildCloseup(snapshot);
  }
  return scene;
}

// One vertical level: full-cell object icons with their eight state squares,
// plus furniture backgrounds and furniture state edges.
export function renderSingleDimension(snapshot: Snapshot, z: 0 | 1 | 2): Scene {
  const scene = baseScene(snapshot);
  addFurnitureFills(scene, snapshot);
  addFurnitureEdges(scene, snapshot);
  for (const o of placedObjects(snapshot)) {
    if (o.z !== z) continue;
    scene.icons.push({
      entityId: o.id, category: o.category, icon: iconFor(o.category),
      x: o.x, y: o.y, z: o.z, full: true,
    });
    objectStateSquares(scene, o);
  }
  return scene;
}

// Furniture icons and furniture states only; no objects, no object states.
export function renderFurnitureOnly(snapshot: Snapshot): Scene {
  const scene = baseScene(snapshot);
  addFurnitureFills(scene, snapshot);
  addFurnitureEdges(scene, snapshot);
  for (const f of snapshot.furniture) {
    if (isFloor(f)) continue;
    scene.icons.push({
      entityId: f.id, category: f.category, icon: iconFor(f.category),
      x: f.anchor[0], y: f.anchor[1], z: -1, full: true,
    });
  }
  return scene;
}

export function renderScene(snapshot: Snapshot, view: ViewMode): Scene {
  switch (view.mode) {
    case "default":
      return renderDefault(snapshot, view.closeup);
    case "single_dim":
      return renderSingleDimension(snapshot, view.z);
    case "furniture_only":
      return renderFurnitureOnly(snapshot);
  }
}
