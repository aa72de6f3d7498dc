// Scene-graph tests against a recorded live session: every state marker a
// view claims to show must match the symbolic truth in the snapshot.

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import {
  EDGE_STATE, FURNITURE_STATE_ORDER, OBJECT_STATE_ORDER, Scene,
  renderDefault, renderFurnitureOnly, renderSingleDimension, renderScene,
} from "../src/renderModel.js";
import { Snapshot } from "../src/protocol.js";

const fixture = JSON.parse(readFileSync(
  join(__dirname, "fixtures", "session_printer.json"), "utf-8"));

const snapshots: Snapshot[] = fixture.exchanges
  .map((e: { recv: { type: string } }) => e.recv)
  .filter((m: { type: string }) => m.type === "snapshot");

const first = snapshots[0];
const last = snapshots[snapshots.length - 1];

describe("default view", () => {
  it("draws the agent as an oriented marker at its cell", () => {
    const scene = renderDefault(first, false);
    expect(scene.agent).toEqual({
      x: first.agent.x, y: first.agent.y, heading: first.agent.heading,
    });
  });

  it("fills every wall cell gray and every furniture footprint cell", () => {
    const scene = renderDefault(first, false);
    const wallCells = scene.cells.filter((c) => c.kind === "wall");
    expect(wallCells.length).toBe(first.walls.length);
    const table = first.furniture.find((f) => f.id === "table_0")!;
    const tableCells = scene.cells.filter(
      (c) => c.kind === "furniture" && c.furnitureId === "table_0");
    expect(tableCells.length).toBe(table.size[0] * table.size[1]);
  });

  it("shows object icons offset by level, no object state squares", () => {
    const scene = renderDefault(first, false);
    const printer = scene.icons.find((i) => i.entityId === "printer_0")!;
    expect(printer.full).toBe(false);
    expect(printer.z).toBe(0); // starts on the floor
    expect(scene.stateSquares).toEqual([]);
  });

  it("green edge set equals the snapshot's true furniture states", () => {
    for (const snapshot of snapshots) {
      const scene = renderDefault(snapshot, false);
      for (const f of snapshot.furniture) {
        if (f.category === "floor") continue;
        const sides = new Set(
          scene.edges.filter((e) => e.furnitureId === f.id).map((e) => e.side));
        for (const [side, state] of Object.entries(EDGE_STATE)) {
          expect(sides.has(side as never)).toBe(f.states.includes(state));
        }
      }
    }
  });

  it("renders identically for identical inputs (pure)", () => {
    const a = renderDefault(last, true);
    const b = renderDefault(last, true);
    expect(a).toEqual(b);
  });
});

describe("closeup panel", () => {
  // walk the episode to a snapshot where the agent faces the printer
  const facingPrinter = snapshots.find((s) =>
    s.facing !== null && s.facing.slots.includes("printer_0"))!;

  it("exists in the session fixture", () => {
    expect(facingPrinter).toBeDefined();
  });

  it("shows four squares: three levels plus furniture", () => {
    const scene = renderDefault(facingPrinter, true);
    expect(scene.closeup).not.toBeNull();
    expect(scene.closeup!.map((s) => s.slot)).toEqual(
      ["bottom", "middle", "top", "furniture"]);
  });

  it("object squares carry all eight states, green iff true", () => {
    const scene = renderDefault(facingPrinter, true);
    const z = facingPrinter.facing!.slots.indexOf("printer_0");
    const square = scene.closeup![z];
    expect(square.entityId).toBe("printer_0");
    expect(square.icon).toContain("<svg");
    const printer = facingPrinter.objects.find((o) => o.id === "printer_0")!;
    expect(square.states.map((s) => s.state)).toEqual([...OBJECT_STATE_ORDER]);
    for (const { state, on } of square.states) {
      expect(on).toBe(printer.states.includes(state));
    }
  });

  it("furniture square carries the four furniture states", () => {
    const facingFurniture = snapshots.find((s) => s.facing?.furniture)!;
    const scene = renderDefault(facingFurniture, true);
    const square = scene.closeup![3];
    expect(square.slot).toBe("furniture");
    const furniture = facingFurniture.furniture.find(
      (f) => f.id === facingFurniture.facing!.furniture)!;
    expect(square.states.map((s) => s.state)).toEqual([...FURNITURE_STATE_ORDER]);
    for (const { state, on } of square.states) {
      expect(on).toBe(furniture.states.includes(state));
    }
  });

  it("empty squares when facing a wall", () => {
    const facingWall = snapshots.find((s) => s.facing?.wall);
    if (!facingWall) return; // episode never faced a wall; covered elsewhere
    const scene = renderDefault(facingWall, true);
    for (const square of scene.closeup!.slice(0, 3)) {
      expect(square.entityId).toBeNull();
      expect(square.states).toEqual([]);
    }
  });
});

describe("single-dimension view", () => {
  it("full-cell icons at the chosen level with their state squares", () => {
    const scene = renderSingleDimension(first, 0);
    const printer = scene.icons.find((i) => i.entityId === "printer_0")!;
    expect(printer.full).toBe(true);
    const squares = scene.stateSquares.filter((s) => s.entityId === "printer_0");
    expect(squares.map((s) => s.state)).toEqual([...OBJECT_STATE_ORDER]);
    const truth = first.objects.find((o) => o.id === "printer_0")!.states;
    for (const square of squares) {
      expect(square.on).toBe(truth.includes(square.state));
    }
  });

  it("other levels hide the object", () => {
    const scene = renderSingleDimension(first, 2);
    expect(scene.icons.find((i) => i.entityId === "printer_0")).toBeUndefined();
    // after the episode, the printer sits on the table surface (z=2)
    const sceneEnd = renderSingleDimension(last, 2);
    expect(sceneEnd.icons.find((i) => i.entityId === "printer_0")).toBeDefined();
  });

  it("keeps furniture state edges", () => {
    const scene = renderSingleDimension(last, 0);
    expect(scene.edges.length).toBeGreaterThanOrEqual(0);
    const sceneDefault = renderDefault(last, false);
    expect(scene.edges).toEqual(sceneDefault.edges);
  });
});

describe("furniture-only view", () => {
  it("contains zero object icons and zero object state squares", () => {
    for (const snapshot of [first, last]) {
      const scene = renderFurnitureOnly(snapshot);
      const objectIds = new Set(snapshot.objects.map((o) => o.id));
      expect(scene.icons.some((i) => objectIds.has(i.entityId))).toBe(false);
      expect(scene.stateSquares).toEqual([]);
    }
  });

  it("shows one icon per non-floor furniture", () => {
    const scene = renderFurnitureOnly(first);
    const expected = first.furniture.filter((f) => f.category !== "floor");
    expect(scene.icons.length).toBe(expected.length);
  });
});

describe("episode end banner", () => {
  it("terminal snapshot renders a goal banner with the reward", () => {
    const scene = renderScene(last, { mode: "default", closeup: false });
    expect(last.terminated).toBe(true);
    expect(scene.banner).toContain("reward 1");
    expect(scene.progress.goalMet).toBe(true);
  });

  it("failed actions surface as a toast", () => {
    const failed = snapshots.find(
      (s) => s.last_action_outcome && !s.last_action_outcome.succeeded);
    if (!failed) return; // the scripted episode may be failure-free
    const scene: Scene = renderScene(failed, { mode: "default", closeup: false });
    expect(scene.toast).toBe(failed.last_action_outcome!.reason);
  });
});
