// Wire types for the session protocol (see docs/protocol.md in the
// repository root). Snapshots are self-contained; the client keeps no
// authoritative state beyond the latest one.

export const PROTOCOL_VERSION = 1;

export type Heading = "N" | "E" | "S" | "W";

export interface RoomInfo {
  id: number;
  name: string | null;
  bounds: [number, number, number, number];
}

export interface FurnitureInfo {
  id: string;
  category: string;
  anchor: [number, number];
  size: [number, number];
  height: number;
  room: number;
  states: string[];
  dust_cells: [number, number][];
}

export interface ObjectInfo {
  id: string;
  category: string;
  placement: [number, number, number] | "carried";
  states: string[];
}

export interface FacingInfo {
  x: number;
  y: number;
  wall: boolean;
  door: boolean;
  furniture: string | null;
  slots: (string | null)[];
}

export interface Snapshot {
  type: "snapshot";
  task: string;
  step: number;
  grid: { width: number; height: number; z_levels: number };
  rooms: RoomInfo[];
  walls: [number, number][];
  doors: { id: number; x: number; y: number }[];
  furniture: FurnitureInfo[];
  objects: ObjectInfo[];
  agent: { x: number; y: number; heading: Heading; carrying: string[] };
  facing: FacingInfo | null;
  goal_progress: { satisfied_milestones: number; total_milestones: number; goal_met: boolean };
  last_action_outcome: { succeeded: boolean; reason: string | null } | null;
  reward: number;
  terminated: boolean;
  truncated: boolean;
  view: { mode: string; z: number | null; closeup: boolean };
  saved_to: string | null;
  state_hash: string;
}

export interface Welcome {
  type: "welcome";
  protocol_version: number;
  task_library: string[];
  action_legend: { encoding: number; name: string; keys: string[] }[];
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage = Welcome | Snapshot | ErrorMessage;

export type ClientMessage =
  | { type: "hello"; client_version: string; protocol?: number }
  | { type: "reset"; task: string; seed: number; config?: Record<string, unknown> }
  | { type: "action"; encoding: number }
  | { type: "set_view"; mode: string; z?: number; closeup?: boolean }
  | { type: "save_demo"; path: string };

export function parseServerMessage(text: string): ServerMessage | null {
  try {
    const parsed = JSON.parse(text);
    if (parsed && typeof parsed === "object" && "type" in parsed) {
      return parsed as ServerMessage;
    }
  } catch {
    // fall through
  }
  return null;
}

// JSON with recursively sorted keys: matches the server's canonical form and
// the demo-record writer on the Python side.
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(", ") + "]";
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => JSON.stringify(k) + ": " + canonicalJson(v));
  return "{" + entries.join(", ") + "}";
}
