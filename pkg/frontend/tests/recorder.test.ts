import { describe, expect, it } from "vitest";

import { DemoRecorder } from "../src/recorder.js";

describe("demo recorder format", () => {
  it("renders integral floats with a trailing decimal like the server", () => {
    const rec = new DemoRecorder({ task: "t", seed: 1 }, "2024-01-01T00:00:00+00:00");
    rec.append(0, 0, "a".repeat(16));
    rec.append(14, 1, "b".repeat(16));
    const lines = rec.toText().trim().split("\n");
    expect(lines[1]).toBe('{"action": 0, "reward": 0.0}');
    expect(lines[2]).toBe('{"action": 14, "reward": 1.0}');
    expect(lines[3]).toContain('"total_reward": 1.0');
  });

  it("keeps fractional dense rewards in shortest round-trip form", () => {
    const rec = new DemoRecorder({ task: "t", seed: 1, reward_mode: "dense" });
    rec.append(0, 0.125, "c".repeat(16));
    rec.append(0, 0.2, "c".repeat(16));
    const lines = rec.toText().trim().split("\n");
    expect(lines[1]).toBe('{"action": 0, "reward": 0.125}');
    expect(lines[2]).toBe('{"action": 0, "reward": 0.2}');
  });

  it("header carries the effective config with sorted keys", () => {
    const rec = new DemoRecorder({ task: "making_tea", seed: 9 },
      "2024-01-01T00:00:00+00:00");
    const header = rec.toText().split("\n")[0];
    const parsed = JSON.parse(header);
    expect(parsed.format).toBe("gridhouse-demo");
    expect(parsed.config.task).toBe("making_tea");
    expect(parsed.config.seed).toBe(9);
    // canonical ordering at both nesting levels
    expect(header.startsWith('{"config": {"action_mode"')).toBe(true);
    expect(header.indexOf('"controller"')).toBeGreaterThan(header.indexOf('"config"'));
    expect(header.indexOf('"version"')).toBeGreaterThan(header.indexOf('"timestamp"'));
  });
});
