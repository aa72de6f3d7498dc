// Client-side demo recorder producing the exact demo-record text format the
// core CLI replays (line-delimited JSON with sorted keys): one header line,
// one line per step, one footer line.

import { canonicalJson } from "./protocol.js";

export const DEMO_FORMAT = "gridhouse-demo";
export const DEMO_VERSION = 1;

// Python's json module renders float values like 1.0 with the trailing
// decimal; mirror that so byte-for-byte comparisons against server-written
// demos hold.
function pyNumber(n: number): string {
  return Number.isInteger(n) ? n.toFixed(1) : JSON.stringify(n);
}

export interface RecorderConfig {
  task: string;
  seed: number;
  max_steps?: number;
  reward_mode?: string;
}

export class DemoRecorder {
  private actions: number[] = [];
  private rewards: number[] = [];
  private finalHash = "0".repeat(16);
  readonly config: RecorderConfig;
  timestamp: string;

  constructor(config: RecorderConfig, timestamp?: string) {
    this.config = config;
    this.timestamp = timestamp ?? new Date().toISOString();
  }

  get steps(): number {
    return this.actions.length;
  }

  append(action: number, reward: number, stateHash: string): void {
    this.actions.push(action);
    this.rewards.push(reward);
    this.finalHash = stateHash;
  }

  toText(): string {
    const header = {
      format: DEMO_FORMAT,
      version: DEMO_VERSION,
      task: this.config.task,
      config: {
        task: this.config.task,
        action_mode: "primitive",
        observation_mode: "partial",
        reward_mode: this.config.reward_mode ?? "sparse",
        max_steps: this.config.max_steps ?? 1000,
        grid: null,
        rooms: null,
        layout: null,
        seed: this.config.seed,
      },
      controller: "human",
      timestamp: this.timestamp,
    };
    const lines = [canonicalJson(header)];
    for (let i = 0; i < this.actions.length; i++) {
      lines.push(`{"action": ${this.actions[i]}, "reward": ${pyNumber(this.rewards[i])}}`);
    }
    const total = this.rewards.reduce((a, b) => a + b, 0);
    lines.push(`{"final_hash": "${this.finalHash}", "steps": ${this.steps}, ` +
      `"total_reward": ${pyNumber(total)}}`);
    return lines.join("\n") + "\n";
  }

  // browser download; server-side persistence goes through save_demo
  downloadName(): string {
    return `${this.config.task}_seed${this.config.seed}_demo.txt`;
  }
}
