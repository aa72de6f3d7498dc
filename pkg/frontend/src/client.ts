// Session state machine: speaks the protocol over any socket-like object,
// holds only the latest snapshot, and feeds the demo recorder. All state is
// re-derivable from the last snapshot (reload-safe by design).

import {
  ClientMessage, ErrorMessage, PROTOCOL_VERSION, ServerMessage, Snapshot,
  Welcome, parseServerMessage,
} from "./protocol.js";
import { actionForKey } from "./keyboard.js";
import { DemoRecorder } from "./recorder.js";

export interface SocketLike {
  send(text: string): void;
}

export const CLIENT_VERSION = "gridhouse-web/0.1.0";

export class SessionClient {
  welcome: Welcome | null = null;
  snapshot: Snapshot | null = null;
  lastError: ErrorMessage | null = null;
  recorder: DemoRecorder | null = null;
  recording = false;
  onUpdate: (() => void) | null = null;

  private socket: SocketLike;
  private pendingAction: number | null = null;

  constructor(socket: SocketLike) {
    this.socket = socket;
  }

  private sendMessage(message: ClientMessage): void {
    this.socket.send(JSON.stringify(message));
  }

  hello(): void {
    this.sendMessage({
      type: "hello", client_version: CLIENT_VERSION, protocol: PROTOCOL_VERSION,
    });
  }

  reset(task: string, seed: number): void {
    this.recorder = new DemoRecorder({ task, seed });
    this.sendMessage({ type: "reset", task, seed });
  }

  get episodeLive(): boolean {
    return this.snapshot !== null
      && !this.snapshot.terminated && !this.snapshot.truncated;
  }

  sendAction(encoding: number): boolean {
    if (!this.episodeLive) {
      return false; // finished or no episode: UI hint only, never a message
    }
    this.pendingAction = encoding;
    this.sendMessage({ type: "action", encoding });
    return true;
  }

  // Returns true when the key mapped to an action that was actually sent.
  handleKey(domKey: string): boolean {
    const action = actionForKey(domKey);
    if (action === null) {
      return false;
    }
    return this.sendAction(action);
  }

  toggleRecording(): void {
    this.recording = !this.recording;
  }

  saveDemoOnServer(path: string): void {
    this.sendMessage({ type: "save_demo", path });
  }

  demoText(): string | null {
    return this.recorder ? this.recorder.toText() : null;
  }

  receive(text: string): ServerMessage | null {
    const message = parseServerMessage(text);
    if (message === null) {
      return null;
    }
    if (message.type === "welcome") {
      this.welcome = message;
      this.lastError = null;
    } else if (message.type === "snapshot") {
      if (this.pendingAction !== null) {
        this.recorder?.append(this.pendingAction, message.reward, message.state_hash);
        this.pendingAction = null;
      }
      this.snapshot = message;
      this.lastError = null;
    } else {
      this.lastError = message;
      this.pendingAction = null;
    }
    this.onUpdate?.();
    return message;
  }
}
