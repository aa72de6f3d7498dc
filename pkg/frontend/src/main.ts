// Browser bootstrap: wires the socket, keyboard, view-mode buttons, closeup
// panel, and demo download to the session client.

import { SessionClient } from "./client.js";
import { paintScene } from "./canvas.js";
import { Scene, ViewMode, renderScene } from "./renderModel.js";

const TILE = 42;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function closeupHtml(scene: Scene): string {
  if (!scene.closeup) return "";
  return scene.closeup.map((square) => {
    const states = square.states.map((s) =>
      `<span class="state ${s.on ? "on" : "off"}" title="${s.state}"></span>`).join("");
    const icon = square.icon ?? "";
    const label = square.entityId ?? "(empty)";
    return `<div class="closeup-square"><h4>${square.slot}</h4>` +
      `<div class="icon">${icon}</div><div class="label">${label}</div>` +
      `<div class="states">${states}</div></div>`;
  }).join("");
}

function start(): void {
  const canvas = el<HTMLCanvasElement>("grid");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("no 2d context");

  const url = `ws://${location.host}/ws`;
  const socket = new WebSocket(url);
  const client = new SessionClient({ send: (text) => socket.send(text) });

  let view: ViewMode = { mode: "default", closeup: false };

  const repaint = () => {
    if (!client.snapshot) return;
    const scene = renderScene(client.snapshot, view);
    paintScene(ctx, scene, TILE, repaint);
    el("closeup").innerHTML = closeupHtml(scene);
    el("progress").textContent = scene.progress.total
      ? `milestones ${scene.progress.satisfied}/${scene.progress.total}`
      : scene.progress.goalMet ? "goal met" : "";
    el("toast").textContent = scene.toast ? `action failed: ${scene.toast}` : "";
    el("banner").textContent = scene.banner ?? "";
    el("status").textContent =
      `step ${client.snapshot.step} | reward ${client.snapshot.reward} | ` +
      `carrying ${client.snapshot.agent.carrying.join(", ") || "nothing"}` +
      (client.recording ? " | REC" : "");
  };

  client.onUpdate = () => {
    if (client.welcome) {
      const select = el<HTMLSelectElement>("task");
      if (!select.options.length) {
        for (const name of client.welcome.task_library) {
          select.add(new Option(name, name));
        }
        select.value = "installing_a_printer";
        el("legend").textContent = client.welcome.action_legend
          .map((a) => `${a.keys.join("/")}: ${a.name}`).join("   ");
      }
    }
    if (client.lastError) {
      el("toast").textContent = `${client.lastError.code}: ${client.lastError.message}`;
    }
    repaint();
  };

  socket.onopen = () => client.hello();
  socket.onmessage = (event) => client.receive(String(event.data));

  el("reset").onclick = () => {
    const task = el<HTMLSelectElement>("task").value;
    const seed = parseInt(el<HTMLInputElement>("seed").value || "0", 10);
    client.reset(task, seed);
  };
  el("record").onclick = () => {
    client.toggleRecording();
    repaint();
  };
  el("save").onclick = () => {
    if (!client.recorder) return;
    const text = client.demoText();
    if (!text) return;
    const blob = new Blob([text], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = client.recorder.downloadName();
    a.click();
    URL.revokeObjectURL(a.href);
    client.saveDemoOnServer(`demos/${client.recorder.downloadName()}`);
  };

  const viewButtons: [string, () => ViewMode][] = [
    ["view-default", () => ({ mode: "default", closeup: false })],
    ["view-closeup", () => ({ mode: "default", closeup: true })],
    ["view-bottom", () => ({ mode: "single_dim", z: 0 })],
    ["view-middle", () => ({ mode: "single_dim", z: 1 })],
    ["view-top", () => ({ mode: "single_dim", z: 2 })],
    ["view-furniture", () => ({ mode: "furniture_only" })],
  ];
  for (const [id, make] of viewButtons) {
    el(id).onclick = () => {
      view = make();  // pure client-side switch; no server message
      repaint();
    };
  }

  window.addEventListener("keydown", (event) => {
    if ((event.target as HTMLElement)?.tagName === "INPUT") return;
    const sent = client.handleKey(event.key);
    if (!sent && client.snapshot && !client.episodeLive) {
      el("toast").textContent = "episode is over - press Reset to start a new one";
    }
    if (sent) event.preventDefault();
  });
}

window.addEventListener("DOMContentLoaded", start);
