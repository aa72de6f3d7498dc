// Canvas painter: walks a scene graph and draws it. No game state here; the
// scene is recomputed from the latest snapshot on every update.

import { Scene, Side } from "./renderModel.js";

const Z_OFFSETS: Record<number, [number, number]> = {
  0: [0.06, 0.52],  // bottom level: lower-left corner
  1: [0.30, 0.28],  // middle: center
  2: [0.54, 0.06],  // top: upper-right corner
};

const HEADING_ANGLE: Record<string, number> = { N: 0, E: 90, S: 180, W: 270 };

const iconCache = new Map<string, HTMLImageElement>();

function iconImage(svg: string, onReady: () => void): HTMLImageElement {
  let img = iconCache.get(svg);
  if (!img) {
    img = new Image();
    img.onload = onReady;
    img.src = "data:image/svg+xml;utf8," + encodeURIComponent(svg);
    iconCache.set(svg, img);
  }
  return img;
}

export function paintScene(ctx: CanvasRenderingContext2D, scene: Scene,
                           tile: number, repaint: () => void): void {
  ctx.canvas.width = scene.width * tile;
  ctx.canvas.height = scene.height * tile;
  ctx.fillStyle = "#f4f1ea";
  ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);

  for (const cell of scene.cells) {
    ctx.fillStyle = cell.color;
    ctx.fillRect(cell.x * tile, cell.y * tile, tile, tile);
  }
  ctx.strokeStyle = "rgba(0,0,0,0.08)";
  for (let x = 0; x <= scene.width; x++) {
    ctx.beginPath();
    ctx.moveTo(x * tile, 0);
    ctx.lineTo(x * tile, scene.height * tile);
    ctx.stroke();
  }
  for (let y = 0; y <= scene.height; y++) {
    ctx.beginPath();
    ctx.moveTo(0, y * tile);
    ctx.lineTo(scene.width * tile, y * tile);
    ctx.stroke();
  }

  for (const mark of scene.dust) {
    ctx.fillStyle = "#b5a684";
    for (const [fx, fy] of [[0.25, 0.3], [0.6, 0.55], [0.4, 0.75]] as const) {
      ctx.beginPath();
      ctx.arc((mark.x + fx) * tile, (mark.y + fy) * tile, tile * 0.05, 0, Math.PI * 2);
      ctx.fill();
    }
  }

  ctx.lineWidth = Math.max(2, tile * 0.12);
  ctx.strokeStyle = "#19b219";
  for (const edge of scene.edges) {
    const x = edge.x * tile;
    const y = edge.y * tile;
    const lines: Record<Side, [number, number, number, number]> = {
      left: [x, y, x, y + tile],
      right: [x + tile, y, x + tile, y + tile],
      top: [x, y, x + tile, y],
      bottom: [x, y + tile, x + tile, y + tile],
    };
    const [x1, y1, x2, y2] = lines[edge.side];
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
  }
  ctx.lineWidth = 1;

  for (const icon of scene.icons) {
    const img = iconImage(icon.icon, repaint);
    if (!img.complete) continue;
    if (icon.full) {
      ctx.drawImage(img, icon.x * tile + tile * 0.08, icon.y * tile + tile * 0.08,
        tile * 0.84, tile * 0.84);
    } else {
      const [ox, oy] = Z_OFFSETS[icon.z] ?? [0.3, 0.3];
      ctx.drawImage(img, (icon.x + ox) * tile, (icon.y + oy) * tile,
        tile * 0.4, tile * 0.4);
    }
  }

  const square = Math.max(3, tile * 0.11);
  for (const mark of scene.stateSquares) {
    const idx = ["Cooked", "Dusty", "Frozen", "Opened", "Sliced", "Soaked",
      "Stained", "ToggledOn"].indexOf(mark.state);
    ctx.fillStyle = mark.on ? "#19b219" : "#cc3333";
    ctx.fillRect((mark.x + 1) * tile - square - 1,
      mark.y * tile + 1 + idx * (square + 1), square, square);
  }

  if (scene.agent) {
    const cx = (scene.agent.x + 0.5) * tile;
    const cy = (scene.agent.y + 0.5) * tile;
    ctx.save();
    ctx.translate(cx, cy);
    ctx.rotate((HEADING_ANGLE[scene.agent.heading] * Math.PI) / 180);
    ctx.fillStyle = "#d11a1a";
    ctx.beginPath();
    ctx.moveTo(0, -tile * 0.34);
    ctx.lineTo(tile * 0.26, tile * 0.3);
    ctx.lineTo(-tile * 0.26, tile * 0.3);
    ctx.closePath();
    ctx.fill();
    ctx.restore();
  }
}
