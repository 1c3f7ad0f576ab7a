/**
 * Canvas renderer: rooms and objects with labels, aim rays with cone-range
 * halos, live tier highlights. Degrades to a no-op when no 2d context is
 * available (e.g. under jsdom), so the view model stays fully testable.
 */

import { haloRadiusPx, project, vec3 } from "./geometry.js";
import { FINGER_KINDS, PlaygroundViewModel } from "./viewmodel.js";

const TIER_COLORS = { high: "#ff9f1c", low: "#5bc0eb" } as const;
const FINGER_COLORS: Record<string, string> = {
  thumb_left: "#9b5de5",
  thumb_right: "#f15bb5",
  index_left: "#00bbf9",
  index_right: "#00f5d4",
};

export function renderScene(canvas: HTMLCanvasElement, vm: PlaygroundViewModel): void {
  let ctx: CanvasRenderingContext2D | null = null;
  try {
    ctx = canvas.getContext("2d");
  } catch {
    return; // jsdom and friends: view model still works, nothing to draw
  }
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, width, height);
  if (!vm.scene) {
    ctx.fillStyle = "#aab";
    ctx.font = "14px sans-serif";
    ctx.fillText("no scene loaded", 16, 24);
    return;
  }

  const camera = vm.camera;
  ctx.font = "11px sans-serif";

  for (const room of vm.scene.rooms) {
    const p = project(camera, vec3(...room.centroid), width, height);
    if (!p) continue;
    ctx.strokeStyle = "#2e3a48";
    ctx.strokeRect(p.x - 30, p.y - 18, 60, 36);
    ctx.fillStyle = "#8899aa";
    ctx.fillText(room.label, p.x - 28, p.y - 22);
  }

  const sorted = [...vm.scene.objects]
    .map((o) => ({ o, p: project(camera, vec3(...o.position), width, height) }))
    .filter((e) => e.p !== null)
    .sort((a, b) => b.p!.depth - a.p!.depth);

  for (const { o, p } of sorted) {
    const tier = vm.highlightFor(vec3(...o.position));
    const radius = Math.max(3, (o.bounding_radius * camera.focalPx) / p!.depth);
    ctx.beginPath();
    ctx.arc(p!.x, p!.y, radius, 0, Math.PI * 2);
    ctx.fillStyle = tier ? TIER_COLORS[tier] : "#4a5a6a";
    ctx.fill();
    ctx.fillStyle = "#cfd8e3";
    ctx.fillText(o.label, p!.x + radius + 2, p!.y + 3);
  }

  // Gaze reticle and cone halos sized by the current angle config.
  const cx = width / 2;
  const cy = height / 2;
  ctx.strokeStyle = "#eeeeee";
  ctx.beginPath();
  ctx.moveTo(cx - 8, cy);
  ctx.lineTo(cx + 8, cy);
  ctx.moveTo(cx, cy - 8);
  ctx.lineTo(cx, cy + 8);
  ctx.stroke();

  if (!vm.studyMode) {
    for (const [range, dash] of [
      [vm.ranges.gazeRange, [6, 4]],
      [vm.ranges.gazeHigh, [2, 3]],
    ] as const) {
      ctx.beginPath();
      ctx.setLineDash([...dash]);
      ctx.strokeStyle = "#e0e0e0";
      ctx.arc(cx, cy, haloRadiusPx(range, camera.focalPx), 0, Math.PI * 2);
      ctx.stroke();
      ctx.setLineDash([]);
    }

    for (const kind of FINGER_KINDS) {
      if (!vm.fingers[kind].enabled) continue;
      const ray = vm.fingerRay(kind);
      const tip = project(
        camera,
        vec3(
          ray.origin.x + ray.direction.x * 6,
          ray.origin.y + ray.direction.y * 6,
          ray.origin.z + ray.direction.z * 6,
        ),
        width,
        height,
      );
      const base = project(camera, ray.origin, width, height);
      if (!tip) continue;
      ctx.strokeStyle = FINGER_COLORS[kind];
      ctx.beginPath();
      ctx.moveTo(base ? base.x : cx, base ? base.y : height - 10);
      ctx.lineTo(tip.x, tip.y);
      ctx.stroke();
      ctx.beginPath();
      ctx.setLineDash([4, 3]);
      ctx.arc(tip.x, tip.y, haloRadiusPx(vm.ranges.pointRange, camera.focalPx), 0, Math.PI * 2);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = FINGER_COLORS[kind];
      ctx.fillText(kind, tip.x + 4, tip.y - 4);
    }
  }
}
