/** Minimal 3-D math for aiming rays and sizing cone halos client-side. */

export interface Vec3 {
  x: number;
  y: number;
  z: number;
}

export const vec3 = (x: number, y: number, z: number): Vec3 => ({ x, y, z });

export function add(a: Vec3, b: Vec3): Vec3 {
  return vec3(a.x + b.x, a.y + b.y, a.z + b.z);
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return vec3(a.x - b.x, a.y - b.y, a.z - b.z);
}

export function scale(a: Vec3, k: number): Vec3 {
  return vec3(a.x * k, a.y * k, a.z * k);
}

export function dot(a: Vec3, b: Vec3): number {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

export function norm(a: Vec3): number {
  return Math.sqrt(dot(a, a));
}

export function normalize(a: Vec3): Vec3 {
  const n = norm(a);
  if (n < 1e-9) throw new Error("cannot normalize a near-zero vector");
  return scale(a, 1 / n);
}

/** Unit direction for a yaw (around +z, 0 = +x) and pitch (up positive). */
export function dirFromYawPitch(yawDeg: number, pitchDeg: number): Vec3 {
  const yaw = (yawDeg * Math.PI) / 180;
  const pitch = (pitchDeg * Math.PI) / 180;
  const c = Math.cos(pitch);
  return vec3(Math.cos(yaw) * c, Math.sin(yaw) * c, Math.sin(pitch));
}

/** Degrees between a ray and the direction from its origin to a point. */
export function angularOffsetDeg(origin: Vec3, direction: Vec3, point: Vec3): number {
  const delta = sub(point, origin);
  const n = norm(delta);
  if (n < 1e-9) return 0;
  const cos = Math.max(-1, Math.min(1, dot(direction, delta) / n));
  return (Math.acos(cos) * 180) / Math.PI;
}

export interface Camera {
  position: Vec3;
  yawDeg: number;
  pitchDeg: number;
  focalPx: number;
}

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

/** Perspective projection into canvas pixels; null when behind the camera. */
export function project(camera: Camera, point: Vec3, width: number, height: number): Projected | null {
  const forward = dirFromYawPitch(camera.yawDeg, camera.pitchDeg);
  const right = normalize(vec3(-forward.y, forward.x, 0));
  const up = vec3(
    right.y * forward.z - right.z * forward.y,
    right.z * forward.x - right.x * forward.z,
    right.x * forward.y - right.y * forward.x,
  );
  const rel = sub(point, camera.position);
  const depth = dot(rel, forward);
  if (depth < 0.05) return null;
  const sx = (dot(rel, right) / depth) * camera.focalPx + width / 2;
  const sy = height / 2 - (dot(rel, up) / depth) * camera.focalPx;
  return { x: sx, y: sy, depth };
}

/** Pixel radius of a cone of `halfAngleDeg` as seen through the camera. */
export function haloRadiusPx(halfAngleDeg: number, focalPx: number): number {
  return Math.tan((halfAngleDeg * Math.PI) / 180) * focalPx;
}
