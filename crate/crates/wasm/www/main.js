import init, { frame_bounds, phase_space, shape_landscape, shape_y_max } from "./pkg/gabor_lattice_wasm.js";

const domain = document.getElementById("domain");
const atoms = document.getElementById("atoms");
const densityInput = document.getElementById("density");
const status = document.getElementById("status");

// Viewport of the domain canvas in shape coordinates.
const X_MAX = 0.5;
const Y_MIN = Math.sqrt(3) / 2;
let yMax = 2;

let shape = { x: 0.5, y: Math.sqrt(3) / 2 };
let landscape = null;

// Dark-to-bright colormap stops.
const STOPS = [
  [68, 1, 84], [58, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37],
];

function color(t) {
  t = Math.min(1, Math.max(0, Number.isFinite(t) ? t : 0));
  const s = t * (STOPS.length - 1);
  const k = Math.min(Math.floor(s), STOPS.length - 2);
  const f = s - k;
  return STOPS[k].map((c, i) => Math.round(c * (1 - f) + STOPS[k + 1][i] * f));
}

function toCanvas(x, y) {
  return [(x / X_MAX) * domain.width, ((yMax - y) / (yMax - Y_MIN)) * domain.height];
}

function fromCanvas(px, py) {
  return [(px / domain.width) * X_MAX, yMax - (py / domain.height) * (yMax - Y_MIN)];
}

function density() {
  return Number(densityInput.value);
}

function drawDomain() {
  const ctx = domain.getContext("2d");
  const img = ctx.createImageData(domain.width, domain.height);
  let lo = Infinity, hi = -Infinity;
  if (landscape) {
    for (const v of landscape.values) if (Number.isFinite(v)) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  }
  const maximize = landscape && landscape.objective === "covering";
  for (let j = 0; j < domain.height; j++) {
    for (let i = 0; i < domain.width; i++) {
      const [x, y] = fromCanvas(i + 0.5, j + 0.5);
      const y0 = Math.sqrt(1 - x * x);
      let rgb;
      if (y < y0) {
        rgb = [96, 96, 96];
      } else if (landscape) {
        const n = landscape.grid, m = n - 1;
        const gi = Math.min(m, Math.round(x * 2 * m));
        const gj = Math.min(m, Math.round(((y - y0) / (yMax - y0)) * m));
        const v = landscape.values[gi * n + gj];
        const t = (v - lo) / Math.max(hi - lo, 1e-300);
        rgb = Number.isFinite(v) ? color(maximize ? t : 1 - t) : [0, 0, 0];
      } else {
        rgb = [236, 236, 236];
      }
      const o = 4 * (j * domain.width + i);
      img.data.set([...rgb, 255], o);
    }
  }
  ctx.putImageData(img, 0, 0);
  if (landscape) cross(ctx, landscape.x, landscape.y, 7, "#fff");
  cross(ctx, shape.x, shape.y, 5, "#d22");
}

function cross(ctx, x, y, r, style) {
  let [px, py] = toCanvas(x, y);
  px = Math.min(px, domain.width - 1);
  py = Math.min(py, domain.height - 1);
  ctx.strokeStyle = style;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(px - r, py); ctx.lineTo(px + r, py);
  ctx.moveTo(px, py - r); ctx.lineTo(px, py + r);
  ctx.stroke();
}

function drawAtoms() {
  const n = atoms.width;
  const vals = phase_space(shape.x, shape.y, density(), n, 3.0);
  let lo = Infinity, hi = -Infinity;
  for (const v of vals) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const ctx = atoms.getContext("2d");
  const img = ctx.createImageData(n, n);
  for (let k = 0; k < n * n; k++) {
    img.data.set([...color((vals[k] - lo) / Math.max(hi - lo, 1e-300)), 255], 4 * k);
  }
  ctx.putImageData(img, 0, 0);
}

function fmt(v) {
  return v.toPrecision(10);
}

// Operation 1: bounds and atoms for the selected shape.
function update() {
  status.textContent = "";
  drawDomain();
  try {
    const b = frame_bounds(shape.x, shape.y, density());
    document.getElementById("shape").textContent = `x = ${b.x.toFixed(4)}, y = ${b.y.toFixed(4)}`;
    document.getElementById("A").textContent = fmt(b.a);
    document.getElementById("B").textContent = fmt(b.b);
    document.getElementById("ratio").textContent = fmt(b.ratio);
    document.getElementById("method").textContent = b.method;
    b.free();
    drawAtoms();
  } catch (e) {
    for (const id of ["A", "B", "ratio", "method"]) document.getElementById(id).textContent = "–";
    status.textContent = String(e.message ?? e);
  }
}

domain.addEventListener("click", (ev) => {
  const r = domain.getBoundingClientRect();
  const [x, y] = fromCanvas(ev.clientX - r.left, ev.clientY - r.top);
  shape = { x: Math.min(X_MAX, Math.max(0, x)), y: Math.max(y, Math.sqrt(1 - Math.min(x * x, 1))) };
  update();
});

// Operation 2: changing the density invalidates the scan.
densityInput.addEventListener("change", () => {
  landscape = null;
  update();
});

// Operation 3: scan the domain for the chosen objective.
document.getElementById("scan").addEventListener("click", () => {
  const objective = document.getElementById("objective").value;
  const grid = Number(document.getElementById("grid").value);
  status.textContent = "scanning…";
  // Let the status paint before the blocking computation.
  setTimeout(() => {
    try {
      const l = shape_landscape(density(), objective, grid);
      landscape = { grid: l.grid, values: l.values(), x: l.argopt_x, y: l.argopt_y, objective };
      l.free();
      shape = { x: landscape.x, y: landscape.y };
      update();
    } catch (e) {
      status.textContent = String(e.message ?? e);
    }
  }, 20);
});

await init();
yMax = shape_y_max();
update();
