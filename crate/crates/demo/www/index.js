// Built by `wasm-pack build crates/demo --target web --out-dir www/pkg`.
import init, { trajectories, convergence, circle_start } from "./pkg/simroots_demo.js";

const $ = (id) => document.getElementById(id);
const canvas = $("plot");
const ctx = canvas.getContext("2d");
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const PAD = 40;

function inputs() {
  return {
    coeffs: $("coeffs").value,
    start: $("start").value,
    method: $("method").value,
    maxIter: Math.max(1, parseInt($("max-iter").value, 10) || 1),
    seed: Math.max(0, parseInt($("seed").value, 10) || 0),
  };
}

function report(text, isError = false) {
  const s = $("status");
  s.textContent = text;
  s.className = isError ? "error" : "";
}

function clear() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
}

// Maps data coordinates into the canvas, keeping the aspect ratio when asked.
function frame(xmin, xmax, ymin, ymax, square) {
  let w = canvas.width - 2 * PAD;
  let h = canvas.height - 2 * PAD;
  let sx = w / (xmax - xmin || 1);
  let sy = h / (ymax - ymin || 1);
  if (square) sx = sy = Math.min(sx, sy);
  return {
    x: (v) => PAD + (v - xmin) * sx,
    y: (v) => canvas.height - PAD - (v - ymin) * sy,
  };
}

function axes(f, xs, ys) {
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.moveTo(f.x(xs[0]), f.y(0));
  ctx.lineTo(f.x(xs[1]), f.y(0));
  ctx.moveTo(f.x(0), f.y(ys[0]));
  ctx.lineTo(f.x(0), f.y(ys[1]));
  ctx.stroke();
}

function drawPaths(data) {
  clear();
  const pts = data.paths.flat();
  const re = pts.map((p) => p[0]);
  const im = pts.map((p) => p[1]);
  const lo = [Math.min(...re), Math.min(...im)];
  const hi = [Math.max(...re), Math.max(...im)];
  const f = frame(lo[0], hi[0], lo[1], hi[1], true);
  axes(f, [lo[0], hi[0]], [lo[1], hi[1]]);
  data.paths.forEach((path, l) => {
    ctx.strokeStyle = ctx.fillStyle = COLORS[l % COLORS.length];
    ctx.beginPath();
    path.forEach(([x, y], m) => (m ? ctx.lineTo(f.x(x), f.y(y)) : ctx.moveTo(f.x(x), f.y(y))));
    ctx.stroke();
    path.forEach(([x, y]) => ctx.fillRect(f.x(x) - 1.5, f.y(y) - 1.5, 3, 3));
    const [x0, y0] = path[0];
    ctx.strokeRect(f.x(x0) - 4, f.y(y0) - 4, 8, 8);
  });
  ctx.fillStyle = "#000";
  for (const [x, y] of data.roots) {
    ctx.beginPath();
    ctx.arc(f.x(x), f.y(y), 4, 0, 2 * Math.PI);
    ctx.fill();
  }
  const roots = data.roots.map(([x, y]) => `${x.toPrecision(16)} ${y >= 0 ? "+" : "-"} ${Math.abs(y).toExponential(3)}i`);
  report(`${data.method}: ${data.status} after ${data.iterations} iterations\n${roots.join("\n")}`);
}

function drawCurves(curves) {
  clear();
  const logs = curves.flatMap((c) => c.step_norms.filter((v) => v > 0).map(Math.log10));
  const mmax = Math.max(...curves.map((c) => c.step_norms.length), 1);
  const lo = Math.floor(Math.min(...logs, -16));
  const hi = Math.ceil(Math.max(...logs, 0));
  const f = frame(0, mmax, lo, hi, false);
  ctx.fillStyle = "#666";
  ctx.strokeStyle = "#eee";
  for (let d = lo; d <= hi; d += 2) {
    ctx.beginPath();
    ctx.moveTo(f.x(0), f.y(d));
    ctx.lineTo(f.x(mmax), f.y(d));
    ctx.stroke();
    ctx.fillText(`1e${d}`, 2, f.y(d) + 4);
  }
  const lines = [];
  curves.forEach((c, i) => {
    ctx.strokeStyle = COLORS[i];
    ctx.beginPath();
    let started = false;
    c.step_norms.forEach((v, m) => {
      if (!(v > 0)) return;
      const [x, y] = [f.x(m + 1), f.y(Math.log10(v))];
      started ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
      started = true;
    });
    ctx.stroke();
    const order = c.order == null ? "undefined" : c.order.toFixed(2);
    lines.push(`${c.method.padEnd(10)} ${c.status.padEnd(18)} ${String(c.iterations).padStart(4)} iterations, order ${order}`);
  });
  report(lines.join("\n") + "\nstep norm (log scale) against iteration; blue wdk, red chebyshev");
}

function guarded(fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      report(String(e), true);
    }
  };
}

await init();

$("run-paths").onclick = guarded(() => {
  const o = inputs();
  drawPaths(JSON.parse(trajectories(o.coeffs, o.start, o.method, o.maxIter)));
});

$("run-curves").onclick = guarded(() => {
  const o = inputs();
  drawCurves(JSON.parse(convergence(o.coeffs, o.start, o.maxIter)));
});

$("run-circle").onclick = guarded(() => {
  const o = inputs();
  const pts = JSON.parse(circle_start(o.coeffs, o.seed));
  const fmt = (v) => String(Number(v.toPrecision(6)));
  $("start").value = pts.map(([x, y]) => `${fmt(x)}${y < 0 ? "-" : "+"}${fmt(Math.abs(y))}i`).join(" ");
  report(`circle start with seed ${o.seed}`);
});

report("ready");
