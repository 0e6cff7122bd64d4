// Built with: wasm-pack build crates/wasm-demo --target web --out-dir www/pkg
import init, { benchmarkTrace, landscape, knapsackCompare } from "./pkg/hrcqea_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
let lastRun = null;

function plot(canvas, series, { log = false, title = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, w, h);
  const tf = (v) => (log ? Math.log10(Math.max(v, 1e-300)) : v);
  const all = series.flatMap((s) => Array.from(s.data, tf)).filter(Number.isFinite);
  if (!all.length) return;
  let lo = Math.min(...all), hi = Math.max(...all);
  if (hi === lo) { hi += 1; lo -= 1; }
  const len = Math.max(...series.map((s) => s.data.length));
  const x = (i) => pad + (i / Math.max(len - 1, 1)) * (w - pad - 8);
  const y = (v) => h - pad + 8 - ((tf(v) - lo) / (hi - lo)) * (h - pad - 8);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 8, w - pad - 8, h - pad);
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  const fmt = (v) => (log ? `1e${v.toFixed(0)}` : v.toPrecision(4));
  ctx.fillText(fmt(hi), 2, 16);
  ctx.fillText(fmt(lo), 2, h - pad + 8);
  ctx.fillText(`${title}  (${len - 1} generations)`, pad + 4, h - 10);

  series.forEach((s, k) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.data.forEach((v, i) => (i ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v))));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, w - 130, 22 + 14 * k);
  });
}

function guard(out, fn) {
  out.classList.remove("err");
  try {
    fn();
  } catch (e) {
    out.textContent = String(e.message ?? e);
    out.classList.add("err");
  }
}

function runBenchmark() {
  guard($("bm-out"), () => {
    const problem = $("bm-problem").value;
    const t0 = performance.now();
    const t = benchmarkTrace(problem, num("bm-dim"), num("bm-pop"), num("bm-gens"), num("bm-seed"));
    const ms = performance.now() - t0;
    const best = t.best();
    plot($("bm-curve"), [
      { data: best, color: "#c33", label: "best" },
      { data: t.mean(), color: "#36c", label: "mean" },
    ], { log: true, title: "fitness (log10)" });
    plot($("bm-angle"), [{ data: t.angle(), color: "#393", label: "avg angle" }], { title: "rotation angle" });
    const pos = t.position();
    $("bm-out").textContent =
      `final best ${best[best.length - 1].toExponential(4)}  evaluations ${t.evaluations()}  ${ms.toFixed(0)} ms\n` +
      `position [${Array.from(pos.slice(0, 6), (v) => v.toPrecision(5)).join(", ")}${pos.length > 6 ? ", ..." : ""}]`;
    lastRun = { problem, pos };
  });
}

const HALF_WIDTH = { sphere: 100, rastrigin: 5.12, ackley: 32, schwefel: 500, griewank: 600 };

function drawLandscape() {
  guard($("bm-out"), () => {
    const problem = $("ls-problem").value;
    const n = num("ls-res");
    const grid = landscape(problem, n);
    const canvas = $("ls-canvas");
    const ctx = canvas.getContext("2d");
    const off = new OffscreenCanvas(n, n);
    const octx = off.getContext("2d");
    const img = octx.createImageData(n, n);
    const logs = Array.from(grid, (v) => Math.log1p(Math.max(v, 0)));
    // Spread would overflow the argument limit at high resolution.
    const lo = logs.reduce((a, b) => Math.min(a, b)), hi = logs.reduce((a, b) => Math.max(a, b));
    logs.forEach((v, i) => {
      const s = (v - lo) / (hi - lo || 1);
      const row = n - 1 - Math.floor(i / n); // row 0 of the grid is the bottom edge
      const p = 4 * (row * n + (i % n));
      img.data[p] = 255 * s;
      img.data[p + 1] = 80 + 120 * (1 - s);
      img.data[p + 2] = 255 * (1 - s);
      img.data[p + 3] = 255;
    });
    octx.putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);

    if (lastRun && lastRun.problem === problem && lastRun.pos.length === 2) {
      const [lo2, hi2] = [-HALF_WIDTH[problem], HALF_WIDTH[problem]];
      const px = ((lastRun.pos[0] - lo2) / (hi2 - lo2)) * canvas.width;
      const py = (1 - (lastRun.pos[1] - lo2) / (hi2 - lo2)) * canvas.height;
      ctx.strokeStyle = "#fff";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(px, py, 6, 0, 2 * Math.PI);
      ctx.stroke();
    }
  });
}

function compareKnapsack() {
  guard($("ks-out"), () => {
    const c = knapsackCompare(num("ks-items"), num("ks-seed"), num("ks-gens"), num("ks-runs"));
    plot($("ks-curve"), [
      { data: c.hrcqea_curve(), color: "#c33", label: "HRCQEA" },
      { data: c.qea_curve(), color: "#36c", label: "QEA" },
    ], { title: "mean best profit" });
    const stats = (xs) => {
      const m = xs.reduce((a, b) => a + b, 0) / xs.length;
      return `mean ${m.toFixed(3)}  best ${Math.max(...xs).toFixed(3)}  worst ${Math.min(...xs).toFixed(3)}`;
    };
    $("ks-out").textContent =
      `capacity ${c.capacity().toFixed(3)}\nHRCQEA  ${stats(c.hrcqea_finals())}\nQEA     ${stats(c.qea_finals())}`;
  });
}

await init();
$("bm-run").onclick = runBenchmark;
$("ls-run").onclick = drawLandscape;
$("ks-run").onclick = compareKnapsack;
drawLandscape();
