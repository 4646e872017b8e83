import init, { xc_slice_grid, sigma_orbit, verify_family } from "./pkg/sklyrep_web.js";

const $ = (id) => document.getElementById(id);

const FAMILIES = {
  t1f1: "c=5,y4=0.7,z4=1.3", t1f2: "c=5,y4=0.7,z4=1.3", t1f3: "c=5,z2=0.4,z3=-0.8,z4=1.1",
  t1f4: "c=5,z2=0.4,z3=-0.8,z4=1.1", t1f5: "c=5,y4=0.7,z4=1.3",
  t2f1: "c=5,y3=1,y4=0.5,z4=2", t2f2: "c=5,x4=1,y3=0.5", t2f3: "c=5,y4=1,z3=0.5,z4=2",
  t2f4: "c=5,x4=1,z3=0.5", t2f5: "c=5,y3=1,y4=0.5,z3=0.3,z4=2", t2f6: "c=5,y3=1,y4=0.5,z3=0.3,z4=2",
  t3f1: "c=5,z2=0.4,z3=-0.8", t3f2: "c=2,z4=1",
  t4f1: "c=5,y4=1,z4=2i", t4f2: "c=5,x4=1.3", t4f3: "c=5,y4=0.6,z4=1.2",
  t4f4: "c=5,y4=0.7,z3=-1.1,z4=0.5",
};

const fmtC = ([re, im]) => {
  const r = +re.toPrecision(6), i = +im.toPrecision(6);
  if (i === 0) return `${r}`;
  if (r === 0) return `${i}i`;
  return `${r}${i < 0 ? "-" : "+"}${Math.abs(i)}i`;
};

function drawSlice() {
  const canvas = $("s-canvas");
  const n = canvas.width;
  const w = parseFloat($("s-w").value) || 1;
  const u1 = parseFloat($("s-u1").value);
  $("s-u1v").textContent = u1.toFixed(2);
  const vals = xc_slice_grid(parseFloat($("s-cre").value) || 0, parseFloat($("s-cim").value) || 0, u1, -w, w, n);
  if (vals.length !== n * n) return;
  let lo = Infinity, hi = -Infinity;
  for (const v of vals) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      // u2 runs left to right, u3 bottom to top
      const t = hi > lo ? (vals[i * n + j] - lo) / (hi - lo) : 0;
      const p = 4 * ((n - 1 - j) * n + i);
      img.data[p] = 255 * Math.sqrt(t);
      img.data[p + 1] = 255 * t;
      img.data[p + 2] = 255 * t * t + 60 * (1 - t);
      img.data[p + 3] = 255;
    }
  }
  ctx.putImageData(img, 0, 0);
  $("s-info").textContent = `range ${lo.toPrecision(4)} to ${hi.toPrecision(4)}`;
}

function runSigma() {
  const r = JSON.parse(sigma_orbit($("g-a").value, $("g-b").value, $("g-c").value,
    parseInt($("g-max").value) || 12, 3, parseInt($("g-seed").value) >>> 0));
  const out = $("g-out");
  out.className = r.error ? "err" : "";
  if (r.error) { out.textContent = r.error; return; }
  const lines = [`order: ${r.order ?? "exceeds " + r.max_order}${r.relaxed ? " (relaxed)" : ""}`];
  r.orbits.forEach((orbit, k) => {
    lines.push(`orbit ${k}:`);
    orbit.slice(0, (r.order ?? r.max_order) + 1).forEach((pt, s) =>
      lines.push(`  σ^${s}  [${[pt.u, pt.v, pt.w].map(fmtC).join(" : ")}]`));
  });
  out.textContent = lines.join("\n");
}

function runVerify() {
  const r = JSON.parse(verify_family($("v-fam").value, $("v-set").value, $("v-neg").checked));
  const out = $("v-out");
  out.className = r.error ? "err" : "";
  if (r.error) { out.textContent = r.error; return; }
  const lines = [`${r.family}  residual ${r.residual.toExponential(3)}  irreducible ${r.irreducible}`];
  ["x", "y", "z"].forEach((g, k) => {
    const m = r.matrices[k];
    lines.push(`${g} = [${m.map((row) => row.map(fmtC).join(", ")).join(" ; ")}]`);
  });
  for (const k of ["u1", "u2", "u3", "g"]) lines.push(`${k.padEnd(3)}= ${fmtC(r.center[k])}`);
  lines.push(`|F| = ${r.center.f_residual.toExponential(3)}`);
  out.textContent = lines.join("\n");
}

await init();
for (const id of Object.keys(FAMILIES)) $("v-fam").add(new Option(id, id));
$("v-fam").value = "t4f1";
$("v-fam").addEventListener("change", () => { $("v-set").value = FAMILIES[$("v-fam").value]; });
for (const id of ["s-cre", "s-cim", "s-u1", "s-w"]) $(id).addEventListener("input", drawSlice);
$("g-run").addEventListener("click", runSigma);
$("v-run").addEventListener("click", runVerify);
drawSlice();
runSigma();
runVerify();
