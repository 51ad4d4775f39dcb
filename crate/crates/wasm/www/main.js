import init, { modular_data, fusion_table, evaluate_link, sample_link } from "./pkg/shadowsum_wasm.js";

const $ = (id) => document.getElementById(id);
const out = $("out");

const fmt = (x) => (Math.abs(x) < 1e-13 ? "0" : x.toPrecision(8));
const cfmt = ([re, im]) => (Math.abs(im) < 1e-13 ? fmt(re) : `${fmt(re)} ${im < 0 ? "-" : "+"} ${fmt(Math.abs(im))}i`);
const w = (v) => `(${v.join(",")})`;

function theory() {
  return [$("algebra").value, Number($("level").value)];
}

function call(f) {
  try {
    out.innerHTML = "";
    f();
  } catch (e) {
    let msg = String(e);
    try {
      const o = JSON.parse(msg);
      msg = `${o.code}: ${o.message}`;
    } catch (_) {}
    out.innerHTML = `<p class="err">${msg}</p>`;
  }
}

function table(head, rows) {
  const h = head.map((c) => `<th>${c}</th>`).join("");
  const b = rows.map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${h}</tr>${b}</table>`;
}

function showModular() {
  const d = JSON.parse(modular_data(...theory()));
  const rows = d.alcove.map((a, i) => [i, w(a), fmt(d.qdims[i]), cfmt(d.t[i]), d.conj[i]]);
  const s = d.s.map((r, i) => [w(d.alcove[i]), ...r.map(cfmt)]);
  const checks = d.checks
    .map((c) => `<li class="${c.pass ? "ok" : "err"}">${c.name}: ${c.max_dev.toExponential(2)}</li>`)
    .join("");
  out.innerHTML =
    `<h2>${d.algebra} level ${d.level}: ${d.alcove.length} weights</h2>` +
    table(["#", "weight", "qdim", "T", "conj"], rows) +
    `<h3>S</h3>` +
    table(["", ...d.alcove.map(w)], s) +
    `<ul>${checks}</ul>`;
}

function showFusion() {
  const d = JSON.parse(fusion_table(...theory()));
  const rows = d.entries.map(([g, a, b, v, r]) => [w(d.alcove[g]), w(d.alcove[a]), w(d.alcove[b]), fmt(v), r]);
  out.innerHTML =
    `<h2>${d.algebra} level ${d.level}: N<sup>&beta;</sup><sub>&gamma;&alpha;</sub></h2>` +
    `<p class="${d.pass ? "ok" : "err"}">max |Verlinde - Racah| = ${d.max_dev.toExponential(2)}, ` +
    `${d.mismatches} mismatched entries</p>` +
    table(["&gamma;", "&alpha;", "&beta;", "Verlinde", "Racah"], rows);
}

function showLink() {
  const d = JSON.parse(evaluate_link($("doc").value, ...theory()));
  const faces = d.faces.map((f) => [f.id, f.euler, f.gleam]);
  const ok = d.theorem_rel_dev < 1e-9;
  out.innerHTML =
    `<h2>${d.algebra} level ${d.level}, genus ${d.genus}</h2>` +
    table(["face", "Euler", "gleam"], faces) +
    `<pre>|X_L|      = ${cfmt(d.shadow_state_sum)}\nST_CS(L)   = ${cfmt(d.cs_state_sum)}\n` +
    `WLO shadow = ${cfmt(d.wlo_shadow)}\nWLO CS     = ${cfmt(d.wlo_cs)}</pre>` +
    `<p class="${ok ? "ok" : "err"}">ST_CS vs K^(2-2g) |X_L|: relative difference ${d.theorem_rel_dev.toExponential(2)}</p>`;
}

function loadSample(nested) {
  $("doc").value = sample_link(...theory(), nested);
}

await init();
$("btn-modular").onclick = () => call(showModular);
$("btn-fusion").onclick = () => call(showFusion);
$("btn-eval").onclick = () => call(showLink);
$("btn-sample").onclick = () => call(() => loadSample(false));
$("btn-sample-nested").onclick = () => call(() => loadSample(true));
call(() => loadSample(false));
