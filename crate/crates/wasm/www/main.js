import init, { curve_svg, solve2d, ellipsoid } from "./pkg/inscribe_wasm.js";

const num = (id) => parseFloat(document.getElementById(id).value);
const pretty = (s) => JSON.stringify(JSON.parse(s), null, 2);

function drawCurve() {
  const args = [num("a"), num("b"), num("alpha"), num("beta")];
  const svg = curve_svg(...args);
  document.getElementById("figure").innerHTML = svg.startsWith("<") ? svg : "";
  document.getElementById("curve-out").textContent = pretty(solve2d(...args));
}

function solveBox() {
  document.getElementById("box-out").textContent = pretty(ellipsoid(num("ea"), num("eb"), num("ec")));
}

await init();
document.getElementById("draw").addEventListener("click", drawCurve);
document.getElementById("solve3d").addEventListener("click", solveBox);
drawCurve();
solveBox();
