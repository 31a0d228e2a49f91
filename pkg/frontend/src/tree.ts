import type { Session } from "./state.js";
import { findResult } from "./state.js";
import type { TopoNode } from "./types.js";

// one colour per grade position, low to high; the unknown segment is grey
const GRADE_COLORS = ["#c0392b", "#e67e22", "#f1c40f", "#27ae60", "#2980b9", "#8e44ad", "#16a085"];
export const UNKNOWN_COLOR = "#9e9e9e";

const SLIDER_MIN = 1;
const SLIDER_MAX = 10;
const SLIDER_STEP = 0.1;

interface CardRefs {
  card: HTMLElement;
  badge: HTMLElement;
  crisp: HTMLElement;
  percent: HTMLElement | null;
  segments: Map<string, HTMLElement>;
  slider: HTMLInputElement | null;
  readout: HTMLElement | null;
}

/**
 * Build the framework tree once and keep it in sync with the session.
 * Element references are captured at build time, so updates never recreate
 * an input and a slider survives re-renders while it is being dragged.
 */
export function renderFrameworkTree(container: HTMLElement, session: Session): void {
  const topo = session.topology;
  if (!topo) throw new Error("renderFrameworkTree needs a fetched topology");
  container.innerHTML = "";
  const refs = new Map<string, CardRefs>();
  container.appendChild(buildNode(topo.nodes, session, true, refs));
  const update = () => updateTree(refs, session);
  session.subscribe(update);
  update();
}

function buildNode(
  node: TopoNode,
  session: Session,
  isRoot: boolean,
  refs: Map<string, CardRefs>,
): HTMLElement {
  const card = document.createElement("div");
  card.className = node.leaf ? "node leaf" : "node internal";
  card.dataset.node = node.name;

  const header = document.createElement("div");
  header.className = "node-header";

  const name = document.createElement("span");
  name.className = "node-name";
  name.textContent = node.name;
  header.appendChild(name);

  const badge = document.createElement("span");
  badge.className = "badge uncovered";
  badge.textContent = "uncovered";
  badge.hidden = true;
  header.appendChild(badge);

  const crisp = document.createElement("span");
  crisp.className = "crisp";
  header.appendChild(crisp);

  let percent: HTMLElement | null = null;
  if (isRoot) {
    percent = document.createElement("span");
    percent.className = "percent";
    header.appendChild(percent);
  }
  card.appendChild(header);

  const segments = new Map<string, HTMLElement>();
  card.appendChild(buildBar(node, session, segments));

  let slider: HTMLInputElement | null = null;
  let readout: HTMLElement | null = null;
  if (node.leaf) {
    const controls = buildLeafControls(node.name, session);
    card.appendChild(controls.row);
    slider = controls.slider;
    readout = controls.readout;
  } else {
    const children = document.createElement("div");
    children.className = "children";
    for (const child of node.children) {
      children.appendChild(buildNode(child, session, false, refs));
    }
    card.appendChild(children);
  }

  refs.set(node.name, { card, badge, crisp, percent, segments, slider, readout });
  return card;
}

function buildBar(
  node: TopoNode,
  session: Session,
  segments: Map<string, HTMLElement>,
): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "belief-bar";
  const grades = session.topology?.scales[node.scale]?.grades ?? [];
  grades.forEach((grade, i) => {
    const seg = document.createElement("div");
    seg.className = "bar-seg";
    seg.dataset.grade = grade;
    seg.style.backgroundColor = GRADE_COLORS[i % GRADE_COLORS.length];
    seg.style.width = "0%";
    seg.title = grade;
    bar.appendChild(seg);
    segments.set(grade, seg);
  });
  const unknown = document.createElement("div");
  unknown.className = "bar-seg unknown";
  unknown.dataset.grade = "__unknown__";
  unknown.style.backgroundColor = UNKNOWN_COLOR;
  unknown.style.width = "0%";
  unknown.title = "unknown";
  bar.appendChild(unknown);
  segments.set("__unknown__", unknown);
  return bar;
}

function buildLeafControls(
  leaf: string,
  session: Session,
): { row: HTMLElement; slider: HTMLInputElement; readout: HTMLElement } {
  const row = document.createElement("div");
  row.className = "leaf-controls";

  const slider = document.createElement("input");
  slider.type = "range";
  slider.className = "leaf-slider";
  slider.min = String(SLIDER_MIN);
  slider.max = String(SLIDER_MAX);
  slider.step = String(SLIDER_STEP);
  slider.value = String(session.inputs.get(leaf)?.value ?? session.defaultValue(leaf));
  slider.addEventListener("input", () => {
    session.setInput(leaf, parseFloat(slider.value));
  });
  row.appendChild(slider);

  const readout = document.createElement("span");
  readout.className = "slider-value";
  readout.textContent = slider.value;
  row.appendChild(readout);

  const label = document.createElement("label");
  label.className = "no-answer-label";
  const toggle = document.createElement("input");
  toggle.type = "checkbox";
  toggle.className = "no-answer";
  toggle.addEventListener("change", () => {
    session.setNoAnswer(leaf, toggle.checked);
  });
  label.appendChild(toggle);
  label.appendChild(document.createTextNode(" no answer"));
  row.appendChild(label);

  return { row, slider, readout };
}

function updateTree(refs: Map<string, CardRefs>, session: Session): void {
  const blank = session.blankSubtrees();
  for (const [name, card] of refs) {
    updateCard(name, card, session, blank);
  }
}

function updateCard(
  name: string,
  refs: CardRefs,
  session: Session,
  blankSubtrees: Set<string>,
): void {
  const input = session.inputs.get(name);
  if (refs.slider && input) {
    if (document.activeElement !== refs.slider) refs.slider.value = String(input.value);
    refs.slider.disabled = input.noAnswer;
    refs.slider.classList.toggle("greyed", input.noAnswer);
    if (refs.readout) {
      refs.readout.textContent = input.noAnswer ? "no answer" : String(input.value);
    }
  }

  refs.badge.hidden = !(session.uncoveredNodes.has(name) || blankSubtrees.has(name));
  refs.card.classList.toggle("stale", session.serviceDown);

  const result = session.lastResult ? findResult(session.lastResult, name) : null;
  if (!result) {
    refs.crisp.textContent = "";
    if (refs.percent) refs.percent.textContent = "";
    return;
  }

  refs.crisp.dataset.crisp = String(result.crisp);
  refs.crisp.textContent = result.crisp.toFixed(4);
  if (refs.percent) {
    refs.percent.dataset.percent = String(result.percent);
    refs.percent.textContent = `${result.percent.toFixed(3)}%`;
  }
  for (const [grade, seg] of refs.segments) {
    const mass = grade === "__unknown__" ? result.unassigned : (result.distribution[grade] ?? 0);
    seg.style.width = `${(mass * 100).toFixed(2)}%`;
    seg.dataset.mass = String(mass);
  }
}
