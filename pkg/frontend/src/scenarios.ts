import type { ScenarioDraft, Session } from "./state.js";
import type { ScenarioOutcomeDoc, TopoNode, WhatIfResponse } from "./types.js";

export type SortMode = "impact" | "name";

/** Depth-first node names; fixes the delta column order of the table. */
export function nodeOrder(root: TopoNode): string[] {
  const names: string[] = [root.name];
  if (!root.leaf) {
    for (const child of root.children) names.push(...nodeOrder(child));
  }
  return names;
}

export function sortOutcomes(
  outcomes: ScenarioOutcomeDoc[],
  mode: SortMode,
): ScenarioOutcomeDoc[] {
  const rows = [...outcomes];
  if (mode === "name") {
    rows.sort((a, b) => a.scenario.localeCompare(b.scenario));
  } else {
    // largest impact first; failed scenarios have no delta and sink
    rows.sort((a, b) => {
      const ae = a.error !== undefined ? 1 : 0;
      const be = b.error !== undefined ? 1 : 0;
      if (ae !== be) return ae - be;
      const ad = Math.abs(a.root_delta ?? 0);
      const bd = Math.abs(b.root_delta ?? 0);
      if (ad !== bd) return bd - ad;
      return a.scenario.localeCompare(b.scenario);
    });
  }
  return rows;
}

/** Comparison as delimited text, one row per scenario, for the export button. */
export function buildExportText(report: WhatIfResponse, order: string[]): string {
  const header = ["scenario", "error", "root_delta", ...order.map((n) => `delta:${n}`)];
  const lines = [header.join(",")];
  lines.push(
    ["baseline", "", "", ...order.map(() => "0.000000")].join(","),
  );
  for (const outcome of report.scenarios) {
    if (outcome.error !== undefined) {
      lines.push([outcome.scenario, quote(outcome.error), "", ...order.map(() => "")].join(","));
      continue;
    }
    const cells = order.map((n) => (outcome.deltas?.[n] ?? 0).toFixed(6));
    lines.push([outcome.scenario, "", (outcome.root_delta ?? 0).toFixed(6), ...cells].join(","));
  }
  return lines.join("\n") + "\n";
}

function quote(text: string): string {
  return `"${text.replace(/"/g, '""')}"`;
}

export function renderWorkbench(container: HTMLElement, session: Session): void {
  container.innerHTML = "";
  container.className = "workbench";

  const controls = document.createElement("div");
  controls.className = "workbench-controls";

  const nameInput = document.createElement("input");
  nameInput.type = "text";
  nameInput.className = "draft-name";
  nameInput.placeholder = "scenario name";
  controls.appendChild(nameInput);

  const addBtn = document.createElement("button");
  addBtn.className = "add-draft";
  addBtn.textContent = "add scenario";
  addBtn.addEventListener("click", () => {
    const name = nameInput.value.trim();
    if (name) {
      session.addDraft(name);
      nameInput.value = "";
    }
  });
  controls.appendChild(addBtn);

  const runBtn = document.createElement("button");
  runBtn.className = "run-whatif";
  runBtn.textContent = "compare scenarios";
  runBtn.addEventListener("click", () => {
    void session.runWhatIf().catch(() => {
      // service-level failures land on the session flags; nothing to do here
    });
  });
  controls.appendChild(runBtn);

  const exportBtn = document.createElement("button");
  exportBtn.className = "export-comparison";
  exportBtn.textContent = "export";
  exportBtn.addEventListener("click", () => downloadComparison(session));
  controls.appendChild(exportBtn);

  container.appendChild(controls);

  const draftList = document.createElement("div");
  draftList.className = "draft-list";
  container.appendChild(draftList);

  const tableHost = document.createElement("div");
  tableHost.className = "whatif-results";
  container.appendChild(tableHost);

  let sortMode: SortMode = "impact";
  const update = () => {
    renderDrafts(draftList, session);
    renderTable(tableHost, session, sortMode, (mode) => {
      sortMode = mode;
      update();
    });
  };
  session.subscribe(update);
  update();
}

function renderDrafts(host: HTMLElement, session: Session): void {
  host.innerHTML = "";
  for (const draft of session.drafts) {
    host.appendChild(buildDraftCard(draft, session));
  }
}

function buildDraftCard(draft: ScenarioDraft, session: Session): HTMLElement {
  const card = document.createElement("div");
  card.className = "draft";
  card.dataset.draft = draft.name;

  const title = document.createElement("span");
  title.className = "draft-title";
  title.textContent = draft.name;
  card.appendChild(title);

  const remove = document.createElement("button");
  remove.className = "remove-draft";
  remove.textContent = "remove";
  remove.addEventListener("click", () => session.removeDraft(draft.name));
  card.appendChild(remove);

  const leafSelect = document.createElement("select");
  leafSelect.className = "override-leaf";
  for (const leaf of session.topology?.leaves ?? []) {
    const opt = document.createElement("option");
    opt.value = leaf;
    opt.textContent = leaf;
    leafSelect.appendChild(opt);
  }
  card.appendChild(leafSelect);

  const valueInput = document.createElement("input");
  valueInput.type = "number";
  valueInput.className = "override-value";
  valueInput.min = "1";
  valueInput.max = "10";
  valueInput.step = "0.1";
  card.appendChild(valueInput);

  const noAnswer = document.createElement("label");
  const noAnswerBox = document.createElement("input");
  noAnswerBox.type = "checkbox";
  noAnswerBox.className = "override-missing";
  noAnswer.appendChild(noAnswerBox);
  noAnswer.appendChild(document.createTextNode(" no answer"));
  card.appendChild(noAnswer);

  const summary = document.createElement("span");
  summary.className = "override-summary";
  const refreshSummary = () => {
    summary.textContent = Object.entries(draft.overrides)
      .map(([leaf, v]) => `${leaf}=${v === null ? "no answer" : v}`)
      .join(", ");
  };
  refreshSummary();

  const setBtn = document.createElement("button");
  setBtn.className = "set-override";
  setBtn.textContent = "set";
  setBtn.addEventListener("click", () => {
    const leaf = leafSelect.value;
    if (!leaf) return;
    draft.overrides[leaf] = noAnswerBox.checked ? null : parseFloat(valueInput.value);
    refreshSummary();
  });
  card.appendChild(setBtn);
  card.appendChild(summary);

  return card;
}

function renderTable(
  host: HTMLElement,
  session: Session,
  sortMode: SortMode,
  onSort: (mode: SortMode) => void,
): void {
  host.innerHTML = "";
  const report = session.lastWhatIf;
  const topo = session.topology;
  if (!report || !topo) return;

  const order = nodeOrder(topo.nodes);
  const table = document.createElement("table");
  table.className = "whatif-table";

  const head = document.createElement("tr");
  const nameTh = document.createElement("th");
  nameTh.textContent = "scenario";
  nameTh.className = "sort-name";
  nameTh.addEventListener("click", () => onSort("name"));
  head.appendChild(nameTh);
  const impactTh = document.createElement("th");
  impactTh.textContent = sortMode === "impact" ? "root \u0394 \u25bc" : "root \u0394";
  impactTh.className = "sort-impact";
  impactTh.addEventListener("click", () => onSort("impact"));
  head.appendChild(impactTh);
  for (const node of order) {
    const th = document.createElement("th");
    th.textContent = node;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const outcome of sortOutcomes(report.scenarios, sortMode)) {
    table.appendChild(buildRow(outcome, order));
  }
  host.appendChild(table);
}

function buildRow(outcome: ScenarioOutcomeDoc, order: string[]): HTMLElement {
  const row = document.createElement("tr");
  row.className = "scenario-row";
  row.dataset.scenario = outcome.scenario;

  const name = document.createElement("td");
  name.className = "scenario-name";
  name.textContent = outcome.scenario;
  row.appendChild(name);

  if (outcome.error !== undefined) {
    row.classList.add("failed");
    const err = document.createElement("td");
    err.className = "embedded-error";
    err.colSpan = order.length + 1;
    err.textContent = outcome.error;
    row.appendChild(err);
    return row;
  }

  const root = document.createElement("td");
  root.className = "root-delta";
  root.dataset.delta = String(outcome.root_delta ?? 0);
  root.textContent = signed(outcome.root_delta ?? 0);
  row.appendChild(root);

  for (const node of order) {
    const cell = document.createElement("td");
    cell.className = "delta";
    cell.dataset.nodeName = node;
    const value = outcome.deltas?.[node] ?? 0;
    cell.dataset.delta = String(value);
    cell.textContent = signed(value);
    row.appendChild(cell);
  }
  return row;
}

function signed(value: number): string {
  const text = value.toFixed(4);
  return value >= 0 ? `+${text}` : text;
}

function downloadComparison(session: Session): void {
  const report = session.lastWhatIf;
  const topo = session.topology;
  if (!report || !topo) return;
  const text = buildExportText(report, nodeOrder(topo.nodes));
  const blob = new Blob([text], { type: "text/csv" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "scenario_comparison.csv";
  a.click();
  URL.revokeObjectURL(a.href);
}
