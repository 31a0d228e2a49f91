import type { Session } from "./state.js";
import type { InternalTopo, TopoNode } from "./types.js";

function internalNodes(root: TopoNode): InternalTopo[] {
  if (root.leaf) return [];
  const nodes: InternalTopo[] = [root];
  for (const child of root.children) nodes.push(...internalNodes(child));
  return nodes;
}

/**
 * Per-node child weight editor. Values are validated here before any
 * request goes out: a zero or negative weight never reaches the service.
 */
export function renderWeightEditor(container: HTMLElement, session: Session): void {
  const update = () => {
    container.innerHTML = "";
    container.className = "weight-editor";
    const topo = session.topology;
    if (!topo) return;

    if (session.weightError) {
      const err = document.createElement("div");
      err.className = "weight-error";
      err.textContent = session.weightError;
      container.appendChild(err);
    }

    for (const node of internalNodes(topo.nodes)) {
      container.appendChild(buildNodeEditor(node, session));
    }
  };
  session.subscribe(update);
  update();
}

function buildNodeEditor(node: InternalTopo, session: Session): HTMLElement {
  const row = document.createElement("div");
  row.className = "weight-row";
  row.dataset.node = node.name;

  const title = document.createElement("span");
  title.className = "weight-node-name";
  title.textContent = node.name;
  row.appendChild(title);

  const inputs: HTMLInputElement[] = [];
  node.children.forEach((child, i) => {
    const label = document.createElement("label");
    label.className = "weight-label";
    label.appendChild(document.createTextNode(`${child.name} `));
    const input = document.createElement("input");
    input.type = "number";
    input.className = "weight-input";
    input.step = "0.1";
    input.value = String(node.weights[i]);
    label.appendChild(input);
    row.appendChild(label);
    inputs.push(input);
  });

  const apply = document.createElement("button");
  apply.className = "apply-weights";
  apply.textContent = "apply";
  apply.addEventListener("click", () => {
    const values = inputs.map((el) => parseFloat(el.value));
    void session.applyWeights(node.name, values);
  });
  row.appendChild(apply);

  return row;
}
