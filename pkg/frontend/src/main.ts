import { ApiClient } from "./api.js";
import { Session } from "./state.js";
import { renderFrameworkTree } from "./tree.js";
import { renderWorkbench } from "./scenarios.js";
import { renderWeightEditor } from "./weights.js";

/** Header line plus the outage banner; last results stay on screen below. */
export function renderStatus(container: HTMLElement, session: Session): void {
  const update = () => {
    container.innerHTML = "";
    const topo = session.topology;

    const title = document.createElement("span");
    title.className = "framework-title";
    title.textContent = topo ? `${topo.name} (framework v${topo.version})` : "loading";
    container.appendChild(title);

    if (session.lastResultVersion !== null && topo && session.lastResultVersion < topo.version) {
      const stale = document.createElement("span");
      stale.className = "stale-note";
      stale.textContent = `results from v${session.lastResultVersion}`;
      container.appendChild(stale);
    }

    if (session.serviceDown) {
      const banner = document.createElement("div");
      banner.className = "banner service-down";
      banner.textContent = "service unreachable; showing last known results";
      container.appendChild(banner);
    }
  };
  session.subscribe(update);
  update();
}

export async function boot(root: Document, baseUrl: string): Promise<Session> {
  const session = new Session(new ApiClient(baseUrl));
  await session.start();
  renderStatus(root.getElementById("status")!, session);
  renderFrameworkTree(root.getElementById("tree")!, session);
  renderWorkbench(root.getElementById("workbench")!, session);
  renderWeightEditor(root.getElementById("weights")!, session);
  return session;
}

declare global {
  interface Window {
    BELIEFRULES_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("tree")) {
  const base = window.BELIEFRULES_URL ?? `${location.protocol}//${location.host}`;
  void boot(document, base);
}
