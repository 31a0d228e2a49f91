import { beforeEach, describe, expect, it } from "vitest";

import {
  buildExportText,
  nodeOrder,
  renderWorkbench,
  sortOutcomes,
} from "../../src/scenarios.js";
import { Session } from "../../src/state.js";
import type { ScenarioOutcomeDoc, WhatIfResponse } from "../../src/types.js";
import { FakeApi, nodeResult, toyResult, toyTopology } from "./fixtures.js";

function outcome(
  name: string,
  rootDelta: number,
  deltas?: Record<string, number>,
): ScenarioOutcomeDoc {
  return {
    scenario: name,
    root_delta: rootDelta,
    deltas: deltas ?? { overall: rootDelta, quality: 0, adoption: 0 },
    result: toyResult(),
  };
}

const failed: ScenarioOutcomeDoc = { scenario: "broken", error: "unknown leaves: bogus" };

describe("sortOutcomes", () => {
  it("orders by absolute root delta, largest first, failures last", () => {
    const rows = sortOutcomes(
      [outcome("small", 0.2), failed, outcome("big_down", -2.7), outcome("up", 1.1)],
      "impact",
    );

    expect(rows.map((r) => r.scenario)).toEqual(["big_down", "up", "small", "broken"]);
  });

  it("breaks impact ties by name so the order is stable", () => {
    const rows = sortOutcomes([outcome("b", 0.5), outcome("a", -0.5)], "impact");

    expect(rows.map((r) => r.scenario)).toEqual(["a", "b"]);
  });

  it("name mode sorts alphabetically including failures", () => {
    const rows = sortOutcomes([outcome("zeta", 3), failed, outcome("alpha", 0)], "name");

    expect(rows.map((r) => r.scenario)).toEqual(["alpha", "broken", "zeta"]);
  });

  it("does not mutate the input array", () => {
    const input = [outcome("b", 1), outcome("a", 2)];
    sortOutcomes(input, "impact");

    expect(input.map((r) => r.scenario)).toEqual(["b", "a"]);
  });
});

describe("nodeOrder", () => {
  it("walks the topology depth first from the root", () => {
    expect(nodeOrder(toyTopology().nodes)).toEqual(["overall", "quality", "adoption"]);
  });
});

describe("buildExportText", () => {
  const report: WhatIfResponse = {
    baseline: toyResult(),
    scenarios: [
      outcome("drop_adoption", -2.667076, { overall: -2.667076, quality: 0, adoption: -2.0 }),
      { scenario: "broken", error: 'no input for leaf "x", stop' },
    ],
    framework_version: 1,
  };

  it("emits a header, a baseline row, and one row per scenario", () => {
    const text = buildExportText(report, ["overall", "quality", "adoption"]);
    const lines = text.split("\n");

    expect(lines[0]).toBe("scenario,error,root_delta,delta:overall,delta:quality,delta:adoption");
    expect(lines[1]).toBe("baseline,,,0.000000,0.000000,0.000000");
    expect(lines[2]).toBe("drop_adoption,,-2.667076,-2.667076,0.000000,-2.000000");
    expect(text.endsWith("\n")).toBe(true);
  });

  it("quotes embedded errors so commas survive", () => {
    const text = buildExportText(report, ["overall", "quality", "adoption"]);

    expect(text).toContain('broken,"no input for leaf ""x"", stop",');
  });
});

describe("workbench rendering", () => {
  let api: FakeApi;
  let session: Session;
  let host: HTMLElement;

  beforeEach(async () => {
    document.body.innerHTML = "<div id='workbench'></div>";
    host = document.getElementById("workbench")!;
    api = new FakeApi();
    session = new Session(api, 1);
    await session.start();
  });

  function rows(): HTMLElement[] {
    return [...host.querySelectorAll<HTMLElement>(".scenario-row")];
  }

  it("adds a draft from the name box", () => {
    renderWorkbench(host, session);

    const nameInput = host.querySelector<HTMLInputElement>(".draft-name")!;
    nameInput.value = "drop_adoption";
    host.querySelector<HTMLElement>(".add-draft")!.click();

    expect(session.drafts.map((d) => d.name)).toEqual(["drop_adoption"]);
    expect(host.querySelector<HTMLElement>('[data-draft="drop_adoption"]')).not.toBeNull();
  });

  it("the set button records a leaf override on the draft", () => {
    renderWorkbench(host, session);
    session.addDraft("drop");

    const draftCard = host.querySelector<HTMLElement>('[data-draft="drop"]')!;
    draftCard.querySelector<HTMLSelectElement>(".override-leaf")!.value = "adoption";
    draftCard.querySelector<HTMLInputElement>(".override-value")!.value = "4";
    draftCard.querySelector<HTMLElement>(".set-override")!.click();

    expect(session.drafts[0].overrides).toEqual({ adoption: 4 });
    expect(draftCard.querySelector(".override-summary")!.textContent).toBe("adoption=4");
  });

  it("a no-answer override stores null and says so in the summary", () => {
    renderWorkbench(host, session);
    session.addDraft("blank");

    const draftCard = host.querySelector<HTMLElement>('[data-draft="blank"]')!;
    draftCard.querySelector<HTMLSelectElement>(".override-leaf")!.value = "quality";
    draftCard.querySelector<HTMLInputElement>(".override-missing")!.checked = true;
    draftCard.querySelector<HTMLElement>(".set-override")!.click();

    expect(session.drafts[0].overrides).toEqual({ quality: null });
    expect(draftCard.querySelector(".override-summary")!.textContent).toBe("quality=no answer");
  });

  it("renders a zero row for a duplicate-of-baseline scenario", async () => {
    renderWorkbench(host, session);
    session.addDraft("same_as_baseline");
    api.whatIfResponse = {
      baseline: toyResult(),
      scenarios: [
        {
          scenario: "same_as_baseline",
          root_delta: 0,
          deltas: { overall: 0, quality: 0, adoption: 0 },
          result: toyResult(),
        },
      ],
      framework_version: 1,
    };

    await session.runWhatIf();

    const row = rows()[0];
    expect(row.dataset.scenario).toBe("same_as_baseline");
    const deltas = [...row.querySelectorAll<HTMLElement>(".delta, .root-delta")];
    expect(deltas.length).toBeGreaterThan(0);
    for (const cell of deltas) {
      expect(parseFloat(cell.dataset.delta!)).toBe(0);
      expect(cell.textContent).toBe("+0.0000");
    }
  });

  it("shows a failing scenario's error inline while others render deltas", async () => {
    renderWorkbench(host, session);
    session.addDraft("drop");
    session.addDraft("broken");
    api.whatIfResponse = {
      baseline: toyResult(),
      scenarios: [
        outcome("drop", -2.667076),
        { scenario: "broken", error: "scenario overrides unknown leaves: bogus" },
      ],
      framework_version: 1,
    };

    await session.runWhatIf();

    const byName = Object.fromEntries(rows().map((r) => [r.dataset.scenario, r]));
    expect(byName["broken"].classList.contains("failed")).toBe(true);
    expect(byName["broken"].querySelector(".embedded-error")!.textContent).toBe(
      "scenario overrides unknown leaves: bogus",
    );
    expect(byName["drop"].querySelector<HTMLElement>(".root-delta")!.textContent).toBe("-2.6671");
  });

  it("clicking the name header re-sorts rows alphabetically and back by impact", async () => {
    renderWorkbench(host, session);
    api.whatIfResponse = {
      baseline: toyResult(),
      scenarios: [outcome("alpha", 0.1), outcome("zeta", -3.0)],
      framework_version: 1,
    };
    await session.runWhatIf();

    expect(rows().map((r) => r.dataset.scenario)).toEqual(["zeta", "alpha"]);

    host.querySelector<HTMLElement>(".sort-name")!.click();
    expect(rows().map((r) => r.dataset.scenario)).toEqual(["alpha", "zeta"]);

    host.querySelector<HTMLElement>(".sort-impact")!.click();
    expect(rows().map((r) => r.dataset.scenario)).toEqual(["zeta", "alpha"]);
  });

  it("the export button downloads the comparison built from the last report", async () => {
    renderWorkbench(host, session);
    session.addDraft("drop");
    api.whatIfResponse = {
      baseline: toyResult(),
      scenarios: [outcome("drop", -2.667076)],
      framework_version: 1,
    };
    await session.runWhatIf();

    const captured: Blob[] = [];
    const realCreate = URL.createObjectURL;
    const realRevoke = URL.revokeObjectURL;
    URL.createObjectURL = (blob: Blob) => {
      captured.push(blob);
      return "blob:fake";
    };
    URL.revokeObjectURL = () => {};
    try {
      host.querySelector<HTMLElement>(".export-comparison")!.click();
    } finally {
      URL.createObjectURL = realCreate;
      URL.revokeObjectURL = realRevoke;
    }

    expect(captured).toHaveLength(1);
    const text = await captured[0].text();
    expect(text.split("\n")[0]).toBe(
      "scenario,error,root_delta,delta:overall,delta:quality,delta:adoption",
    );
    expect(text).toContain("drop,,-2.667076");
  });
});
