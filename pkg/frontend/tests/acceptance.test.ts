/**
 * UI contract, run against a stubbed API serving payloads captured from
 * the engine's bundled mini-corpus:
 *
 *  - the graph view renders all nodes with community-distinct colors and
 *    caption lines;
 *  - clicking a node issues exactly one entity request and renders its
 *    groups in year order;
 *  - the search page wraps exactly the API-provided highlight spans.
 */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import type { EntityPayload, GraphDocument, SearchPayload } from "../src/api.js";
import { EntityPanel } from "../src/entityPanel.js";
import { GraphView } from "../src/graphView.js";
import { SearchPage } from "../src/searchPage.js";
import { byteSlice, fixture, flushTasks, stubFetch } from "./helpers.js";

let root: HTMLElement;

beforeEach(() => {
  root = document.createElement("div");
  document.body.replaceChildren(root);
});

afterEach(() => vi.unstubAllGlobals());

describe("UI contract over mini-corpus fixtures", () => {
  it("graph view: all nodes rendered, colors distinct per community, captions shown", () => {
    for (const name of ["graph-experiments.json", "graph-two-communities.json"]) {
      const doc = fixture<GraphDocument>(name);
      root.replaceChildren();
      new GraphView(root).render(doc);

      const groups = [...root.querySelectorAll("g.graph-node")] as SVGGElement[];
      expect(groups).toHaveLength(doc.nodes.length);

      const colorOf = new Map<string, string>();
      for (const group of groups) {
        const fill = group.querySelector("circle")!.getAttribute("fill")!;
        const community = group.dataset.community!;
        if (colorOf.has(community)) {
          expect(colorOf.get(community)).toBe(fill); // one color per community
        }
        colorOf.set(community, fill);
      }
      expect(new Set(colorOf.values()).size).toBe(colorOf.size); // distinct across communities

      const lines = [...root.querySelectorAll(".caption-line")];
      expect(lines.map((l) => l.textContent)).toEqual(doc.captions.map((c) => c.text));
    }
  });

  it("node click: exactly one entity request, groups rendered in year order", async () => {
    const stub = stubFetch((url) =>
      url.includes("/api/entity") ? fixture<EntityPayload>("entity-gokhale.json") : undefined,
    );
    const panelHost = document.createElement("aside");
    root.appendChild(panelHost);
    const panel = new EntityPanel(panelHost, new ApiClient());
    const graphHost = document.createElement("section");
    root.appendChild(graphHost);
    new GraphView(graphHost, {
      onNodeClick: (node) => void panel.show("experiments", node.id),
    }).render(fixture<GraphDocument>("graph-experiments.json"));

    graphHost
      .querySelector('g[data-id="gokhale"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flushTasks();

    expect(stub.calls.filter((u) => u.includes("/api/entity"))).toHaveLength(1);
    const years = [...panelHost.querySelectorAll(".year-group")].map((g) =>
      Number((g as HTMLElement).dataset.year),
    );
    expect(years.length).toBeGreaterThan(1);
    expect(years).toEqual([...years].sort((a, b) => a - b));
  });

  it("search page: every <mark> is exactly an API-provided span", async () => {
    stubFetch((url) =>
      url.includes("/api/search") ? fixture<SearchPayload>("search-press-letters.json") : undefined,
    );
    const page = new SearchPage(root, new ApiClient());
    await page.run("press letters", 1);

    const payload = fixture<SearchPayload>("search-press-letters.json");
    const rendered = [...root.querySelectorAll(".search-hit")];
    expect(rendered).toHaveLength(payload.hits.length);
    rendered.forEach((hitElement, i) => {
      const excerpts = [...hitElement.querySelectorAll(".excerpt")];
      excerpts.forEach((excerpt, j) => {
        const snippet = payload.hits[i]!.snippets[j]!;
        const marks = [...excerpt.querySelectorAll("mark")];
        expect(marks.map((m) => m.textContent)).toEqual(
          snippet.highlights.map(([s, e]) => byteSlice(snippet.text, s, e)),
        );
        expect(excerpt.textContent).toBe(snippet.text); // nothing added or lost
      });
    });
  });
});
