import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import type { BookInfo } from "../src/api.js";
import { bootstrap } from "../src/app.js";
import { fixture, flushTasks, stubFetch } from "./helpers.js";

let root: HTMLElement;

beforeEach(() => {
  root = document.createElement("div");
  document.body.replaceChildren(root);
});

afterEach(() => vi.unstubAllGlobals());

function stubPortal() {
  return stubFetch((url) => {
    if (url.includes("/api/books")) return fixture("books.json");
    if (url.includes("/api/graph")) return fixture("graph-experiments.json");
    if (url.includes("/api/entity")) return fixture("entity-gokhale.json");
    if (url.includes("/api/search")) return fixture("search-press-letters.json");
    return undefined;
  });
}

describe("bootstrap", () => {
  it("fills the book switcher from /api/books, never from hardcoded ids", async () => {
    const stub = stubPortal();
    await bootstrap(root, new ApiClient());
    const { books } = fixture<{ books: BookInfo[] }>("books.json");
    const options = [...root.querySelectorAll(".book-switcher option")];
    expect(options.map((o) => (o as HTMLOptionElement).value)).toEqual(
      books.map((b) => b.id),
    );
    expect(stub.calls.some((u) => u.includes("/api/books"))).toBe(true);
  });

  it("renders the first book's graph on startup", async () => {
    stubPortal();
    await bootstrap(root, new ApiClient());
    expect(root.querySelectorAll("g.graph-node")).toHaveLength(4);
    expect(root.querySelectorAll(".caption-line").length).toBeGreaterThan(0);
  });

  it("wires node clicks to the entity panel", async () => {
    const stub = stubPortal();
    await bootstrap(root, new ApiClient());
    root
      .querySelector('g[data-id="gokhale"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flushTasks();
    expect(stub.calls.filter((u) => u.includes("/api/entity"))).toHaveLength(1);
    expect(root.querySelector(".entity-title")!.textContent).toBe("gokhale");
  });

  it("switching books refetches the graph", async () => {
    const stub = stubPortal();
    const app = await bootstrap(root, new ApiClient());
    await app.selectBook("struggle");
    const graphCalls = stub.calls.filter((u) => u.includes("/api/graph"));
    expect(graphCalls.some((u) => u.includes("book=struggle"))).toBe(true);
  });

  it("falls back to the empty state when the graph document is missing", async () => {
    stubFetch((url) => (url.includes("/api/books") ? fixture("books.json") : undefined));
    await bootstrap(root, new ApiClient());
    expect(root.querySelector(".empty-state")).not.toBeNull();
  });
});
