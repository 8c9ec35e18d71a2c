/**
 * Full-text search page: query box, ranked results with API-provided
 * highlight spans wrapped in <mark>, and page controls that round-trip
 * the page number to the API.
 */

import { ApiClient, SearchPayload } from "./api.js";
import { renderSnippet } from "./highlights.js";

export class SearchPage {
  private form: HTMLFormElement;
  private input: HTMLInputElement;
  private validation: HTMLElement;
  private results: HTMLElement;
  private pager: HTMLElement;
  private lastQuery = "";
  private page = 1;
  private bookId: string | null = null;

  constructor(
    container: HTMLElement,
    private readonly api: ApiClient,
  ) {
    const doc = container.ownerDocument;
    this.form = doc.createElement("form");
    this.form.className = "search-form";
    this.input = doc.createElement("input");
    this.input.type = "search";
    this.input.name = "q";
    this.input.placeholder = "Search the corpus";
    const submit = doc.createElement("button");
    submit.type = "submit";
    submit.textContent = "Search";
    this.form.append(this.input, submit);

    this.validation = doc.createElement("p");
    this.validation.className = "validation";
    this.validation.hidden = true;

    this.results = doc.createElement("div");
    this.results.className = "search-results";
    this.pager = doc.createElement("div");
    this.pager.className = "pager";

    container.append(this.form, this.validation, this.results, this.pager);

    this.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.run(this.input.value, 1);
    });
  }

  setBook(bookId: string | null): void {
    this.bookId = bookId;
  }

  async run(query: string, page: number): Promise<void> {
    if (query.trim() === "") {
      // inline validation; no request leaves the page
      this.validation.textContent = "Type something to search for.";
      this.validation.hidden = false;
      return;
    }
    this.validation.hidden = true;
    this.lastQuery = query;
    this.page = page;
    const payload = await this.api.search(query, this.bookId, page);
    this.render(payload);
  }

  private render(payload: SearchPayload): void {
    const doc = this.results.ownerDocument;
    this.results.replaceChildren();
    this.pager.replaceChildren();

    if (payload.total === 0) {
      const none = doc.createElement("p");
      none.className = "no-results";
      none.textContent = `No results for “${payload.query}”.`;
      this.results.appendChild(none);
      return;
    }

    const summary = doc.createElement("p");
    summary.className = "result-count";
    summary.textContent = `${payload.total} chapters`;
    this.results.appendChild(summary);

    for (const hit of payload.hits) {
      const item = doc.createElement("article");
      item.className = "search-hit";
      item.dataset.chapterId = hit.chapter_id;
      const title = doc.createElement("h4");
      title.textContent = `${hit.volume_title} — ${hit.title || hit.chapter_id} [${hit.year}]`;
      item.appendChild(title);
      for (const snippet of hit.snippets) {
        const excerpt = doc.createElement("p");
        excerpt.className = "excerpt";
        renderSnippet(snippet, excerpt);
        item.appendChild(excerpt);
      }
      this.results.appendChild(item);
    }

    const lastPage = Math.max(1, Math.ceil(payload.total / payload.page_size));
    const previous = doc.createElement("button");
    previous.textContent = "Previous";
    previous.className = "page-previous";
    previous.disabled = payload.page <= 1;
    previous.addEventListener("click", () => void this.run(this.lastQuery, this.page - 1));
    const status = doc.createElement("span");
    status.textContent = `page ${payload.page} of ${lastPage}`;
    const next = doc.createElement("button");
    next.textContent = "Next";
    next.className = "page-next";
    next.disabled = payload.page >= lastPage;
    next.addEventListener("click", () => void this.run(this.lastQuery, this.page + 1));
    this.pager.append(previous, status, next);
  }
}
