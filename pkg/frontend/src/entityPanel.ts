/**
 * Entity results panel: chapters grouped by year for one clicked entity,
 * with API-highlighted excerpts. Rapid clicks are resolved latest-wins:
 * a response belonging to a superseded request is dropped, so exactly
 * one result ever lands in the panel.
 */

import { ApiClient, ApiError, EntityPayload } from "./api.js";
import { renderSnippet } from "./highlights.js";

export interface EntityPanelOptions {
  onPivot?: (entity: string) => void;
}

export class EntityPanel {
  private requestToken = 0;

  constructor(
    private readonly container: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: EntityPanelOptions = {},
  ) {}

  async show(bookId: string, entity: string, page = 1): Promise<void> {
    const token = ++this.requestToken;
    this.clearErrorBanner();
    let payload: EntityPayload;
    try {
      payload = await this.api.entity(bookId, entity, page);
    } catch (error) {
      if (token !== this.requestToken) return; // superseded while in flight
      this.showErrorBanner(error, () => void this.show(bookId, entity, page));
      return;
    }
    if (token !== this.requestToken) return; // a newer click won
    this.renderPayload(payload);
  }

  private clearErrorBanner(): void {
    this.container.querySelector(".error-banner")?.remove();
  }

  private showErrorBanner(error: unknown, retry: () => void): void {
    // keep whatever the panel was showing; the banner sits on top
    const doc = this.container.ownerDocument;
    const banner = doc.createElement("div");
    banner.className = "error-banner";
    const message = doc.createElement("span");
    message.textContent =
      error instanceof ApiError && error.code !== "network"
        ? `Query failed: ${error.message}`
        : "The portal could not be reached.";
    banner.appendChild(message);
    const button = doc.createElement("button");
    button.textContent = "Retry";
    button.addEventListener("click", () => {
      banner.remove();
      retry();
    });
    banner.appendChild(button);
    this.container.prepend(banner);
  }

  private renderPayload(payload: EntityPayload): void {
    const doc = this.container.ownerDocument;
    this.container.replaceChildren();

    const heading = doc.createElement("h2");
    heading.className = "entity-title";
    heading.textContent = payload.entity;
    this.container.appendChild(heading);

    if (payload.total_chapters === 0) {
      const none = doc.createElement("p");
      none.className = "no-occurrences";
      none.textContent = `No occurrences of “${payload.entity}” in this book.`;
      this.container.appendChild(none);
      return;
    }

    const summary = doc.createElement("p");
    summary.className = "entity-summary";
    summary.textContent = `${payload.total_chapters} chapters`;
    this.container.appendChild(summary);

    for (const group of payload.groups) {
      const section = doc.createElement("section");
      section.className = "year-group";
      section.dataset.year = String(group.year);
      const year = doc.createElement("h3");
      year.textContent = String(group.year);
      section.appendChild(year);

      for (const chapter of group.chapters) {
        const item = doc.createElement("article");
        item.className = "chapter-hits";
        item.dataset.chapterId = chapter.chapter_id;
        const title = doc.createElement("h4");
        title.textContent = `${chapter.title || chapter.chapter_id} (×${chapter.count})`;
        item.appendChild(title);
        for (const snippet of chapter.snippets) {
          const excerpt = doc.createElement("p");
          excerpt.className = "excerpt";
          renderSnippet(snippet, excerpt, this.options.onPivot);
          item.appendChild(excerpt);
        }
        section.appendChild(item);
      }
      this.container.appendChild(section);
    }
  }
}
