/**
 * Application shell: book switcher (always fed from /api/books), the
 * temporal graph explorer with its entity panel, and the search page.
 */

import { ApiClient, GraphNode } from "./api.js";
import { EntityPanel } from "./entityPanel.js";
import { GraphView } from "./graphView.js";
import { SearchPage } from "./searchPage.js";

export interface App {
  selectBook(bookId: string): Promise<void>;
}

export async function bootstrap(root: HTMLElement, api: ApiClient): Promise<App> {
  const doc = root.ownerDocument;
  root.replaceChildren();

  const header = doc.createElement("header");
  const title = doc.createElement("h1");
  title.textContent = "Corpus explorer";
  const bookSelect = doc.createElement("select");
  bookSelect.className = "book-switcher";
  header.append(title, bookSelect);

  const graphContainer = doc.createElement("section");
  graphContainer.className = "graph-container";
  const panelContainer = doc.createElement("aside");
  panelContainer.className = "entity-panel";
  const searchContainer = doc.createElement("section");
  searchContainer.className = "search-page";

  root.append(header, graphContainer, panelContainer, searchContainer);

  const { books } = await api.books();
  for (const book of books) {
    const option = doc.createElement("option");
    option.value = book.id;
    option.textContent = book.title;
    bookSelect.appendChild(option);
  }

  let activeBook = books[0]?.id ?? "";

  const panel = new EntityPanel(panelContainer, api, {
    onPivot: (entity) => void panel.show(activeBook, entity),
  });
  const view = new GraphView(graphContainer, {
    onNodeClick: (node: GraphNode) => void panel.show(activeBook, node.id),
    onEntityClick: (name) => void panel.show(activeBook, name),
  });
  const searchPage = new SearchPage(searchContainer, api);

  async function selectBook(bookId: string): Promise<void> {
    activeBook = bookId;
    searchPage.setBook(bookId);
    try {
      view.render(await api.graph(bookId));
    } catch {
      view.render(null);
    }
  }

  bookSelect.addEventListener("change", () => void selectBook(bookSelect.value));
  if (activeBook) await selectBook(activeBook);

  return { selectBook };
}
