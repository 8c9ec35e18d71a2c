/**
 * Typed client for the portal HTTP API. Every payload shape here mirrors
 * the server's JSON exactly; the UI never derives data the API already
 * provides.
 */

export interface BookInfo {
  id: string;
  title: string;
  volumes: string[];
}

export interface GraphNode {
  id: string;
  label: "PERSON" | "PLACE";
  total: number;
  year: number;
  community: number;
}

export interface GraphEdge {
  source: string;
  target: string;
  weight: number;
}

export interface GraphCaption {
  community: number;
  entities: string[];
  years: [number, number];
  text: string;
}

export interface GraphDocument {
  meta: { book_ids: string[]; window: number; seed: number; modularity: number };
  nodes: GraphNode[];
  edges: GraphEdge[];
  captions: GraphCaption[];
}

/** Byte offsets into the UTF-8 encoding of `text`. */
export interface SnippetPayload {
  text: string;
  highlights: [number, number][];
}

export interface ChapterHits {
  chapter_id: string;
  volume_id: string;
  ordinal: number;
  title: string;
  year: number;
  count: number;
  snippets: SnippetPayload[];
}

export interface EntityPayload {
  entity: string;
  book: string;
  page: number;
  page_size: number;
  total_chapters: number;
  groups: { year: number; chapters: ChapterHits[] }[];
}

export interface SearchHitPayload {
  chapter_id: string;
  volume_id: string;
  volume_title: string;
  ordinal: number;
  title: string;
  year: number;
  score: number;
  snippets: SnippetPayload[];
}

export interface SearchPayload {
  query: string;
  book: string | null;
  page: number;
  page_size: number;
  total: number;
  hits: SearchHitPayload[];
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url);
  } catch (cause) {
    throw new ApiError("network", String(cause), 0);
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const error = (body as { error?: { code?: string; message?: string } } | null)?.error;
    throw new ApiError(
      error?.code ?? "network",
      error?.message ?? `request failed with status ${response.status}`,
      response.status,
    );
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  books(): Promise<{ books: BookInfo[] }> {
    return getJson(`${this.base}/api/books`);
  }

  graph(bookId: string): Promise<GraphDocument> {
    return getJson(`${this.base}/api/graph?book=${encodeURIComponent(bookId)}`);
  }

  entity(bookId: string, name: string, page = 1): Promise<EntityPayload> {
    const params = new URLSearchParams({ book: bookId, name, page: String(page) });
    return getJson(`${this.base}/api/entity?${params}`);
  }

  search(query: string, bookId: string | null = null, page = 1): Promise<SearchPayload> {
    const params = new URLSearchParams({ q: query, page: String(page) });
    if (bookId !== null) params.set("book", bookId);
    return getJson(`${this.base}/api/search?${params}`);
  }
}
