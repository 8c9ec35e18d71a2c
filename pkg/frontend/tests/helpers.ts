import { readFileSync } from "node:fs";
import { join } from "node:path";
import { vi } from "vitest";

export function fixture<T>(name: string): T {
  return JSON.parse(
    readFileSync(join(process.cwd(), "tests", "fixtures", name), "utf-8"),
  ) as T;
}

export interface FetchStub {
  calls: string[];
  restore: () => void;
}

/** Stub global fetch; `routes` maps a URL to its JSON payload. */
export function stubFetch(routes: (url: string) => unknown): FetchStub {
  const calls: string[] = [];
  const fetchFn = vi.fn(async (input: RequestInfo | URL) => {
    const url = String(input);
    calls.push(url);
    const payload = routes(url);
    if (payload === undefined) {
      return new Response(
        JSON.stringify({ error: { code: "not_found", message: `no stub for ${url}` } }),
        { status: 404, headers: { "Content-Type": "application/json" } },
      );
    }
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  });
  vi.stubGlobal("fetch", fetchFn);
  return { calls, restore: () => vi.unstubAllGlobals() };
}

/** Byte-level slice of a string, mirroring how the API defines spans. */
export function byteSlice(text: string, start: number, end: number): string {
  return new TextDecoder().decode(new TextEncoder().encode(text).subarray(start, end));
}

export function flushTasks(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
