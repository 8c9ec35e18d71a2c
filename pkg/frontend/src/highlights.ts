/**
 * Turn API highlight spans into renderable segments.
 *
 * Spans are byte offsets into the UTF-8 encoding of the snippet text, so
 * slicing happens at the byte level and the segments are re-decoded. The
 * UI performs no matching of its own: whatever bytes the API marked are
 * exactly the bytes that get highlighted.
 */

import type { SnippetPayload } from "./api.js";

export interface Segment {
  text: string;
  highlighted: boolean;
}

const encoder = new TextEncoder();
const decoder = new TextDecoder();

export function spanSegments(snippet: SnippetPayload): Segment[] {
  const bytes = encoder.encode(snippet.text);
  const spans = [...snippet.highlights]
    .map(([start, end]): [number, number] => [
      Math.max(0, Math.min(start, bytes.length)),
      Math.max(0, Math.min(end, bytes.length)),
    ])
    .filter(([start, end]) => start < end)
    .sort((a, b) => a[0] - b[0]);

  const segments: Segment[] = [];
  let cursor = 0;
  for (const [start, end] of spans) {
    if (start < cursor) continue; // overlapping spans: first one wins
    if (start > cursor) {
      segments.push({ text: decoder.decode(bytes.subarray(cursor, start)), highlighted: false });
    }
    segments.push({ text: decoder.decode(bytes.subarray(start, end)), highlighted: true });
    cursor = end;
  }
  if (cursor < bytes.length) {
    segments.push({ text: decoder.decode(bytes.subarray(cursor)), highlighted: false });
  }
  return segments;
}

/** Render segments into a container, wrapping highlights in <mark>. */
export function renderSnippet(
  snippet: SnippetPayload,
  into: HTMLElement,
  onMarkClick?: (text: string) => void,
): void {
  for (const segment of spanSegments(snippet)) {
    if (segment.highlighted) {
      const mark = into.ownerDocument.createElement("mark");
      mark.textContent = segment.text;
      if (onMarkClick) {
        mark.classList.add("pivot");
        mark.addEventListener("click", () => onMarkClick(segment.text));
      }
      into.appendChild(mark);
    } else {
      into.appendChild(into.ownerDocument.createTextNode(segment.text));
    }
  }
}
