/**
 * Year-column layout: x is fixed by the node's dominant year, y relaxes
 * inside each column under edge attraction and in-column repulsion. The
 * relaxation is seeded and iteration-bounded, so the same document and
 * seed always produce the same coordinates.
 */

import type { GraphDocument, GraphNode } from "./api.js";

export interface PositionedNode extends GraphNode {
  x: number;
  y: number;
  r: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  seed: number;
  margin?: number;
  iterations?: number;
}

/** Deterministic 32-bit PRNG (mulberry32). */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function nodeRadius(total: number, maxTotal: number): number {
  // strictly monotone in the occurrence count
  const base = 6;
  return base + 14 * Math.sqrt(total / Math.max(1, maxTotal));
}

export function layoutGraph(doc: GraphDocument, options: LayoutOptions): PositionedNode[] {
  const { width, height, seed } = options;
  const margin = options.margin ?? 40;
  const iterations = options.iterations ?? 60;

  const years = [...new Set(doc.nodes.map((n) => n.year))].sort((a, b) => a - b);
  const span = Math.max(1, years[years.length - 1]! - years[0]!);
  const xOf = new Map<number, number>();
  for (const year of years) {
    const t = years.length === 1 ? 0.5 : (year - years[0]!) / span;
    xOf.set(year, margin + t * (width - 2 * margin));
  }

  const rng = mulberry32(seed);
  const maxTotal = Math.max(1, ...doc.nodes.map((n) => n.total));
  const nodes: PositionedNode[] = [...doc.nodes]
    .sort((a, b) => a.id.localeCompare(b.id))
    .map((node) => ({
      ...node,
      x: xOf.get(node.year)!,
      y: margin + rng() * (height - 2 * margin),
      r: nodeRadius(node.total, maxTotal),
    }));

  const index = new Map(nodes.map((node) => [node.id, node]));
  const columns = new Map<number, PositionedNode[]>();
  for (const node of nodes) {
    const column = columns.get(node.year) ?? [];
    column.push(node);
    columns.set(node.year, column);
  }

  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    // pull connected nodes toward each other vertically
    for (const edge of doc.edges) {
      const a = index.get(edge.source);
      const b = index.get(edge.target);
      if (!a || !b) continue;
      const pull = 0.02 * cooling * Math.min(4, edge.weight);
      const delta = (b.y - a.y) * pull;
      a.y += delta;
      b.y -= delta;
    }
    // push apart nodes sharing a column
    for (const column of columns.values()) {
      for (let i = 0; i < column.length; i++) {
        for (let j = i + 1; j < column.length; j++) {
          const a = column[i]!;
          const b = column[j]!;
          const gap = a.r + b.r + 6;
          const distance = a.y - b.y;
          const overlap = gap - Math.abs(distance);
          if (overlap > 0) {
            const push = (Math.sign(distance) || 1) * overlap * 0.5 * cooling;
            a.y += push;
            b.y -= push;
          }
        }
      }
    }
    for (const node of nodes) {
      node.y = Math.min(height - margin, Math.max(margin, node.y));
    }
  }
  return nodes;
}
