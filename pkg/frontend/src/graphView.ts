/**
 * Interactive temporal graph: nodes in year columns, sized by occurrence
 * count, colored by community, with the community captions written in a
 * line of text each below the drawing.
 */

import type { GraphDocument, GraphNode } from "./api.js";
import { communityColor } from "./colors.js";
import { layoutGraph } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphViewOptions {
  width?: number;
  height?: number;
  seed?: number;
  onNodeClick?: (node: GraphNode) => void;
  onEntityClick?: (name: string) => void;
}

function looksLikeGraphDocument(doc: unknown): doc is GraphDocument {
  return (
    typeof doc === "object" &&
    doc !== null &&
    Array.isArray((doc as GraphDocument).nodes) &&
    Array.isArray((doc as GraphDocument).edges) &&
    Array.isArray((doc as GraphDocument).captions)
  );
}

export class GraphView {
  private readonly width: number;
  private readonly height: number;
  private readonly seed: number;

  constructor(
    private readonly container: HTMLElement,
    private readonly options: GraphViewOptions = {},
  ) {
    this.width = options.width ?? 900;
    this.height = options.height ?? 480;
    this.seed = options.seed ?? 1;
  }

  render(doc: unknown): void {
    this.container.replaceChildren();
    if (!looksLikeGraphDocument(doc) || doc.nodes.length === 0) {
      const empty = this.container.ownerDocument.createElement("p");
      empty.className = "empty-state";
      empty.textContent = looksLikeGraphDocument(doc)
        ? "This book has no network to show."
        : "No graph document is available for this book.";
      this.container.appendChild(empty);
      return;
    }

    const positioned = layoutGraph(doc, {
      width: this.width,
      height: this.height,
      seed: this.seed,
    });
    const byId = new Map(positioned.map((node) => [node.id, node]));

    const svg = this.container.ownerDocument.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
    svg.setAttribute("class", "graph-canvas");

    for (const edge of doc.edges) {
      const a = byId.get(edge.source);
      const b = byId.get(edge.target);
      if (!a || !b) continue;
      const line = this.container.ownerDocument.createElementNS(SVG_NS, "line");
      line.setAttribute("class", "graph-edge");
      line.setAttribute("x1", a.x.toFixed(2));
      line.setAttribute("y1", a.y.toFixed(2));
      line.setAttribute("x2", b.x.toFixed(2));
      line.setAttribute("y2", b.y.toFixed(2));
      line.setAttribute("stroke", "#b9b9c6");
      line.setAttribute("stroke-width", Math.min(6, 0.8 + edge.weight).toFixed(2));
      line.dataset.source = edge.source;
      line.dataset.target = edge.target;
      svg.appendChild(line);
    }

    for (const node of positioned) {
      const group = this.container.ownerDocument.createElementNS(SVG_NS, "g");
      group.setAttribute("class", "graph-node");
      group.dataset.id = node.id;
      group.dataset.community = String(node.community);

      const circle = this.container.ownerDocument.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", node.x.toFixed(2));
      circle.setAttribute("cy", node.y.toFixed(2));
      circle.setAttribute("r", node.r.toFixed(2));
      circle.setAttribute("fill", communityColor(node.community));

      // native SVG hover tooltip: entity, years, community
      const title = this.container.ownerDocument.createElementNS(SVG_NS, "title");
      title.textContent =
        `${node.id} (${node.label.toLowerCase()}) — ${node.year} — community ${node.community}`;
      circle.appendChild(title);

      const text = this.container.ownerDocument.createElementNS(SVG_NS, "text");
      text.setAttribute("x", node.x.toFixed(2));
      text.setAttribute("y", (node.y - node.r - 4).toFixed(2));
      text.setAttribute("text-anchor", "middle");
      text.setAttribute("class", "graph-label");
      text.textContent = node.id;

      group.appendChild(circle);
      group.appendChild(text);
      group.addEventListener("click", () => this.options.onNodeClick?.(node));
      svg.appendChild(group);
    }

    this.container.appendChild(svg);

    const captions = this.container.ownerDocument.createElement("div");
    captions.className = "graph-captions";
    for (const caption of doc.captions) {
      const line = this.container.ownerDocument.createElement("p");
      line.className = "caption-line";
      line.dataset.community = String(caption.community);
      const swatch = this.container.ownerDocument.createElement("span");
      swatch.className = "caption-swatch";
      swatch.style.backgroundColor = communityColor(caption.community);
      line.appendChild(swatch);
      for (const [i, entity] of caption.entities.entries()) {
        if (i > 0) line.appendChild(this.container.ownerDocument.createTextNode(", "));
        const link = this.container.ownerDocument.createElement("a");
        link.className = "caption-entity";
        link.textContent = entity;
        link.addEventListener("click", () => this.options.onEntityClick?.(entity));
        line.appendChild(link);
      }
      line.appendChild(
        this.container.ownerDocument.createTextNode(
          ` — ${caption.years[0]}–${caption.years[1]}`,
        ),
      );
      captions.appendChild(line);
    }
    this.container.appendChild(captions);
  }
}
