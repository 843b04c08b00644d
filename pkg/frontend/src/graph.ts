import type { ClusterNode, GraphEdge, GraphView } from "./types.js";

export interface PositionedNode extends ClusterNode {
  x: number;
  y: number;
  r: number;
}

export interface PositionedEdge extends GraphEdge {
  width: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface GraphLayout {
  nodes: PositionedNode[];
  edges: PositionedEdge[];
  width: number;
  height: number;
}

export interface LayoutOptions {
  width?: number;
  rowGap?: number;
  margin?: number;
  // edges below this weight are collapsed out of the drawing
  minWeight?: number;
}

export const MAX_EDGE_PX = 12;
export const MAX_NODE_PX = 26;

/** Stroke width proportional to the edge's shared-mention count. */
export function edgeWidth(weight: number, maxWeight: number, maxPx = MAX_EDGE_PX): number {
  if (maxWeight <= 0) return 1;
  return Math.max(1, (weight / maxWeight) * maxPx);
}

/** Radius grows with the square root of cluster size so areas stay comparable. */
export function nodeRadius(size: number, maxSize: number, maxPx = MAX_NODE_PX): number {
  if (maxSize <= 0) return 6;
  return Math.max(6, Math.sqrt(size / maxSize) * maxPx);
}

export function degree(graph: GraphView, nodeId: string): number {
  let n = 0;
  for (const e of graph.edges) {
    if (e.a === nodeId || e.o === nodeId) n += 1;
  }
  return n;
}

/**
 * Two-column bipartite layout: action clusters on the left, object clusters
 * on the right, each column ordered by size so hubs sit near the top.
 */
export function layoutGraph(graph: GraphView, opts: LayoutOptions = {}): GraphLayout {
  const width = opts.width ?? 900;
  const rowGap = opts.rowGap ?? 64;
  const margin = opts.margin ?? 60;
  const minWeight = opts.minWeight ?? 0;

  const bySize = (p: ClusterNode, q: ClusterNode) =>
    q.size - p.size || (p.id < q.id ? -1 : 1);
  const actions = graph.nodes.filter((n) => n.side === "action").sort(bySize);
  const objects = graph.nodes.filter((n) => n.side === "object").sort(bySize);

  const maxSize = Math.max(1, ...graph.nodes.map((n) => n.size));
  const place = (column: ClusterNode[], x: number): PositionedNode[] =>
    column.map((node, i) => ({
      ...node,
      x,
      y: margin + i * rowGap,
      r: nodeRadius(node.size, maxSize),
    }));

  const nodes = [...place(actions, margin), ...place(objects, width - margin)];
  const at = new Map(nodes.map((n) => [n.id, n]));

  const kept = graph.edges.filter((e) => e.weight >= minWeight);
  const maxWeight = Math.max(0, ...kept.map((e) => e.weight));
  const edges: PositionedEdge[] = [];
  for (const e of kept) {
    const a = at.get(e.a);
    const o = at.get(e.o);
    if (!a || !o) continue;
    edges.push({
      ...e,
      width: edgeWidth(e.weight, maxWeight),
      x1: a.x,
      y1: a.y,
      x2: o.x,
      y2: o.y,
    });
  }

  const rows = Math.max(actions.length, objects.length, 1);
  return { nodes, edges, width, height: margin * 2 + (rows - 1) * rowGap };
}
