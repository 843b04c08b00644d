import type { ClusterNode, GraphEdge, GraphView, MentionRow } from "./types.js";

export const SAMPLE_LIMIT = 10;

export interface ClusterDetail extends ClusterNode {
  mentions: MentionRow[];
  edges: GraphEdge[];
}

export function incidentEdges(graph: GraphView, id: string): GraphEdge[] {
  return graph.edges.filter((e) => e.a === id || e.o === id);
}

/** Detail panel payload: the node, its edges, and at most ten sample mentions. */
export function clusterDetail(
  node: ClusterNode,
  graph: GraphView,
  mentions: MentionRow[],
): ClusterDetail {
  return {
    ...node,
    mentions: mentions.slice(0, SAMPLE_LIMIT),
    edges: incidentEdges(graph, node.id),
  };
}

export function labelText(label: string[]): string {
  return label.join(" ");
}

export function mentionText(m: MentionRow): string {
  const action = m.action.join(" ") || "(none)";
  const object = m.object.join(" ") || "(none)";
  return `${m.subject}: ${action} / ${object}`;
}
