// Wire types for the /api/v1 JSON endpoints. These mirror the server's
// response models; the UI never computes sizes or weights itself.

export interface RoleView {
  id: string;
  name: string;
  size: number;
  action_label: string[];
  object_label: string[];
}

export interface ClusterNode {
  id: string;
  side: "action" | "object";
  label: string[];
  size: number;
}

export interface ClustersResponse {
  version: number;
  roles: RoleView[];
  actions: ClusterNode[];
  objects: ClusterNode[];
}

export interface GraphEdge {
  a: string;
  o: string;
  weight: number;
}

export interface GraphView {
  nodes: ClusterNode[];
  edges: GraphEdge[];
}

export interface MentionRow {
  mention_id: number;
  doc_id: string;
  sentence: number;
  subject: string;
  action: string[];
  object: string[];
}

export interface MentionsResponse {
  cluster: string;
  count: number;
  mentions: MentionRow[];
}

export type OpKind = "merge" | "remove" | "rename" | "pin";

export interface CurationOp {
  op: OpKind;
  a?: string;
  b?: string;
  role?: string;
  name?: string;
  op_id?: string;
  if_version?: number;
}

export interface CurationResponse {
  version: number;
  applied: boolean;
  roles: RoleView[];
}

export interface ExportResponse {
  path: string;
  roles: number;
  replay_equal: boolean;
}
