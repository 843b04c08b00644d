import { ApiClient, ConflictError } from "./api.js";
import type {
  ClusterNode,
  CurationOp,
  ExportResponse,
  RoleView,
} from "./types.js";

export interface LogEntry {
  op: CurationOp;
  // rename is the only op whose inverse exists in the vocabulary;
  // merge/remove/pin entries record null and stay permanent
  inverse: CurationOp | null;
  version: number;
}

function randomOpId(): string {
  if (typeof crypto !== "undefined" && crypto.randomUUID) {
    return crypto.randomUUID();
  }
  return `op-${Date.now()}-${Math.floor(Math.random() * 1e9)}`;
}

/**
 * All client-side curation state. Mutations go through the server and the
 * view is re-fetched afterwards, so this store never holds a value the
 * server did not confirm.
 */
export class CurationStore {
  version = 0;
  roles: RoleView[] = [];
  actions: ClusterNode[] = [];
  objects: ClusterNode[] = [];
  log: LogEntry[] = [];
  conflict = false;

  constructor(
    private api: ApiClient,
    private makeOpId: () => string = randomOpId,
  ) {}

  async refresh(): Promise<void> {
    const state = await this.api.getClusters();
    this.version = state.version;
    this.roles = state.roles;
    this.actions = state.actions;
    this.objects = state.objects;
    this.conflict = false;
  }

  role(id: string): RoleView | undefined {
    return this.roles.find((r) => r.id === id);
  }

  roleByName(name: string): RoleView | undefined {
    return this.roles.find((r) => r.name === name);
  }

  merge(a: string, b: string): Promise<boolean> {
    return this.mutate({ op: "merge", a, b }, null);
  }

  remove(role: string): Promise<boolean> {
    return this.mutate({ op: "remove", role }, null);
  }

  rename(role: string, name: string): Promise<boolean> {
    const prev = this.role(role)?.name;
    const inverse: CurationOp | null =
      prev === undefined ? null : { op: "rename", role, name: prev };
    return this.mutate({ op: "rename", role, name }, inverse);
  }

  pin(a: string, b: string): Promise<boolean> {
    return this.mutate({ op: "pin", a, b }, null);
  }

  canUndo(): boolean {
    const last = this.log[this.log.length - 1];
    return last !== undefined && last.inverse !== null;
  }

  /** Post the inverse of the most recent op; no-op when none is invertible. */
  async undo(): Promise<boolean> {
    const last = this.log[this.log.length - 1];
    if (!last || !last.inverse) return false;
    const applied = await this.send(last.inverse);
    if (applied) this.log.pop();
    return applied;
  }

  exportRoleSet(): Promise<ExportResponse> {
    return this.api.postExport();
  }

  private async mutate(
    core: CurationOp,
    inverse: CurationOp | null,
  ): Promise<boolean> {
    const sent = { ...core, op_id: this.makeOpId(), if_version: this.version };
    const applied = await this.post(sent);
    if (applied) {
      this.log.push({ op: sent, inverse, version: this.version });
    }
    return applied;
  }

  private async send(core: CurationOp): Promise<boolean> {
    return this.post({ ...core, op_id: this.makeOpId(), if_version: this.version });
  }

  private async post(op: CurationOp): Promise<boolean> {
    try {
      await this.api.postCuration(op);
    } catch (err) {
      if (err instanceof ConflictError) {
        // someone else moved the state; the view must reload before retrying
        this.conflict = true;
        return false;
      }
      throw err;
    }
    await this.refresh();
    return true;
  }
}
