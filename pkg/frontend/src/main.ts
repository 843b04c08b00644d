import { ApiClient } from "./api.js";
import { layoutGraph } from "./graph.js";
import {
  buildBanner,
  buildDetailPanel,
  buildGraphSvg,
  buildRolesTable,
} from "./render.js";
import { CurationStore } from "./store.js";
import { clusterDetail } from "./views.js";
import type { GraphView } from "./types.js";

const api = new ApiClient("");
const store = new CurationStore(api);
const selected = new Set<string>();

let graph: GraphView = { nodes: [], edges: [] };
let minWeight = 0;
let notice: { message: string; kind: "info" | "error" } | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function render(): void {
  const banners = el("banners");
  banners.replaceChildren();
  if (store.conflict) {
    banners.appendChild(
      buildBanner(
        "The server state changed under this view. Reload to continue.",
        "conflict",
        () => void reload(),
      ),
    );
  } else if (notice) {
    banners.appendChild(buildBanner(notice.message, notice.kind));
  }

  el("roles").replaceChildren(
    buildRolesTable(store.roles, {
      selected,
      onToggle: (id, checked) => {
        if (checked) selected.add(id);
        else selected.delete(id);
        render();
      },
      onRename: (id, current) => void renameRole(id, current),
    }),
  );

  el("graph").replaceChildren(buildGraphSvg(layoutGraph(graph, { minWeight })));

  const [mergeBtn, removeBtn, pinBtn] = ["merge", "remove", "pin"].map(
    (id) => el(id) as HTMLButtonElement,
  );
  mergeBtn.disabled = selected.size !== 2;
  pinBtn.disabled = selected.size !== 2;
  removeBtn.disabled = selected.size !== 1;
  (el("undo") as HTMLButtonElement).disabled = !store.canUndo();
}

async function reload(): Promise<void> {
  await store.refresh();
  graph = await api.getGraph();
  selected.clear();
  render();
}

function pair(): [string, string] {
  const [a, b] = [...selected];
  return [a, b];
}

async function act(run: () => Promise<boolean>, label: string): Promise<void> {
  notice = null;
  try {
    const applied = await run();
    if (applied) {
      selected.clear();
      notice = { message: `${label} applied`, kind: "info" };
    }
  } catch (err) {
    notice = { message: err instanceof Error ? err.message : String(err), kind: "error" };
  }
  render();
}

async function renameRole(id: string, current: string): Promise<void> {
  const name = window.prompt("New role name", current);
  if (name === null || name === current) return;
  await act(() => store.rename(id, name), `Rename to ${name}`);
}

async function showDetail(clusterId: string): Promise<void> {
  const node = graph.nodes.find((n) => n.id === clusterId);
  if (!node) return;
  const mentions = await api.getMentions(clusterId);
  el("detail").replaceChildren(
    buildDetailPanel(clusterDetail(node, graph, mentions.mentions)),
  );
}

function wire(): void {
  el("merge").addEventListener("click", () => {
    const [a, b] = pair();
    void act(() => store.merge(a, b), "Merge");
  });
  el("remove").addEventListener("click", () => {
    const [role] = [...selected];
    void act(() => store.remove(role), "Remove");
  });
  el("pin").addEventListener("click", () => {
    const [a, b] = pair();
    void act(() => store.pin(a, b), "Pin");
  });
  el("undo").addEventListener("click", () => void act(() => store.undo(), "Undo"));
  el("reload").addEventListener("click", () => void reload());
  el("export").addEventListener("click", () => {
    void (async () => {
      try {
        const out = await store.exportRoleSet();
        notice = {
          message: `Exported ${out.roles} roles to ${out.path} (replay ${out.replay_equal ? "verified" : "MISMATCH"})`,
          kind: out.replay_equal ? "info" : "error",
        };
      } catch (err) {
        notice = { message: err instanceof Error ? err.message : String(err), kind: "error" };
      }
      render();
    })();
  });
  el("weight-cutoff").addEventListener("change", (event) => {
    minWeight = Number((event.target as HTMLInputElement).value) || 0;
    render();
  });
  el("graph").addEventListener("click", (event) => {
    const target = event.target as Element;
    const id = target instanceof SVGCircleElement ? target.dataset.nodeId : undefined;
    if (id) void showDetail(id);
  });
}

wire();
void reload();
