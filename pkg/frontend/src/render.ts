import type { GraphLayout } from "./graph.js";
import type { ClusterDetail } from "./views.js";
import { labelText, mentionText } from "./views.js";
import type { RoleView } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface TableHandlers {
  onToggle: (roleId: string, checked: boolean) => void;
  onRename: (roleId: string, currentName: string) => void;
  selected: Set<string>;
}

export function buildRolesTable(roles: RoleView[], handlers: TableHandlers): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "roles";
  const head = table.createTHead().insertRow();
  for (const title of ["", "Role", "Mentions", "Action label", "Object label", ""]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const role of roles) {
    const row = body.insertRow();
    row.dataset.roleId = role.id;

    const pick = document.createElement("input");
    pick.type = "checkbox";
    pick.checked = handlers.selected.has(role.id);
    pick.addEventListener("change", () => handlers.onToggle(role.id, pick.checked));
    row.insertCell().appendChild(pick);

    row.insertCell().textContent = role.name;
    row.insertCell().textContent = String(role.size);
    row.insertCell().textContent = labelText(role.action_label);
    row.insertCell().textContent = labelText(role.object_label);

    const rename = document.createElement("button");
    rename.textContent = "Rename";
    rename.addEventListener("click", () => handlers.onRename(role.id, role.name));
    row.insertCell().appendChild(rename);
  }
  return table;
}

export function buildGraphSvg(layout: GraphLayout): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  svg.setAttribute("width", String(layout.width));
  svg.setAttribute("height", String(layout.height));

  for (const e of layout.edges) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(e.x1));
    line.setAttribute("y1", String(e.y1));
    line.setAttribute("x2", String(e.x2));
    line.setAttribute("y2", String(e.y2));
    line.setAttribute("stroke-width", e.width.toFixed(2));
    line.setAttribute("class", "edge");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${e.a} to ${e.o}: ${e.weight} shared mentions`;
    line.appendChild(title);
    svg.appendChild(line);
  }
  for (const n of layout.nodes) {
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(n.x));
    circle.setAttribute("cy", String(n.y));
    circle.setAttribute("r", n.r.toFixed(2));
    circle.setAttribute("class", `node ${n.side}`);
    circle.dataset.nodeId = n.id;
    svg.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(n.side === "action" ? n.x - n.r - 6 : n.x + n.r + 6));
    text.setAttribute("y", String(n.y + 4));
    text.setAttribute("text-anchor", n.side === "action" ? "end" : "start");
    text.textContent = `${labelText(n.label)} (${n.size})`;
    svg.appendChild(text);
  }
  return svg;
}

export function buildDetailPanel(detail: ClusterDetail): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "detail";
  const heading = document.createElement("h3");
  heading.textContent = `${detail.side} cluster ${detail.id}: ${labelText(detail.label)}`;
  panel.appendChild(heading);

  const edges = document.createElement("p");
  edges.textContent = detail.edges
    .map((e) => `${e.a}-${e.o} (${e.weight})`)
    .join(", ") || "no edges";
  panel.appendChild(edges);

  const list = document.createElement("ul");
  for (const m of detail.mentions) {
    const item = document.createElement("li");
    item.textContent = mentionText(m);
    list.appendChild(item);
  }
  panel.appendChild(list);
  return panel;
}

/** Non-blocking message strip; kind "conflict" adds the reload affordance. */
export function buildBanner(
  message: string,
  kind: "info" | "error" | "conflict",
  onReload?: () => void,
): HTMLElement {
  const banner = document.createElement("div");
  banner.className = `banner ${kind}`;
  const text = document.createElement("span");
  text.textContent = message;
  banner.appendChild(text);
  if (kind === "conflict" && onReload) {
    const reload = document.createElement("button");
    reload.textContent = "Reload";
    reload.addEventListener("click", onReload);
    banner.appendChild(reload);
  }
  return banner;
}
