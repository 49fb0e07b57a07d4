/**
 * DOM wiring: session picker, topology canvas, consoles, capture
 * viewer, task panel. Everything shown comes from the service; this
 * file only moves strings between endpoints and elements.
 */

import { ApiClient, StateView } from "./api.js";
import { browserStore, CanvasModel, CanvasNode } from "./canvas.js";
import { CaptureViewer } from "./captures.js";
import { ConsolePane } from "./console.js";
import { EventStream } from "./events.js";
import { parseTopology } from "./topodoc.js";
import { TaskPanel } from "./tasks.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

const api = new ApiClient(
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8000",
);

let sessionId: string | null = null;
let stream: EventStream | null = null;
let taskPanel: TaskPanel | null = null;
const captureViewer = new CaptureViewer();
const openConsoles = new Map<string, ConsolePane>();

async function refreshSessionList(): Promise<void> {
  const select = byId<HTMLSelectElement>("session-select");
  const sessions = await api.listSessions();
  select.replaceChildren(
    el("option", { value: "" }, "choose a session"),
    ...sessions.map((s) =>
      el("option", { value: s.id }, `${s.scenario} ${s.id} (${s.created_at})`),
    ),
  );
  if (sessionId) select.value = sessionId;
}

async function createSession(): Promise<void> {
  const scenario = byId<HTMLSelectElement>("scenario-select").value;
  const groups = Number(byId<HTMLInputElement>("groups-input").value) || undefined;
  const solved = byId<HTMLInputElement>("solved-checkbox").checked;
  const id = await api.createSession(scenario, groups, solved ? "solved" : "unconfigured");
  await refreshSessionList();
  await openSession(id);
}

async function openSession(id: string): Promise<void> {
  sessionId = id;
  byId<HTMLSelectElement>("session-select").value = id;
  stream?.stop();
  openConsoles.clear();
  byId("consoles").replaceChildren();

  const doc = parseTopology(await api.topology(id));
  const model = new CanvasModel(
    doc,
    900,
    640,
    browserStore(window.localStorage),
    `netlab-layout-${id}`,
  );
  renderCanvas(model);

  captureViewer.selectSegment(null);
  renderCaptures();
  stream = new EventStream((fromSeq) => api.eventsUrl(id, fromSeq));
  stream.onEvent((event) => captureViewer.offer(event));
  captureViewer.onRow(() => renderCaptures());

  taskPanel = new TaskPanel(api, id, 1);
  taskPanel.onChange(renderTasks);
  taskPanel.followStream(stream);
  void stream.run();
  await taskPanel.refresh();
}

function renderCanvas(model: CanvasModel): void {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${model.width} ${model.height}`);
  svg.setAttribute("id", "topology-svg");

  for (const edge of model.edges) {
    const from = model.node(edge.from)!;
    const to = model.node(edge.to)!;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.setAttribute("class", "edge");
    svg.append(line);
  }
  for (const node of model.nodes) {
    svg.append(renderNode(model, node));
  }
  byId("canvas").replaceChildren(svg);
}

function renderNode(model: CanvasModel, node: CanvasNode): SVGGElement {
  const group = document.createElementNS(SVG_NS, "g");
  group.setAttribute("transform", `translate(${node.x},${node.y})`);
  group.setAttribute("class", `node ${node.kind}`);
  const shape = document.createElementNS(SVG_NS, node.kind === "segment" ? "rect" : "circle");
  if (node.kind === "segment") {
    shape.setAttribute("x", "-9");
    shape.setAttribute("y", "-9");
    shape.setAttribute("width", "18");
    shape.setAttribute("height", "18");
  } else {
    shape.setAttribute("r", "16");
  }
  const label = document.createElementNS(SVG_NS, "text");
  label.setAttribute("y", "32");
  label.textContent = node.label;
  group.append(shape, label);
  group.addEventListener("click", () => {
    if (node.kind === "segment") {
      captureViewer.selectSegment(node.label.split(" ")[0]);
      byId("capture-segment").textContent = captureViewer.segment ?? "none";
      renderCaptures();
    } else {
      openConsole(node.label);
    }
  });
  return group;
}

function openConsole(device: string): void {
  if (!sessionId || openConsoles.has(device)) return;
  const pane = new ConsolePane(api, sessionId, device);
  openConsoles.set(device, pane);

  const output = el("pre", { class: "console-output" });
  const input = el("input", {
    class: "console-input",
    placeholder: "command (try: show ip route)",
  });
  const title = el("div", { class: "console-title" }, device, " ");
  for (const view of ["route", "bgp", "ospf", "run"] as StateView[]) {
    const button = el("button", {}, view);
    button.addEventListener("click", async () => {
      output.textContent += `> show (${view})\n${await api.stateView(sessionId!, device, view)}`;
      output.scrollTop = output.scrollHeight;
    });
    title.append(button);
  }
  const close = el("button", { class: "close" }, "x");
  close.addEventListener("click", () => {
    openConsoles.delete(device);
    box.remove();
  });
  title.append(close);

  input.addEventListener("keydown", async (keyEvent) => {
    if (keyEvent.key !== "Enter" || !input.value.trim()) return;
    const command = input.value;
    input.value = "";
    const response = await pane.run(command);
    output.textContent += `> ${command}\n${response}${response.endsWith("\n") ? "" : "\n"}`;
    output.scrollTop = output.scrollHeight;
  });
  if (taskPanel) taskPanel.follow(pane);

  const box = el("div", { class: "console-pane" }, title, output, input);
  byId("consoles").append(box);
  input.focus();
}

function renderCaptures(): void {
  const body = byId("capture-rows");
  body.replaceChildren(
    ...captureViewer.rows.map((row) =>
      el(
        "tr",
        {},
        el("td", {}, String(row.seq)),
        el("td", {}, row.kind),
        el("td", {}, row.src),
        el("td", {}, row.dst),
        el("td", {}, String(row.ttl)),
      ),
    ),
  );
}

function renderTasks(): void {
  if (!taskPanel) return;
  const list = byId("task-list");
  list.replaceChildren(
    ...taskPanel.badges.map((badge) =>
      el(
        "li",
        { class: `task ${badge.badge}`, title: badge.evidence },
        el("span", { class: "badge" }, badge.badge === "green" ? "✓" : badge.badge === "red" ? "✗" : "—"),
        ` task ${badge.id}: ${badge.evidence}`,
      ),
    ),
  );
}

function wireControls(): void {
  byId("create-button").addEventListener("click", () => void createSession());
  byId<HTMLSelectElement>("session-select").addEventListener("change", (changeEvent) => {
    const id = (changeEvent.target as HTMLSelectElement).value;
    if (id) void openSession(id);
  });
  byId<HTMLInputElement>("group-input").addEventListener("change", (changeEvent) => {
    const group = Number((changeEvent.target as HTMLInputElement).value);
    if (taskPanel && group >= 1) {
      taskPanel.group = group;
      void taskPanel.refresh();
    }
  });
  void refreshSessionList();
}

wireControls();
