/**
 * DOM wiring. All behavior lives in the pure modules (model, editor, api,
 * gantt); this file only translates browser events into state transitions
 * and repaints from the current state. Served by the scheduling server
 * itself, so API calls go to the same origin.
 */

import {
  ApiClient,
  type ApiError,
  RunGate,
  type SimulateResponse,
} from "./api.js";
import {
  addLink,
  addTask,
  applyAnnotations,
  deleteSelection,
  type EditorState,
  moveTask,
  newEditor,
  renameModel,
  select,
  type Selection,
  taskColor,
} from "./editor.js";
import {
  type CanvasModel,
  exportDag,
  exportResources,
  importDag,
  importResources,
  ModelParseError,
  parseFileText,
  type ResourceRow,
  toFileText,
  validateResourceRow,
} from "./model.js";
import { layoutGantt, resourceSummary, taskSummary } from "./gantt.js";

const NODE_RADIUS = 26;
const SVG_NS = "http://www.w3.org/2000/svg";

interface AppState {
  editor: EditorState;
  rows: ResourceRow[];
  serverErrors: ApiError[];
  banner: string | null;
  // Run stays disabled until the server has validated the current drawing.
  validated: boolean;
  lastRun: SimulateResponse | null;
}

const api = new ApiClient("");
const gate = new RunGate();

let state: AppState = {
  editor: newEditor(),
  rows: [defaultRow("R1")],
  serverErrors: [],
  banner: null,
  validated: false,
  lastRun: null,
};

function defaultRow(name: string): ResourceRow {
  return {
    name,
    architecture: "generic",
    timeZone: 0.0,
    numMachines: 1,
    pesPerMachine: 1,
    peRatingMips: 1000.0,
    baudRateBps: 1000000.0,
    costPerSec: 3.0,
    extra: {},
  };
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

/** Every editor transition funnels through here so repaint stays uniform. */
function setEditor(next: EditorState): void {
  const structural = next.model !== state.editor.model;
  state = {
    ...state,
    editor: next,
    // Any model change, geometry included, demands a fresh validation pass.
    validated: structural ? false : state.validated,
  };
  paint();
}

function setRows(rows: ResourceRow[]): void {
  state = { ...state, rows, validated: false };
  paint();
}

// ---------------------------------------------------------------- canvas --

type DragState =
  | { kind: "move"; id: number; dx: number; dy: number; moved: boolean }
  | { kind: "link"; src: number; x: number; y: number }
  | null;

let drag: DragState = null;

function canvasPoint(event: MouseEvent): { x: number; y: number } {
  const rect = el<HTMLElement>("canvas").getBoundingClientRect();
  return { x: event.clientX - rect.left, y: event.clientY - rect.top };
}

function taskAt(x: number, y: number): number | null {
  // topmost node wins, hence the reverse scan
  const tasks = state.editor.model.tasks;
  for (let i = tasks.length - 1; i >= 0; i--) {
    const t = tasks[i]!;
    if ((t.x - x) ** 2 + (t.y - y) ** 2 <= NODE_RADIUS ** 2) {
      return t.id;
    }
  }
  return null;
}

function onCanvasMouseDown(event: MouseEvent): void {
  const { x, y } = canvasPoint(event);
  const hit = taskAt(x, y);
  if (hit === null) {
    return;
  }
  event.preventDefault();
  if (event.shiftKey) {
    drag = { kind: "link", src: hit, x, y };
  } else {
    const task = state.editor.model.tasks.find((t) => t.id === hit)!;
    drag = { kind: "move", id: hit, dx: task.x - x, dy: task.y - y, moved: false };
  }
  setEditor(select(state.editor, { kind: "task", id: hit }));
}

function onCanvasMouseMove(event: MouseEvent): void {
  if (drag === null) {
    return;
  }
  const { x, y } = canvasPoint(event);
  if (drag.kind === "move") {
    drag.moved = true;
    setEditor(moveTask(state.editor, drag.id, x + drag.dx, y + drag.dy));
  } else {
    drag = { ...drag, x, y };
    paint();
  }
}

function onCanvasMouseUp(event: MouseEvent): void {
  const current = drag;
  drag = null;
  const { x, y } = canvasPoint(event);
  if (current === null) {
    // click on empty canvas creates a task
    if (taskAt(x, y) === null) {
      promptNewTask(x, y);
    }
    return;
  }
  if (current.kind === "link") {
    const target = taskAt(x, y);
    if (target !== null) {
      promptNewLink(current.src, target);
    } else {
      paint();
    }
  }
}

function onCanvasClick(event: MouseEvent): void {
  // Plain clicks that neither hit a node nor ended a drag are handled in
  // mouseup; this handler only clears selection when clicking empty space
  // with a selection active. Kept separate so double-fire does no harm.
  void event;
}

function promptNewTask(x: number, y: number): void {
  const name = window.prompt("Task name", `task${state.editor.nextId}`);
  if (name === null) {
    return;
  }
  const miText = window.prompt("Task length (MI)", "100000");
  if (miText === null) {
    return;
  }
  setEditor(addTask(state.editor, x, y, name, Number(miText)));
}

function promptNewLink(src: number, dst: number): void {
  if (src === dst) {
    setEditor(addLink(state.editor, src, dst, 0));
    return;
  }
  const bytesText = window.prompt("Transfer size (bytes)", "50000");
  if (bytesText === null) {
    paint();
    return;
  }
  setEditor(addLink(state.editor, src, dst, Number(bytesText)));
}

function onKeyDown(event: KeyboardEvent): void {
  if (event.key !== "Delete" && event.key !== "Backspace") {
    return;
  }
  const target = event.target as HTMLElement;
  if (target.tagName === "INPUT" || target.tagName === "TEXTAREA") {
    return;
  }
  event.preventDefault();
  setEditor(deleteSelection(state.editor));
}

function svgEl(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function paintCanvas(): void {
  const svg = el<HTMLElement>("canvas") as unknown as SVGSVGElement;
  svg.replaceChildren();
  const model = state.editor.model;

  const marker = svgEl("marker", {
    id: "arrow",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#495057" }));
  const defs = svgEl("defs", {});
  defs.appendChild(marker);
  svg.appendChild(defs);

  for (const link of model.links) {
    const a = model.tasks.find((t) => t.id === link.src);
    const b = model.tasks.find((t) => t.id === link.dst);
    if (!a || !b) {
      continue;
    }
    const len = Math.hypot(b.x - a.x, b.y - a.y) || 1;
    const ux = (b.x - a.x) / len;
    const uy = (b.y - a.y) / len;
    const sel: Selection = { kind: "link", src: link.src, dst: link.dst };
    const selected =
      state.editor.selection?.kind === "link" &&
      state.editor.selection.src === link.src &&
      state.editor.selection.dst === link.dst;
    const line = svgEl("line", {
      x1: String(a.x + ux * NODE_RADIUS),
      y1: String(a.y + uy * NODE_RADIUS),
      x2: String(b.x - ux * (NODE_RADIUS + 3)),
      y2: String(b.y - uy * (NODE_RADIUS + 3)),
      stroke: selected ? "#d6336c" : "#495057",
      "stroke-width": selected ? "3" : "2",
      "marker-end": "url(#arrow)",
    });
    line.addEventListener("mousedown", (e) => {
      e.stopPropagation();
      setEditor(select(state.editor, sel));
    });
    const title = svgEl("title", {});
    title.textContent = `${link.src} -> ${link.dst}: ${link.bytes} bytes`;
    line.appendChild(title);
    svg.appendChild(line);
  }

  const linkDrag = drag;
  if (linkDrag?.kind === "link") {
    const from = model.tasks.find((t) => t.id === linkDrag.src);
    if (from) {
      svg.appendChild(
        svgEl("line", {
          x1: String(from.x),
          y1: String(from.y),
          x2: String(linkDrag.x),
          y2: String(linkDrag.y),
          stroke: "#adb5bd",
          "stroke-dasharray": "4 3",
          "stroke-width": "2",
        }),
      );
    }
  }

  for (const task of model.tasks) {
    const flagged = state.editor.flagged.has(task.id);
    const circle = svgEl("circle", {
      cx: String(task.x),
      cy: String(task.y),
      r: String(NODE_RADIUS),
      fill: taskColor(state.editor, task.id),
      stroke: flagged ? "#c92a2a" : "#343a40",
      "stroke-width": flagged ? "4" : "1.5",
    });
    const title = svgEl("title", {});
    title.textContent = `${task.name} (id ${task.id}, ${task.lengthMi} MI)`;
    circle.appendChild(title);
    svg.appendChild(circle);

    const label = svgEl("text", {
      x: String(task.x),
      y: String(task.y + NODE_RADIUS + 14),
      "text-anchor": "middle",
      "font-size": "12",
    });
    label.textContent = task.name;
    svg.appendChild(label);
  }
}

// ------------------------------------------------------------- resources --

function rowInput(
  value: string,
  onChange: (text: string) => void,
): HTMLTableCellElement {
  const td = document.createElement("td");
  const input = document.createElement("input");
  input.value = value;
  input.addEventListener("change", () => onChange(input.value));
  td.appendChild(input);
  return td;
}

function updateRow(index: number, patch: Partial<ResourceRow>): void {
  const rows = state.rows.map((r, i) => (i === index ? { ...r, ...patch } : r));
  setRows(rows);
}

function paintResources(): void {
  const tbody = el<HTMLTableSectionElement>("res-table").querySelector("tbody")!;
  tbody.replaceChildren();
  const faults: string[] = [];
  state.rows.forEach((row, i) => {
    const tr = document.createElement("tr");
    const rowFaults = validateResourceRow(row);
    if (rowFaults.length > 0) {
      tr.classList.add("bad");
      faults.push(...rowFaults.map((f) => `${row.name || `row ${i + 1}`}: ${f}`));
    }
    tr.appendChild(rowInput(row.name, (v) => updateRow(i, { name: v })));
    tr.appendChild(
      rowInput(row.architecture, (v) => updateRow(i, { architecture: v })),
    );
    tr.appendChild(
      rowInput(String(row.timeZone), (v) => updateRow(i, { timeZone: Number(v) })),
    );
    tr.appendChild(
      rowInput(String(row.numMachines), (v) =>
        updateRow(i, { numMachines: Number(v) }),
      ),
    );
    tr.appendChild(
      rowInput(String(row.pesPerMachine), (v) =>
        updateRow(i, { pesPerMachine: Number(v) }),
      ),
    );
    tr.appendChild(
      rowInput(String(row.peRatingMips), (v) =>
        updateRow(i, { peRatingMips: Number(v) }),
      ),
    );
    tr.appendChild(
      rowInput(String(row.baudRateBps), (v) =>
        updateRow(i, { baudRateBps: Number(v) }),
      ),
    );
    tr.appendChild(
      rowInput(String(row.costPerSec), (v) =>
        updateRow(i, { costPerSec: Number(v) }),
      ),
    );
    const actions = document.createElement("td");
    const remove = document.createElement("button");
    remove.textContent = "remove";
    remove.addEventListener("click", () =>
      setRows(state.rows.filter((_, j) => j !== i)),
    );
    actions.appendChild(remove);
    tr.appendChild(actions);
    tbody.appendChild(tr);
  });

  const list = el<HTMLUListElement>("res-faults");
  list.replaceChildren();
  for (const fault of faults) {
    const li = document.createElement("li");
    li.textContent = fault;
    list.appendChild(li);
  }
}

// ------------------------------------------------------ validate and run --

function describeError(err: ApiError): string {
  const ids = err.ids && err.ids.length > 0 ? ` (tasks ${err.ids.join(", ")})` : "";
  return err.message ? `${err.code}: ${err.message}` : `${err.code}${ids}`;
}

async function doValidate(): Promise<void> {
  const doc = exportDag(state.editor.model);
  try {
    const reply = await api.validate(doc);
    state = { ...state, banner: null };
    if (reply.status !== 200) {
      state = {
        ...state,
        validated: false,
        serverErrors: (reply.body.errors ?? []) as ApiError[],
      };
      paint();
      return;
    }
    const errors = reply.body.errors.map((e) => ({
      code: e.code,
      ids: e.ids ?? [],
    }));
    state = {
      ...state,
      validated: reply.body.ok,
      serverErrors: reply.body.errors,
      editor: applyAnnotations(state.editor, errors),
    };
  } catch {
    // transport failure: keep the drawing untouched, just show the banner
    state = { ...state, banner: "server unreachable; your drawing is preserved" };
  }
  paint();
}

async function doRun(): Promise<void> {
  if (gate.pending || !state.validated) {
    return;
  }
  const dagDoc = exportDag(state.editor.model);
  const resDoc = exportResources(state.rows);
  try {
    // start first, then repaint: the gate is pending from here on, so the
    // repaint disables Run for the whole flight
    const pending = gate.run(() => api.simulate(dagDoc, resDoc));
    paint();
    const reply = await pending;
    state = { ...state, banner: null };
    if (reply.status === 200 && reply.body.ok) {
      state = { ...state, lastRun: reply.body, serverErrors: [] };
      activateTab("gantt");
    } else {
      state = {
        ...state,
        serverErrors: (reply.body.errors ?? []) as ApiError[],
      };
    }
  } catch {
    state = { ...state, banner: "server unreachable; your drawing is preserved" };
  }
  paint();
}

function paintGantt(): void {
  const host = el<HTMLDivElement>("gantt-host");
  host.replaceChildren();
  const label = el<HTMLSpanElement>("makespan-label");
  const run = state.lastRun;
  if (!run || !run.gantt || !run.result) {
    label.textContent = "no run yet";
    return;
  }
  const scene = layoutGantt(run.gantt);
  label.textContent = `makespan ${scene.makespanLabel} s`;

  const svg = svgEl("svg", {
    width: String(scene.width),
    height: String(scene.height),
  });
  for (const lane of scene.lanes) {
    const text = svgEl("text", {
      x: "8",
      y: String(lane.y + lane.height / 2 + 4),
      "font-size": "12",
    });
    text.textContent = lane.label;
    svg.appendChild(text);
    svg.appendChild(
      svgEl("line", {
        x1: String(scene.chartLeft),
        y1: String(lane.y + lane.height),
        x2: String(scene.width - 20),
        y2: String(lane.y + lane.height),
        stroke: "#dee2e6",
      }),
    );
  }
  for (const bar of scene.bars) {
    const rect = svgEl("rect", {
      x: String(bar.x),
      y: String(bar.y),
      width: String(bar.width),
      height: String(bar.height),
      fill: "#4dabf7",
      stroke: "#1864ab",
    });
    const title = svgEl("title", {});
    title.textContent = bar.hover;
    rect.appendChild(title);
    svg.appendChild(rect);
    const text = svgEl("text", {
      x: String(bar.x + 4),
      y: String(bar.y + bar.height / 2 + 4),
      "font-size": "11",
      fill: "#002b55",
    });
    text.textContent = bar.label;
    svg.appendChild(text);
  }
  for (const tick of scene.ticks) {
    const text = svgEl("text", {
      x: String(tick.x),
      y: String(scene.height - 8),
      "text-anchor": "middle",
      "font-size": "11",
    });
    text.textContent = tick.label;
    svg.appendChild(text);
  }
  host.appendChild(svg);

  const resPanel = el<HTMLUListElement>("panel-resources");
  resPanel.replaceChildren();
  for (const line of resourceSummary(run.result.per_resource_utilization)) {
    const li = document.createElement("li");
    li.textContent = line;
    resPanel.appendChild(li);
  }
  const taskPanel = el<HTMLUListElement>("panel-tasks");
  taskPanel.replaceChildren();
  for (const line of taskSummary(run.gantt)) {
    const li = document.createElement("li");
    li.textContent = line;
    taskPanel.appendChild(li);
  }
}

// ---------------------------------------------------------- files & tabs --

function download(filename: string, text: string): void {
  const blob = new Blob([text], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

function importFile(
  input: HTMLInputElement,
  consume: (doc: unknown) => void,
): void {
  const file = input.files?.[0];
  if (!file) {
    return;
  }
  file.text().then((text) => {
    try {
      consume(parseFileText(text, file.name));
      state = { ...state, banner: null };
    } catch (err) {
      if (err instanceof ModelParseError) {
        state = { ...state, banner: err.message };
      } else {
        throw err;
      }
    }
    input.value = "";
    paint();
  });
}

function activateTab(name: string): void {
  for (const button of document.querySelectorAll<HTMLButtonElement>(".tab")) {
    button.classList.toggle("active", button.dataset["tab"] === name);
  }
  for (const pane of document.querySelectorAll<HTMLElement>(".pane")) {
    pane.classList.toggle("active", pane.id === `tab-${name}`);
  }
}

function paint(): void {
  el<HTMLInputElement>("dag-name").value = state.editor.model.name;
  el<HTMLButtonElement>("btn-run").disabled = !state.validated || gate.pending;

  const banner = el<HTMLDivElement>("banner");
  banner.classList.toggle("hidden", state.banner === null);
  banner.textContent = state.banner ?? "";

  const notice = el<HTMLDivElement>("notice");
  notice.classList.toggle("hidden", state.editor.notice === null);
  notice.textContent = state.editor.notice ?? "";

  const errors = el<HTMLUListElement>("error-list");
  errors.replaceChildren();
  for (const err of state.serverErrors) {
    const li = document.createElement("li");
    li.textContent = describeError(err);
    errors.appendChild(li);
  }

  paintCanvas();
  paintResources();
  paintGantt();
}

function wire(): void {
  const canvas = el<HTMLElement>("canvas");
  canvas.addEventListener("mousedown", onCanvasMouseDown);
  canvas.addEventListener("mousemove", onCanvasMouseMove);
  canvas.addEventListener("mouseup", onCanvasMouseUp);
  canvas.addEventListener("click", onCanvasClick);
  document.addEventListener("keydown", onKeyDown);

  el<HTMLInputElement>("dag-name").addEventListener("change", (e) =>
    setEditor(renameModel(state.editor, (e.target as HTMLInputElement).value)),
  );
  el<HTMLButtonElement>("btn-validate").addEventListener("click", () => {
    void doValidate();
  });
  el<HTMLButtonElement>("btn-run").addEventListener("click", () => {
    void doRun();
  });

  el<HTMLButtonElement>("btn-export-dag").addEventListener("click", () =>
    download(
      `${state.editor.model.name}.json`,
      toFileText(exportDag(state.editor.model)),
    ),
  );
  const dagFile = el<HTMLInputElement>("file-dag");
  el<HTMLButtonElement>("btn-import-dag").addEventListener("click", () =>
    dagFile.click(),
  );
  dagFile.addEventListener("change", () =>
    importFile(dagFile, (doc) => {
      state = { ...state, editor: newEditor(importDag(doc)), validated: false };
    }),
  );

  el<HTMLButtonElement>("btn-add-row").addEventListener("click", () =>
    setRows([...state.rows, defaultRow(`R${state.rows.length + 1}`)]),
  );
  el<HTMLButtonElement>("btn-export-res").addEventListener("click", () =>
    download("resources.json", toFileText(exportResources(state.rows))),
  );
  const resFile = el<HTMLInputElement>("file-res");
  el<HTMLButtonElement>("btn-import-res").addEventListener("click", () =>
    resFile.click(),
  );
  resFile.addEventListener("change", () =>
    importFile(resFile, (doc) => {
      state = { ...state, rows: importResources(doc), validated: false };
    }),
  );

  for (const button of document.querySelectorAll<HTMLButtonElement>(".tab")) {
    button.addEventListener("click", () => activateTab(button.dataset["tab"]!));
  }

  paint();
}

wire();
