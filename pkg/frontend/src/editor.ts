/**
 * Pure state transitions for the DAG canvas.
 *
 * Every operation takes an EditorState and returns a fresh one; the DOM layer
 * only dispatches and re-renders. Link creation enforces the two rules the
 * canvas guarantees locally (no self loops, no duplicate pairs) and reports
 * refusals through `notice`. Everything else, cycles included, is left to the
 * server's validation endpoint.
 */

import type { CanvasLink, CanvasModel, CanvasTask } from "./model.js";

export type Selection =
  | { kind: "task"; id: number }
  | { kind: "link"; src: number; dst: number };

export interface EditorState {
  model: CanvasModel;
  selection: Selection | null;
  // Ids already present in annotations stay highlighted until the next edit.
  flagged: ReadonlySet<number>;
  notice: string | null;
  nextId: number;
}

export type TaskRole = "entry" | "intermediate" | "exit";

/**
 * Node fill colors. Three fixed role colors, plus one reserved for whatever
 * is selected; selection always wins over role.
 */
export const COLORS = {
  entry: "#2f9e44", // no incoming links (sources, and isolated tasks)
  intermediate: "#1971c2", // between other tasks
  exit: "#e8590c", // no outgoing links
  selected: "#d6336c",
} as const;

export function emptyModel(name = "untitled"): CanvasModel {
  return { name, tasks: [], links: [], extra: {} };
}

export function newEditor(model: CanvasModel = emptyModel()): EditorState {
  const maxId = model.tasks.reduce((acc, t) => Math.max(acc, t.id), 0);
  return {
    model,
    selection: null,
    flagged: new Set(),
    notice: null,
    nextId: maxId + 1,
  };
}

function withModel(state: EditorState, model: CanvasModel): EditorState {
  // Any structural edit invalidates previous server annotations.
  return { ...state, model, flagged: new Set(), notice: null };
}

export function findTask(model: CanvasModel, id: number): CanvasTask | undefined {
  return model.tasks.find((t) => t.id === id);
}

export function roleOf(model: CanvasModel, id: number): TaskRole {
  const hasIncoming = model.links.some((l) => l.dst === id);
  const hasOutgoing = model.links.some((l) => l.src === id);
  if (!hasIncoming) {
    return "entry";
  }
  return hasOutgoing ? "intermediate" : "exit";
}

export function addTask(
  state: EditorState,
  x: number,
  y: number,
  name: string,
  lengthMi: number,
): EditorState {
  if (name.trim().length === 0) {
    return { ...state, notice: "task name must not be blank" };
  }
  if (!Number.isFinite(lengthMi) || lengthMi <= 0) {
    return { ...state, notice: "task length must be a positive number of MI" };
  }
  const task: CanvasTask = {
    id: state.nextId,
    name,
    lengthMi,
    x,
    y,
    extra: {},
  };
  const next = withModel(state, {
    ...state.model,
    tasks: [...state.model.tasks, task],
  });
  return {
    ...next,
    nextId: state.nextId + 1,
    selection: { kind: "task", id: task.id },
  };
}

export function moveTask(
  state: EditorState,
  id: number,
  x: number,
  y: number,
): EditorState {
  const tasks = state.model.tasks.map((t) =>
    t.id === id ? { ...t, x, y } : t,
  );
  // Geometry edits keep annotations: positions play no part in validity.
  return { ...state, model: { ...state.model, tasks }, notice: null };
}

export function addLink(
  state: EditorState,
  src: number,
  dst: number,
  bytes: number,
): EditorState {
  if (src === dst) {
    return { ...state, notice: "self links are not allowed" };
  }
  if (!findTask(state.model, src) || !findTask(state.model, dst)) {
    return { ...state, notice: "both link endpoints must be existing tasks" };
  }
  if (state.model.links.some((l) => l.src === src && l.dst === dst)) {
    return { ...state, notice: `link ${src} -> ${dst} already exists` };
  }
  if (!Number.isFinite(bytes) || bytes < 0) {
    return { ...state, notice: "transfer size must be a non-negative number of bytes" };
  }
  const link: CanvasLink = { src, dst, bytes, extra: {} };
  const next = withModel(state, {
    ...state.model,
    links: [...state.model.links, link],
  });
  return { ...next, selection: { kind: "link", src, dst } };
}

export function select(state: EditorState, selection: Selection | null): EditorState {
  return { ...state, selection, notice: null };
}

/**
 * Deletes the current selection. Removing a task also removes every link
 * touching it, so the model never holds a link with a missing endpoint.
 */
export function deleteSelection(state: EditorState): EditorState {
  const sel = state.selection;
  if (sel === null) {
    return state;
  }
  let model: CanvasModel;
  if (sel.kind === "task") {
    model = {
      ...state.model,
      tasks: state.model.tasks.filter((t) => t.id !== sel.id),
      links: state.model.links.filter(
        (l) => l.src !== sel.id && l.dst !== sel.id,
      ),
    };
  } else {
    model = {
      ...state.model,
      links: state.model.links.filter(
        (l) => !(l.src === sel.src && l.dst === sel.dst),
      ),
    };
  }
  return { ...withModel(state, model), selection: null };
}

export function renameModel(state: EditorState, name: string): EditorState {
  if (name.trim().length === 0) {
    return { ...state, notice: "workflow name must not be blank" };
  }
  return { ...state, model: { ...state.model, name }, notice: null };
}

/** Applies server validation output: ids named in errors get highlighted. */
export function applyAnnotations(
  state: EditorState,
  errors: { code: string; ids: number[] }[],
): EditorState {
  const flagged = new Set<number>();
  for (const err of errors) {
    for (const id of err.ids) {
      flagged.add(id);
    }
  }
  return { ...state, flagged };
}

/** Replaces the whole model, e.g. after a file import. */
export function loadModel(state: EditorState, model: CanvasModel): EditorState {
  return newEditor(model);
}

export function isSelected(state: EditorState, sel: Selection): boolean {
  const cur = state.selection;
  if (cur === null || cur.kind !== sel.kind) {
    return false;
  }
  if (cur.kind === "task" && sel.kind === "task") {
    return cur.id === sel.id;
  }
  if (cur.kind === "link" && sel.kind === "link") {
    return cur.src === sel.src && cur.dst === sel.dst;
  }
  return false;
}

/** Fill color for a task node, honoring selection and role in that order. */
export function taskColor(state: EditorState, id: number): string {
  if (isSelected(state, { kind: "task", id })) {
    return COLORS.selected;
  }
  return COLORS[roleOf(state.model, id)];
}
