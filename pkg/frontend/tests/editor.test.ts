import { describe, expect, it } from "vitest";

import {
  addLink,
  addTask,
  applyAnnotations,
  COLORS,
  deleteSelection,
  emptyModel,
  newEditor,
  renameModel,
  roleOf,
  select,
  taskColor,
  type EditorState,
} from "../src/editor.js";

/** Builds the four-task diamond through the same transitions the UI uses. */
function drawDiamond(): EditorState {
  let s = newEditor(emptyModel("diamond4"));
  s = addTask(s, 200, 40, "task1", 100000);
  s = addTask(s, 80, 160, "task2", 100000);
  s = addTask(s, 320, 160, "task3", 100000);
  s = addTask(s, 200, 280, "task4", 100000);
  s = addLink(s, 1, 2, 50000);
  s = addLink(s, 1, 3, 50000);
  s = addLink(s, 2, 4, 50000);
  s = addLink(s, 3, 4, 50000);
  return s;
}

describe("task creation", () => {
  it("numbers tasks from 1 and selects the newcomer", () => {
    let s = newEditor();
    s = addTask(s, 10, 20, "first", 5);
    expect(s.model.tasks).toHaveLength(1);
    expect(s.model.tasks[0]).toMatchObject({ id: 1, x: 10, y: 20, lengthMi: 5 });
    expect(s.selection).toEqual({ kind: "task", id: 1 });
    s = addTask(s, 30, 40, "second", 5);
    expect(s.model.tasks[1]!.id).toBe(2);
  });

  it("continues numbering after the highest imported id", () => {
    const s = newEditor({
      name: "n",
      tasks: [{ id: 7, name: "t", lengthMi: 1, x: 0, y: 0, extra: {} }],
      links: [],
      extra: {},
    });
    expect(addTask(s, 0, 0, "u", 1).model.tasks[1]!.id).toBe(8);
  });

  it("refuses blank names and non-positive lengths without mutating", () => {
    const s = newEditor();
    const blank = addTask(s, 0, 0, "   ", 5);
    expect(blank.model.tasks).toHaveLength(0);
    expect(blank.notice).toMatch(/name/);
    const zero = addTask(s, 0, 0, "ok", 0);
    expect(zero.model.tasks).toHaveLength(0);
    expect(zero.notice).toMatch(/positive/);
  });
});

describe("link creation rules", () => {
  it("adds a link between distinct existing tasks", () => {
    const s = drawDiamond();
    expect(s.model.links).toHaveLength(4);
    expect(s.selection).toEqual({ kind: "link", src: 3, dst: 4 });
    expect(s.notice).toBeNull();
  });

  it("blocks self links with an inline message", () => {
    const before = drawDiamond();
    const after = addLink(before, 2, 2, 10);
    expect(after.model).toBe(before.model);
    expect(after.notice).toMatch(/self links are not allowed/);
  });

  it("blocks duplicate links with an inline message", () => {
    const before = drawDiamond();
    const after = addLink(before, 1, 2, 99);
    expect(after.model).toBe(before.model);
    expect(after.notice).toMatch(/already exists/);
  });

  it("blocks links to missing endpoints and negative sizes", () => {
    const s = drawDiamond();
    expect(addLink(s, 1, 42, 0).notice).toMatch(/existing tasks/);
    expect(addLink(s, 4, 1, -3).notice).toMatch(/non-negative/);
  });
});

describe("selection and deletion", () => {
  it("deleting a task cascades to every touching link", () => {
    let s = drawDiamond();
    s = select(s, { kind: "task", id: 1 });
    s = deleteSelection(s);
    expect(s.model.tasks.map((t) => t.id)).toEqual([2, 3, 4]);
    // links 1->2 and 1->3 went with the task
    expect(s.model.links).toEqual([
      { src: 2, dst: 4, bytes: 50000, extra: {} },
      { src: 3, dst: 4, bytes: 50000, extra: {} },
    ]);
    expect(s.selection).toBeNull();
  });

  it("deleting a link removes only that link", () => {
    let s = drawDiamond();
    s = select(s, { kind: "link", src: 1, dst: 3 });
    s = deleteSelection(s);
    expect(s.model.tasks).toHaveLength(4);
    expect(s.model.links.map((l) => `${l.src}->${l.dst}`)).toEqual([
      "1->2",
      "2->4",
      "3->4",
    ]);
  });

  it("is a no-op without a selection", () => {
    const s = select(drawDiamond(), null);
    expect(deleteSelection(s)).toBe(s);
  });
});

describe("roles and colors", () => {
  it("classifies the diamond as entry, intermediates, exit", () => {
    const m = drawDiamond().model;
    expect(roleOf(m, 1)).toBe("entry");
    expect(roleOf(m, 2)).toBe("intermediate");
    expect(roleOf(m, 3)).toBe("intermediate");
    expect(roleOf(m, 4)).toBe("exit");
  });

  it("treats an unconnected task as an entry", () => {
    const s = addTask(newEditor(), 0, 0, "solo", 1);
    expect(roleOf(s.model, 1)).toBe("entry");
  });

  it("uses four distinct colors and lets selection win", () => {
    const values = Object.values(COLORS);
    expect(new Set(values).size).toBe(4);
    let s = drawDiamond();
    expect(taskColor(s, 1)).toBe(COLORS.entry);
    expect(taskColor(s, 2)).toBe(COLORS.intermediate);
    expect(taskColor(s, 4)).toBe(COLORS.exit);
    s = select(s, { kind: "task", id: 4 });
    expect(taskColor(s, 4)).toBe(COLORS.selected);
    expect(taskColor(s, 1)).toBe(COLORS.entry);
  });
});

describe("annotations", () => {
  it("highlights every id named by the server", () => {
    let s = drawDiamond();
    s = applyAnnotations(s, [
      { code: "Cycle", ids: [2, 3] },
      { code: "FloatingTask", ids: [3] },
    ]);
    expect([...s.flagged].sort()).toEqual([2, 3]);
  });

  it("clears highlights on the next structural edit", () => {
    let s = drawDiamond();
    s = applyAnnotations(s, [{ code: "Cycle", ids: [2, 3] }]);
    s = addTask(s, 5, 5, "new", 1);
    expect(s.flagged.size).toBe(0);
  });
});

describe("workflow name", () => {
  it("renames and refuses blank names", () => {
    let s = newEditor(emptyModel("a"));
    s = renameModel(s, "b");
    expect(s.model.name).toBe("b");
    const refused = renameModel(s, " ");
    expect(refused.model.name).toBe("b");
    expect(refused.notice).toMatch(/blank/);
  });
});
