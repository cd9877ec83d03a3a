/**
 * Pure geometry for the Gantt view.
 *
 * layoutGantt maps the server's structured gantt document onto pixel
 * coordinates and display strings. It never recomputes schedule values:
 * every number shown comes straight from the response, only scaled onto the
 * drawing area. Same input, same scene, no hidden state.
 */

import type { GanttDoc } from "./api.js";

export interface SceneBar {
  task: number;
  name: string;
  x: number;
  y: number;
  width: number;
  height: number;
  label: string; // drawn inside the bar
  hover: string; // tooltip: [start, finish) and cost
  start: number;
  finish: number;
  cost: number;
}

export interface SceneLane {
  label: string; // resource/machine/pe
  y: number;
  height: number;
}

export interface SceneTick {
  x: number;
  label: string;
}

export interface GanttScene {
  width: number;
  height: number;
  chartLeft: number;
  lanes: SceneLane[];
  bars: SceneBar[];
  ticks: SceneTick[];
  makespanLabel: string;
}

const LANE_HEIGHT = 34;
const LANE_GAP = 8;
const BAR_INSET = 4;
const TOP_PAD = 10;
const AXIS_HEIGHT = 28;
const TICK_COUNT = 5;

export function fmt(value: number): string {
  return value.toFixed(3);
}

export function layoutGantt(
  doc: GanttDoc,
  width = 860,
  chartLeft = 140,
): GanttScene {
  const plotWidth = width - chartLeft - 20;
  // Zero-makespan documents still draw lanes; span 1 avoids dividing by 0.
  const span = doc.makespan > 0 ? doc.makespan : 1.0;
  const scale = (t: number) => chartLeft + (t / span) * plotWidth;

  const lanes: SceneLane[] = doc.rows.map((row, i) => ({
    label: row.label,
    y: TOP_PAD + i * (LANE_HEIGHT + LANE_GAP),
    height: LANE_HEIGHT,
  }));

  const bars: SceneBar[] = [];
  doc.rows.forEach((row, i) => {
    const laneY = TOP_PAD + i * (LANE_HEIGHT + LANE_GAP);
    for (const bar of row.bars) {
      const x0 = scale(bar.start);
      const x1 = scale(bar.finish);
      bars.push({
        task: bar.task,
        name: bar.name,
        x: x0,
        y: laneY + BAR_INSET,
        // degenerate intervals stay visible as slivers
        width: Math.max(x1 - x0, 1),
        height: LANE_HEIGHT - 2 * BAR_INSET,
        label: bar.name,
        hover: `${bar.name}: start ${fmt(bar.start)}, finish ${fmt(bar.finish)}, cost ${fmt(bar.cost)}`,
        start: bar.start,
        finish: bar.finish,
        cost: bar.cost,
      });
    }
  });

  const ticks: SceneTick[] = [];
  for (let i = 0; i <= TICK_COUNT; i++) {
    const t = (doc.makespan * i) / TICK_COUNT;
    ticks.push({ x: scale(t), label: fmt(t) });
  }

  const height =
    TOP_PAD + lanes.length * (LANE_HEIGHT + LANE_GAP) + AXIS_HEIGHT;
  return {
    width,
    height,
    chartLeft,
    lanes,
    bars,
    ticks,
    makespanLabel: fmt(doc.makespan),
  };
}

/** Lines for the per-resource info panel next to the chart. */
export function resourceSummary(
  utilization: Record<string, number>,
): string[] {
  return Object.entries(utilization).map(
    ([name, u]) => `${name}: utilization ${fmt(u)}`,
  );
}

/** Lines for the per-task info panel, one per completed task. */
export function taskSummary(doc: GanttDoc): string[] {
  const entries: { bar: { task: number }; line: string }[] = [];
  for (const row of doc.rows) {
    for (const bar of row.bars) {
      entries.push({
        bar,
        line:
          `${bar.name} on ${row.label}: ` +
          `[${fmt(bar.start)}, ${fmt(bar.finish)}) cost ${fmt(bar.cost)}`,
      });
    }
  }
  entries.sort((a, b) => a.bar.task - b.bar.task);
  return entries.map((e) => e.line);
}
