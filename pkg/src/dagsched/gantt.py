"""Gantt rendering of an experiment result.

Rows are processing elements, not whole resources, so concurrent tasks on
a multi-PE resource never overlap visually. Three output formats share one
GanttModel: a fixed-width text timeline, a standalone SVG, and the
structured form the web UI consumes. Human formats print times with fixed
3 decimals; the structured form keeps full precision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .broker import ExperimentResult
from .errors import ContractViolation
from .io import dumps_canonical

GANTT_FORMATS = ("text", "svg", "structured")

_TEXT_WIDTH = 60  # columns for the scaled bar area


@dataclass(frozen=True)
class GanttBar:
    task: int
    name: str
    start: float
    finish: float
    cost: float


@dataclass(frozen=True)
class GanttRow:
    resource: str
    machine: int
    pe: int
    bars: tuple  # GanttBar, ascending start, pairwise disjoint

    @property
    def label(self) -> str:
        return f"{self.resource}/{self.machine}/{self.pe}"


@dataclass(frozen=True)
class GanttModel:
    rows: tuple  # one GanttRow per PE, registry order
    time_axis: tuple  # (0.0, makespan)
    makespan: float


def build_gantt(result: ExperimentResult) -> GanttModel:
    """Arrange the plan's assignments into one row per processing element."""
    per_pe: dict = {}
    for a in result.plan.assignments:
        per_pe.setdefault((a.resource, a.machine, a.pe), []).append(a)

    rows = []
    for rid, spec in enumerate(result.resource_specs):
        for machine in range(spec.num_machines):
            for pe in range(spec.pes_per_machine):
                assigned = sorted(per_pe.get((rid, machine, pe), []),
                                  key=lambda a: a.start)
                bars = tuple(
                    GanttBar(task=a.task,
                             name=result.task_names.get(a.task, str(a.task)),
                             start=a.start, finish=a.finish, cost=a.cost)
                    for a in assigned)
                rows.append(GanttRow(spec.name, machine, pe, bars))
    return GanttModel(rows=tuple(rows), time_axis=(0.0, result.makespan),
                      makespan=result.makespan)


def gantt_to_jsonable(model: GanttModel) -> dict:
    return {
        "rows": [
            {"label": row.label, "resource": row.resource,
             "machine": row.machine, "pe": row.pe,
             "bars": [{"task": b.task, "name": b.name, "start": b.start,
                       "finish": b.finish, "cost": b.cost}
                      for b in row.bars]}
            for row in model.rows
        ],
        "time_axis": list(model.time_axis),
        "makespan": model.makespan,
    }


def render_text(model: GanttModel) -> str:
    """Scaled ASCII lanes plus an exact interval listing per task."""
    span = model.makespan if model.makespan > 0 else 1.0
    label_w = max(len(r.label) for r in model.rows)
    lines = [f"gantt 0.000 .. {model.makespan:.3f} s"]
    for row in model.rows:
        lane = [" "] * _TEXT_WIDTH
        for b in row.bars:
            lo = int(b.start / span * _TEXT_WIDTH)
            hi = int(b.finish / span * _TEXT_WIDTH)
            hi = min(max(hi, lo + 1), _TEXT_WIDTH)
            mark = str(b.task % 10)
            for i in range(lo, hi):
                lane[i] = mark
        lines.append(f"{row.label:<{label_w}} |{''.join(lane)}|")
    for b, row in sorted(((b, row) for row in model.rows for b in row.bars),
                         key=lambda pair: pair[0].task):
        lines.append(f"  {b.task} {b.name} [{b.start:.3f}, {b.finish:.3f})"
                     f" on {row.label} cost {b.cost:.3f}")
    return "\n".join(lines) + "\n"


def render_svg(model: GanttModel) -> str:
    """Standalone SVG: one labeled rect per bar, one lane per PE."""
    label_w, row_h, bar_h, chart_w = 150, 26, 18, 640
    span = model.makespan if model.makespan > 0 else 1.0
    width = label_w + chart_w + 10
    height = row_h * len(model.rows) + 30

    def x(t: float) -> float:
        return label_w + t / span * chart_w

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="12">'
    ]
    for i, row in enumerate(model.rows):
        y = 10 + i * row_h
        parts.append(f'<text x="4" y="{y + 13:.1f}">{row.label}</text>')
        for b in row.bars:
            bx = x(b.start)
            bw = max(x(b.finish) - bx, 1.0)
            parts.append(
                f'<rect x="{bx:.2f}" y="{y:.1f}" width="{bw:.2f}" '
                f'height="{bar_h}" fill="#7aa6c2" stroke="#1f3a4d">'
                f'<title>{b.name} [{b.start:.3f}, {b.finish:.3f}) '
                f'cost {b.cost:.3f}</title></rect>')
            parts.append(
                f'<text x="{bx + 2:.2f}" y="{y + 13:.1f}">{b.name}</text>')
    axis_y = 10 + len(model.rows) * row_h
    parts.append(
        f'<line x1="{label_w}" y1="{axis_y}" x2="{label_w + chart_w}" '
        f'y2="{axis_y}" stroke="#333"/>')
    parts.append(f'<text x="{label_w}" y="{axis_y + 14}">0.000</text>')
    parts.append(
        f'<text x="{label_w + chart_w - 60}" y="{axis_y + 14}">'
        f'{model.makespan:.3f}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_gantt(result: ExperimentResult, format: str = "text") -> bytes:
    model = build_gantt(result)
    if format == "text":
        return render_text(model).encode("utf-8")
    if format == "svg":
        return render_svg(model).encode("utf-8")
    if format == "structured":
        return dumps_canonical(gantt_to_jsonable(model)).encode("utf-8")
    raise ContractViolation(f"unknown gantt format {format!r}")
