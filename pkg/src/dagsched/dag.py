"""Task-graph model: nodes, weighted dependency edges, validation, traversal.

A workflow application is a directed acyclic graph whose nodes carry a
computation amount (million instructions) and whose edges carry a data
volume (bytes). Validation enforces the shape rules a schedulable
application must satisfy: acyclic, exactly one entry and one exit task,
no floating tasks, no dead-end intermediates.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import ContractViolation, DagSchedError

TaskId = int

# Machine-readable validation codes.
CYCLE = "Cycle"
MULTIPLE_ENTRY = "MultipleEntry"
MULTIPLE_EXIT = "MultipleExit"
NO_ENTRY = "NoEntry"
NO_EXIT = "NoExit"
DANGLING_INTERMEDIATE = "DanglingIntermediate"
FLOATING_TASK = "FloatingTask"
DUPLICATE_EDGE = "DuplicateEdge"
SELF_LOOP = "SelfLoop"
EMPTY_DAG = "EmptyDag"


class TaskKind(Enum):
    ENTRY = "entry"
    INTERMEDIATE = "intermediate"
    EXIT = "exit"


class DagStructureError(DagSchedError):
    """The raw node/edge lists cannot form a task graph at all."""


class DagCycleError(DagSchedError):
    """Raised by topological_order when the graph contains a cycle."""

    def __init__(self, task_ids: Sequence[TaskId]):
        super().__init__(f"cycle through tasks {sorted(task_ids)}")
        self.task_ids = tuple(sorted(task_ids))


@dataclass(frozen=True)
class TaskNode:
    id: TaskId
    name: str
    length_mi: float
    x: Optional[float] = None  # canvas position, carried through untouched
    y: Optional[float] = None
    extra: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class DependencyEdge:
    src: TaskId
    dst: TaskId
    bytes: float
    extra: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ValidationError:
    """One violation; `ids` are the offending task ids (or src, dst for edges)."""

    code: str
    ids: tuple = ()

    def __str__(self) -> str:
        if not self.ids:
            return self.code
        return f"{self.code} {' '.join(str(i) for i in self.ids)}"


class DagApp:
    """An immutable task graph.

    Construction checks only well-formedness (unique ids, edges referencing
    known tasks, positive lengths, non-negative byte volumes). Shape rules
    are the job of :func:`validate`, which reports every violation instead
    of raising, so a UI can annotate all offenders in one pass.
    """

    def __init__(self, name: str, tasks: Iterable[TaskNode],
                 edges: Iterable[DependencyEdge], extra: Optional[dict] = None):
        self.name = name
        self.tasks = tuple(tasks)
        self.edges = tuple(edges)
        self.extra = dict(extra or {})
        self._validated = False

        self._by_id = {}
        for t in self.tasks:
            if t.id in self._by_id:
                raise DagStructureError(f"duplicate task id {t.id}")
            if not (t.length_mi > 0):
                raise DagStructureError(f"task {t.id}: length_mi must be > 0")
            self._by_id[t.id] = t

        self._parents = {t.id: [] for t in self.tasks}
        self._children = {t.id: [] for t in self.tasks}
        for e in self.edges:
            if e.src not in self._by_id:
                raise DagStructureError(f"edge references unknown task {e.src}")
            if e.dst not in self._by_id:
                raise DagStructureError(f"edge references unknown task {e.dst}")
            if e.bytes < 0:
                raise DagStructureError(
                    f"edge {e.src}->{e.dst}: bytes must be >= 0")
            self._parents[e.dst].append((e.src, e.bytes))
            self._children[e.src].append((e.dst, e.bytes))
        for adj in (self._parents, self._children):
            for lst in adj.values():
                lst.sort()

    @property
    def validated(self) -> bool:
        return self._validated

    def task(self, task_id: TaskId) -> TaskNode:
        try:
            return self._by_id[task_id]
        except KeyError:
            raise ContractViolation(f"unknown task {task_id}") from None

    def task_ids(self) -> list:
        return sorted(self._by_id)

    def parents(self, task_id: TaskId) -> list:
        """(parent id, bytes) pairs for the incoming edges, ordered by id."""
        self.task(task_id)
        return list(self._parents[task_id])

    def children(self, task_id: TaskId) -> list:
        """(child id, bytes) pairs for the outgoing edges, ordered by id."""
        self.task(task_id)
        return list(self._children[task_id])


def _simple_edges(dag: DagApp) -> set:
    """Unique (src, dst) pairs with self-loops dropped."""
    return {(e.src, e.dst) for e in dag.edges if e.src != e.dst}


def _sccs(nodes: Sequence[TaskId], edges: set) -> list:
    """Strongly connected components of size >= 2, iterative Tarjan."""
    succ = {n: [] for n in nodes}
    for s, d in sorted(edges):
        succ[s].append(d)

    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = [0]
    out = []

    for root in sorted(nodes):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work[-1]
            if i == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            for j in range(i, len(succ[node])):
                nxt = succ[node][j]
                if nxt not in index:
                    work[-1] = (node, j + 1)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                if len(comp) > 1:
                    out.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    out.sort()
    return out


def _longest_depths(nodes: Sequence[TaskId], edges: set) -> dict:
    """Longest edge-count path from any source, per node. Acyclic input only."""
    indeg = {n: 0 for n in nodes}
    succ = {n: [] for n in nodes}
    for s, d in edges:
        indeg[d] += 1
        succ[s].append(d)
    depth = {n: 0 for n in nodes}
    ready = [n for n in sorted(nodes) if indeg[n] == 0]
    heapq.heapify(ready)
    while ready:
        n = heapq.heappop(ready)
        for c in succ[n]:
            depth[c] = max(depth[c], depth[n] + 1)
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, c)
    return depth


def validate(dag: DagApp) -> list:
    """Check every shape rule and return all violations (empty list = Ok).

    A clean verdict marks the graph as validated, unlocking the traversal
    helpers that assume a unique entry/exit. The rule stages:

    * an empty graph is reported alone, nothing else is meaningful;
    * self-loops and duplicate edges are per-edge faults; the remaining
      stages run on the simplified graph (unique pairs, no loops);
    * a task touching no other task is floating (a single-task graph is
      legal: the task is simultaneously entry and exit);
    * cycles are reported per strongly connected component;
    * entry/exit uniqueness is computed over non-floating tasks. On acyclic
      graphs an in/out-degree-0 task that sits strictly shallower than the
      deepest candidate is reported as a dangling intermediate (an abandoned
      branch) rather than as an extra entry/exit.
    """
    errors = []
    if not dag.tasks:
        return [ValidationError(EMPTY_DAG)]

    seen_pairs = {}
    self_loops = []
    for e in dag.edges:
        if e.src == e.dst:
            if e.src not in self_loops:
                self_loops.append(e.src)
            continue
        seen_pairs[(e.src, e.dst)] = seen_pairs.get((e.src, e.dst), 0) + 1
    for tid in sorted(self_loops):
        errors.append(ValidationError(SELF_LOOP, (tid,)))
    for pair in sorted(p for p, n in seen_pairs.items() if n > 1):
        errors.append(ValidationError(DUPLICATE_EDGE, pair))

    edges = _simple_edges(dag)
    degree = {t.id: 0 for t in dag.tasks}
    indeg = {t.id: 0 for t in dag.tasks}
    outdeg = {t.id: 0 for t in dag.tasks}
    for s, d in edges:
        degree[s] += 1
        degree[d] += 1
        indeg[d] += 1
        outdeg[s] += 1

    floating = []
    if len(dag.tasks) > 1:
        floating = [tid for tid in sorted(degree) if degree[tid] == 0]
        for tid in floating:
            errors.append(ValidationError(FLOATING_TASK, (tid,)))

    cycles = _sccs(sorted(degree), edges)
    for comp in cycles:
        errors.append(ValidationError(CYCLE, comp))

    live = [tid for tid in sorted(degree) if tid not in floating]
    if live:
        sources = [t for t in live if indeg[t] == 0]
        sinks = [t for t in live if outdeg[t] == 0]
        if cycles:
            # Degrees stay meaningful, but path depths do not; fall back to
            # plain multiplicity.
            if not sources:
                errors.append(ValidationError(NO_ENTRY))
            elif len(sources) > 1:
                errors.append(ValidationError(MULTIPLE_ENTRY, tuple(sources)))
            if not sinks:
                errors.append(ValidationError(NO_EXIT))
            elif len(sinks) > 1:
                errors.append(ValidationError(MULTIPLE_EXIT, tuple(sinks)))
        else:
            live_edges = {(s, d) for s, d in edges
                          if s not in floating and d not in floating}
            depth = _longest_depths(live, live_edges)
            height = _longest_depths(live, {(d, s) for s, d in live_edges})
            dangling = []

            max_h = max(height[t] for t in sources)
            main_sources = [t for t in sources if height[t] == max_h]
            dangling += [t for t in sources if height[t] < max_h]
            if len(main_sources) > 1:
                errors.append(
                    ValidationError(MULTIPLE_ENTRY, tuple(main_sources)))

            max_d = max(depth[t] for t in sinks)
            main_sinks = [t for t in sinks if depth[t] == max_d]
            dangling += [t for t in sinks if depth[t] < max_d]
            if len(main_sinks) > 1:
                errors.append(ValidationError(MULTIPLE_EXIT, tuple(main_sinks)))

            for tid in sorted(set(dangling)):
                errors.append(ValidationError(DANGLING_INTERMEDIATE, (tid,)))

    if not errors:
        dag._validated = True
    return errors


def _require_validated(dag: DagApp) -> None:
    if not dag.validated:
        raise ContractViolation("dag has not passed validation")


def entry_task(dag: DagApp) -> TaskId:
    """The unique task with no incoming edges."""
    _require_validated(dag)
    incoming = {e.dst for e in dag.edges}
    return min(t.id for t in dag.tasks if t.id not in incoming)


def exit_task(dag: DagApp) -> TaskId:
    """The unique task with no outgoing edges."""
    _require_validated(dag)
    outgoing = {e.src for e in dag.edges}
    return min(t.id for t in dag.tasks if t.id not in outgoing)


def task_kind(dag: DagApp, task_id: TaskId) -> TaskKind:
    """Entry if no parents, exit if no children (entry wins for a lone task)."""
    _require_validated(dag)
    if not dag.parents(task_id):
        return TaskKind.ENTRY
    if not dag.children(task_id):
        return TaskKind.EXIT
    return TaskKind.INTERMEDIATE


def immediate_unscheduled_tasks(dag: DagApp, scheduled: set) -> list:
    """Tasks outside `scheduled` whose parents are all scheduled, ascending.

    `scheduled` must be closed under ancestry; the check catches a planner
    that skipped a dependency.
    """
    _require_validated(dag)
    for tid in scheduled:
        for parent, _ in dag.parents(tid):
            if parent not in scheduled:
                raise ContractViolation(
                    f"scheduled set not ancestry-closed: {tid} in, "
                    f"parent {parent} out")
    ready = []
    for tid in dag.task_ids():
        if tid in scheduled:
            continue
        if all(p in scheduled for p, _ in dag.parents(tid)):
            ready.append(tid)
    return ready


def topological_order(dag: DagApp) -> list:
    """Kahn's algorithm; ties broken by ascending task id."""
    edges = _simple_edges(dag)
    indeg = {t.id: 0 for t in dag.tasks}
    succ = {t.id: [] for t in dag.tasks}
    for s, d in edges:
        indeg[d] += 1
        succ[s].append(d)
    ready = [tid for tid in sorted(indeg) if indeg[tid] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        tid = heapq.heappop(ready)
        order.append(tid)
        for c in succ[tid]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != len(dag.tasks):
        comps = _sccs(sorted(indeg), edges)
        ids = comps[0] if comps else tuple(
            sorted(t for t in indeg if t not in set(order)))
        raise DagCycleError(ids)
    return order
