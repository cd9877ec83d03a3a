"""Static planning: the scheduler contract and the min-min planner.

The planner repeatedly looks at the ready frontier (tasks whose parents are
all assigned), probes every task x resource pair for its earliest completion
time under advance reservation, and commits the single task whose best
completion time is smallest. Probing never mutates calendars; only the
chosen task's reservation does. Ties are broken by lowest task id, then by
position in the resource ordering.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

from .dag import DagApp, immediate_unscheduled_tasks
from .errors import ContractViolation, DagSchedError
from .grid import (PEId, RegistryEntry, ReservationCalendar,
                   execution_duration, transfer_duration)

FASTEST_FIRST = "fastest"
CHEAPEST_FIRST = "cheapest"
RESOURCE_ORDERS = (FASTEST_FIRST, CHEAPEST_FIRST)

MIN_MIN = "min-min"
ALGORITHMS = (MIN_MIN,)


class PlanningError(DagSchedError):
    """Planning cannot proceed (for example, no resources discovered)."""


@dataclass(frozen=True)
class Assignment:
    task: int
    resource: int
    machine: int
    pe: int
    start: float
    finish: float
    cost: float
    duration: float  # kept separately so simulation replays the exact value


@dataclass(frozen=True)
class EctEntry:
    """One completion-time probe with its breakdown."""

    task: int
    resource: int
    data_available: float
    start: float
    pe: PEId
    exec_duration: float
    ect: float


class EctTable:
    """Probe results of one planning iteration, keyed by (task, resource)."""

    def __init__(self):
        self.entries = {}

    def record(self, entry: EctEntry) -> None:
        self.entries[(entry.task, entry.resource)] = entry

    def get(self, task: int, resource: int) -> EctEntry:
        return self.entries[(task, resource)]


@dataclass(frozen=True)
class SchedulePlan:
    assignments: tuple  # one Assignment per task, ascending task id
    makespan: float
    total_cost: float
    resource_order_used: tuple  # resource ids, planning order

    def assignment_for(self, task: int) -> Assignment:
        for a in self.assignments:
            if a.task == task:
                return a
        raise ContractViolation(f"task {task} not in plan")


def order_resources(entries: list, key: str = FASTEST_FIRST) -> list:
    """Sort registry entries for planning; stable, so ties keep registration order."""
    if not entries:
        raise PlanningError("no resources discovered")
    if key == FASTEST_FIRST:
        return sorted(entries, key=lambda en: en.spec.pe_rating_mips,
                      reverse=True)
    if key == CHEAPEST_FIRST:
        return sorted(entries, key=lambda en: en.spec.cost_per_sec)
    raise ContractViolation(f"unknown resource order {key!r}")


def data_available_time(dag: DagApp, task_id: int, dst: RegistryEntry,
                        assignments: dict, entries_by_id: dict) -> float:
    """Earliest time every parent output can be present on `dst`."""
    latest = 0.0
    for parent, nbytes in dag.parents(task_id):
        try:
            pa = assignments[parent]
        except KeyError:
            raise ContractViolation(
                f"parent {parent} of task {task_id} not assigned") from None
        arrival = pa.finish + transfer_duration(
            nbytes, entries_by_id[pa.resource], dst)
        if arrival > latest:
            latest = arrival
    return latest


def ect_probe(dag: DagApp, task_id: int, entry: RegistryEntry,
              assignments: dict, entries_by_id: dict,
              calendar: ReservationCalendar) -> EctEntry:
    """Earliest completion of `task_id` on `entry`, without reserving."""
    available = data_available_time(dag, task_id, entry, assignments,
                                    entries_by_id)
    duration = execution_duration(dag.task(task_id).length_mi, entry.spec)
    start, pe = calendar.earliest_feasible_start(available, duration)
    return EctEntry(task=task_id, resource=entry.resource_id,
                    data_available=available, start=start, pe=pe,
                    exec_duration=duration, ect=start + duration)


class StaticScheduler(ABC):
    """Contract every static scheduling algorithm plugs into.

    Status stays false until every task of the application holds an
    assignment, then flips true.
    """

    def __init__(self, dag: DagApp):
        if not dag.validated:
            raise ContractViolation("scheduler requires a validated dag")
        self._dag = dag
        self._assignments: dict = {}

    @abstractmethod
    def schedule(self) -> SchedulePlan:
        """Run the algorithm and return the completed plan."""

    def get_immediate_unscheduled_tasks(self) -> list:
        return immediate_unscheduled_tasks(self._dag,
                                           set(self._assignments))

    def store_task_assignment(self, assignment: Assignment) -> None:
        if assignment.task in self._assignments:
            raise ContractViolation(
                f"task {assignment.task} already assigned")
        self._assignments[assignment.task] = assignment

    def get_schedule_status(self) -> bool:
        return len(self._assignments) == len(self._dag.tasks)


class MinMinScheduler(StaticScheduler):
    """Frontier-based min-min with advance reservation.

    One task is committed per outer iteration; the frontier and every
    completion-time probe are recomputed from scratch after each commit,
    exactly as a literal reading of the algorithm demands.
    """

    def __init__(self, dag: DagApp, entries: list,
                 order: str = FASTEST_FIRST):
        super().__init__(dag)
        self._ordered = order_resources(entries, order)
        self._entries_by_id = {en.resource_id: en for en in self._ordered}
        self._calendars = {
            en.resource_id: ReservationCalendar(en.resource_id, en.spec)
            for en in self._ordered
        }
        self.last_table: Optional[EctTable] = None

    def calendar(self, resource_id: int) -> ReservationCalendar:
        return self._calendars[resource_id]

    def schedule(self) -> SchedulePlan:
        if self.get_schedule_status():
            raise ContractViolation("schedule() already completed")
        total = len(self._dag.tasks)
        while len(self._assignments) < total:
            ready = self.get_immediate_unscheduled_tasks()
            table = EctTable()
            best: Optional[EctEntry] = None
            for tid in ready:  # ascending id: first strict win = lowest id
                task_best: Optional[EctEntry] = None
                for en in self._ordered:  # earliest position wins ect ties
                    probe = ect_probe(self._dag, tid, en, self._assignments,
                                      self._entries_by_id,
                                      self._calendars[en.resource_id])
                    table.record(probe)
                    if task_best is None or probe.ect < task_best.ect:
                        task_best = probe
                if best is None or task_best.ect < best.ect:
                    best = task_best
            self.last_table = table

            spec = self._entries_by_id[best.resource].spec
            self._calendars[best.resource].commit(
                best.task, best.pe.machine_index, best.pe.pe_index,
                best.start, best.exec_duration)
            self.store_task_assignment(Assignment(
                task=best.task, resource=best.resource,
                machine=best.pe.machine_index, pe=best.pe.pe_index,
                start=best.start, finish=best.ect,
                cost=best.exec_duration * spec.cost_per_sec,
                duration=best.exec_duration))

        assignments = tuple(self._assignments[tid]
                            for tid in sorted(self._assignments))
        makespan = max(a.finish for a in assignments)
        total_cost = sum(a.cost for a in assignments)
        return SchedulePlan(
            assignments=assignments,
            makespan=makespan,
            total_cost=total_cost,
            resource_order_used=tuple(en.resource_id
                                      for en in self._ordered),
        )


def min_min_schedule(dag: DagApp, entries: list,
                     order: str = FASTEST_FIRST) -> SchedulePlan:
    """Plan `dag` over `entries` with min-min; fresh calendars, no side effects."""
    return MinMinScheduler(dag, entries, order).schedule()
