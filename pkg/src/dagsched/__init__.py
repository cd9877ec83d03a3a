"""Deterministic discrete-event simulation of static DAG scheduling.

Workflow applications (directed acyclic task graphs with computation and
data-volume weights) are planned onto heterogeneous resources with the
min-min earliest-completion-time heuristic under advance reservation, then
replayed on an event kernel that must reproduce the plan exactly.
"""

from .broker import (ExperimentConfig, ExperimentResult, TaskCompletion,
                     collect_completions, run_experiment, utilization)
from .dag import (CYCLE, DANGLING_INTERMEDIATE, DUPLICATE_EDGE, EMPTY_DAG,
                  FLOATING_TASK, MULTIPLE_ENTRY, MULTIPLE_EXIT, NO_ENTRY,
                  NO_EXIT, SELF_LOOP, DagApp, DagCycleError,
                  DagStructureError, DependencyEdge, TaskKind, TaskNode,
                  ValidationError, entry_task, exit_task,
                  immediate_unscheduled_tasks, task_kind, topological_order,
                  validate)
from .errors import (ContractViolation, DagSchedError, InternalMismatch,
                     ParseError, ReservationConflict, ResourceConfigError,
                     SimulationError)
from .gantt import (GanttBar, GanttModel, GanttRow, build_gantt,
                    gantt_to_jsonable, render_gantt)
from .grid import (PEId, RegistryEntry, Reservation, ReservationCalendar,
                   ResourceRegistry, ResourceSpec, execution_duration,
                   transfer_duration)
from .io import (load_dag, load_resources, save_dag, save_resources,
                 save_result)
from .scheduler import (ALGORITHMS, CHEAPEST_FIRST, FASTEST_FIRST, MIN_MIN,
                        RESOURCE_ORDERS, Assignment, EctEntry, EctTable,
                        MinMinScheduler, PlanningError, SchedulePlan,
                        StaticScheduler, data_available_time, ect_probe,
                        min_min_schedule, order_resources)
from .simcore import (EntityContext, Event, Kernel, Receive, SimReport,
                      TraceRecord)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "CHEAPEST_FIRST", "CYCLE", "DANGLING_INTERMEDIATE",
    "DUPLICATE_EDGE", "EMPTY_DAG", "FASTEST_FIRST", "FLOATING_TASK",
    "MIN_MIN", "MULTIPLE_ENTRY", "MULTIPLE_EXIT", "NO_ENTRY", "NO_EXIT",
    "RESOURCE_ORDERS", "SELF_LOOP",
    "Assignment", "ContractViolation", "DagApp", "DagCycleError",
    "DagSchedError", "DagStructureError", "DependencyEdge", "EctEntry",
    "EctTable", "EntityContext", "Event", "ExperimentConfig",
    "ExperimentResult", "GanttBar", "GanttModel", "GanttRow",
    "InternalMismatch", "Kernel", "MinMinScheduler", "PEId", "ParseError",
    "PlanningError", "Receive", "RegistryEntry", "Reservation",
    "ReservationCalendar", "ReservationConflict", "ResourceConfigError",
    "ResourceRegistry", "ResourceSpec", "SchedulePlan", "SimReport",
    "SimulationError", "StaticScheduler", "TaskCompletion", "TaskKind",
    "TaskNode", "TraceRecord", "ValidationError",
    "build_gantt", "collect_completions", "data_available_time", "ect_probe",
    "entry_task", "execution_duration", "exit_task", "gantt_to_jsonable",
    "immediate_unscheduled_tasks", "load_dag", "load_resources",
    "min_min_schedule", "order_resources", "render_gantt", "run_experiment",
    "save_dag", "save_resources", "save_result", "task_kind",
    "topological_order", "transfer_duration", "utilization", "validate",
]
