"""Experiment orchestration: plan at time zero, then replay under the kernel.

One experiment wires four kinds of entities into a :class:`~.simcore.Kernel`:
an information service, one entity per resource, a broker, and a completion
collector. Resources register at t=0, the broker discovers them, plans the
whole application with min-min while the clock still reads zero, reserves
every slot, and dispatches each task to fire at its reserved start. The
resource runs the reserved task and reports completion to the collector.

Dispatch and completion use the exact start/duration floats from the plan,
so the simulated timeline must reproduce the planned one bit for bit; any
divergence raises InternalMismatch because it can only be a bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dag import DagApp, DagStructureError, validate
from .errors import (ContractViolation, InternalMismatch, ResourceConfigError,
                     SimulationError)
from .grid import Reservation, ReservationCalendar, ResourceRegistry, ResourceSpec
from .scheduler import (ALGORITHMS, FASTEST_FIRST, MIN_MIN, RESOURCE_ORDERS,
                        MinMinScheduler, PlanningError, SchedulePlan)
from .simcore import Kernel, Receive

# Message tags.
REGISTER = "REGISTER"
DISCOVER = "DISCOVER"
REGISTRY_REPLY = "REGISTRY_REPLY"
RESERVE = "RESERVE"
RESERVE_ACK = "RESERVE_ACK"
DISPATCH = "DISPATCH"
TASK_DONE = "TASK_DONE"
ALL_DONE = "ALL_DONE"
SHUTDOWN = "SHUTDOWN"


@dataclass(frozen=True)
class TaskCompletion:
    """One task's observed execution, as reported to the collector."""

    task: int
    resource: int
    machine: int
    pe: int
    start: float
    finish: float
    cost: float


@dataclass(frozen=True)
class ExperimentConfig:
    dag: DagApp
    resources: Sequence[ResourceSpec]
    algorithm: str = MIN_MIN
    resource_order: str = FASTEST_FIRST
    trace: bool = False


@dataclass(frozen=True)
class ExperimentResult:
    plan: SchedulePlan
    completions: tuple  # TaskCompletion, in collector arrival order
    makespan: float
    total_cost: float
    utilization: dict  # resource name -> busy fraction, registration order
    events_processed: int
    final_clock: float
    resource_specs: tuple = field(default=(), repr=False)  # registration order
    task_names: dict = field(default_factory=dict, repr=False)
    trace: tuple = field(default=(), repr=False)


def run_reserved_task(reservation: Reservation, machine: int, pe: int,
                      now: float) -> float:
    """Start a task against its reservation; returns the completion time.

    The dispatch must land on the reserved PE exactly at the reserved start.
    """
    if (reservation.pe.machine_index, reservation.pe.pe_index) != (machine, pe):
        raise SimulationError(
            f"task {reservation.task_id} dispatched to PE ({machine}, {pe}) "
            f"but reserved on ({reservation.pe.machine_index}, "
            f"{reservation.pe.pe_index})")
    if reservation.start != now:
        raise SimulationError(
            f"task {reservation.task_id} dispatched at t={now} but reserved "
            f"for t={reservation.start}")
    return now + reservation.duration


def collect_completions(completions: Sequence[TaskCompletion],
                        expected: Sequence[int]) -> tuple:
    """Check one completion arrived per expected task; keeps arrival order."""
    seen = set()
    for c in completions:
        if c.task in seen:
            raise SimulationError(f"task {c.task} completed twice")
        seen.add(c.task)
    missing = sorted(set(expected) - seen)
    if missing:
        raise SimulationError(
            "tasks never completed: " + " ".join(str(t) for t in missing))
    stray = sorted(seen - set(expected))
    if stray:
        raise SimulationError(
            "completions for unknown tasks: " + " ".join(str(t) for t in stray))
    return tuple(completions)


def utilization(plan: SchedulePlan, entries: Sequence,
                makespan: float) -> dict:
    """Busy fraction per resource: reserved seconds over makespan x PE count."""
    busy = {en.resource_id: 0.0 for en in entries}
    for a in plan.assignments:
        busy[a.resource] += a.duration
    out = {}
    for en in entries:
        capacity = makespan * en.spec.total_pes
        out[en.spec.name] = busy[en.resource_id] / capacity if capacity > 0 else 0.0
    return out


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run one full plan-and-simulate experiment; deterministic end to end."""
    dag = config.dag
    if not dag.validated:
        errors = validate(dag)
        if errors:
            exc = DagStructureError(
                "dag failed validation: "
                + "; ".join(str(e) for e in errors))
            exc.errors = errors
            raise exc
    if config.algorithm not in ALGORITHMS:
        raise ContractViolation(f"unknown algorithm {config.algorithm!r}")
    if not config.resources:
        raise PlanningError("no resources discovered")
    if config.resource_order not in RESOURCE_ORDERS:
        raise ContractViolation(
            f"unknown resource order {config.resource_order!r}")
    names = set()
    for spec in config.resources:
        if spec.name in names:
            raise ResourceConfigError(
                "name", f"resource {spec.name!r} already registered")
        names.add(spec.name)

    kernel = Kernel(trace=config.trace)
    holder: dict = {}
    completions: list = []

    def gis(ctx):
        registry = ResourceRegistry()
        while True:
            ev = yield Receive()
            if ev.tag == REGISTER:
                registry.register(ev.payload, at_time=ctx.now)
            elif ev.tag == DISCOVER:
                ctx.schedule(ev.src, 0.0, REGISTRY_REPLY,
                             tuple(registry.discover()))
            elif ev.tag == SHUTDOWN:
                return
            else:
                raise SimulationError(f"unexpected tag {ev.tag}")

    def make_resource(spec: ResourceSpec, rid: int):
        def resource(ctx):
            calendar = ReservationCalendar(rid, spec)
            held: dict = {}
            ctx.schedule(gis_id, 0.0, REGISTER, spec)
            while True:
                ev = yield Receive()
                if ev.tag == RESERVE:
                    task, machine, pe, start, duration = ev.payload
                    res = calendar.commit(task, machine, pe, start, duration)
                    held[task] = res
                    ctx.schedule(ev.src, 0.0, RESERVE_ACK, (task, res.id))
                elif ev.tag == DISPATCH:
                    task, machine, pe = ev.payload
                    if task not in held:
                        raise SimulationError(
                            f"dispatch for unreserved task {task}")
                    res = held.pop(task)
                    finish = run_reserved_task(res, machine, pe, ctx.now)
                    cost = res.duration * spec.cost_per_sec
                    ctx.schedule(collector_id, res.duration, TASK_DONE,
                                 TaskCompletion(task, rid, machine, pe,
                                                ctx.now, finish, cost))
                elif ev.tag == SHUTDOWN:
                    return
                else:
                    raise SimulationError(f"unexpected tag {ev.tag}")
        return resource

    def broker(ctx):
        ctx.schedule(gis_id, 0.0, DISCOVER)
        ev = yield Receive(REGISTRY_REPLY)
        entries = list(ev.payload)
        plan = MinMinScheduler(dag, entries, config.resource_order).schedule()
        holder["plan"] = plan
        holder["entries"] = entries
        for a in plan.assignments:
            ctx.schedule(resource_eids[a.resource], 0.0, RESERVE,
                         (a.task, a.machine, a.pe, a.start, a.duration))
            ack = yield Receive(RESERVE_ACK)
            if ack.payload[0] != a.task:
                raise SimulationError(
                    f"acknowledgement for task {ack.payload[0]} while "
                    f"reserving task {a.task}")
        for a in plan.assignments:
            # now is 0.0, so the dispatch fires exactly at the planned start
            ctx.schedule(resource_eids[a.resource], a.start, DISPATCH,
                         (a.task, a.machine, a.pe))
        yield Receive(ALL_DONE)
        ctx.schedule(gis_id, 0.0, SHUTDOWN)
        for eid in resource_eids:
            ctx.schedule(eid, 0.0, SHUTDOWN)

    def collector(ctx):
        expected = len(dag.tasks)
        while len(completions) < expected:
            ev = yield Receive(TASK_DONE)
            completions.append(ev.payload)
        ctx.schedule(broker_id, 0.0, ALL_DONE)

    gis_id = kernel.register_entity("gis", gis)
    resource_eids = [
        kernel.register_entity(f"resource:{spec.name}",
                               make_resource(spec, rid))
        for rid, spec in enumerate(config.resources)
    ]
    broker_id = kernel.register_entity("broker", broker)
    collector_id = kernel.register_entity("collector", collector)

    report = kernel.run()
    if report.starved:
        collect_completions(completions, dag.task_ids())
        raise SimulationError(
            "entities starved: " + ", ".join(report.starved))

    ordered = collect_completions(completions, dag.task_ids())
    plan = holder["plan"]

    by_task = {a.task: a for a in plan.assignments}
    prev_finish = None
    for c in ordered:
        a = by_task[c.task]
        if ((c.resource, c.machine, c.pe) != (a.resource, a.machine, a.pe)
                or c.start != a.start or c.finish != a.finish
                or c.cost != a.cost):
            raise InternalMismatch(
                f"task {c.task}: simulated "
                f"(r{c.resource} m{c.machine} pe{c.pe} "
                f"[{c.start}, {c.finish})) differs from planned "
                f"(r{a.resource} m{a.machine} pe{a.pe} "
                f"[{a.start}, {a.finish}))")
        if prev_finish is not None and c.finish < prev_finish:
            raise InternalMismatch(
                f"task {c.task} collected out of completion order")
        prev_finish = c.finish
    sim_makespan = max(c.finish for c in ordered)
    if sim_makespan != plan.makespan:
        raise InternalMismatch(
            f"simulated makespan {sim_makespan} differs from planned "
            f"{plan.makespan}")

    return ExperimentResult(
        plan=plan,
        completions=ordered,
        makespan=plan.makespan,
        total_cost=plan.total_cost,
        utilization=utilization(plan, holder["entries"], plan.makespan),
        events_processed=report.events_processed,
        final_clock=report.final_clock,
        resource_specs=tuple(en.spec for en in holder["entries"]),
        task_names={t.id: t.name for t in dag.tasks},
        trace=tuple(kernel.trace) if kernel.trace is not None else (),
    )
