"""Deterministic discrete-event kernel.

Entities are generator-based processes: a behavior function receives an
:class:`EntityContext` and returns a generator that yields :class:`Receive`
requests and gets events back. Delivery order is a pure function of the
schedule calls: the future event queue pops by (fire_time, seq), so
simultaneous events arrive in insertion order. Events a parked entity is
not currently matching accumulate in its deferred queue and are re-checked,
oldest first, whenever the entity waits again.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .errors import ContractViolation, SimulationError

EntityId = int


@dataclass(frozen=True)
class Event:
    fire_time: float
    seq: int
    src: EntityId
    dst: EntityId
    tag: str
    payload: Any = None


@dataclass(frozen=True)
class TraceRecord:
    time: float
    seq: int
    src: str
    dst: str
    tag: str


@dataclass(frozen=True)
class SimReport:
    final_clock: float
    events_processed: int
    events_scheduled: int
    events_dropped: int  # destination entity had already finished
    events_unpopped: int  # still queued when an `until` cutoff hit
    deferred_pending: int  # delivered but never consumed
    starved: tuple  # names of entities still waiting at the end


class Receive:
    """Yielded by an entity to wait for the next matching event.

    With no filter, matches anything (plain FIFO receive). `tag` matches on
    the event tag; `predicate` is an arbitrary test on the event. Both given
    means both must hold.
    """

    __slots__ = ("tag", "predicate")

    def __init__(self, tag: Optional[str] = None,
                 predicate: Optional[Callable[[Event], bool]] = None):
        self.tag = tag
        self.predicate = predicate

    def matches(self, event: Event) -> bool:
        if self.tag is not None and event.tag != self.tag:
            return False
        if self.predicate is not None and not self.predicate(event):
            return False
        return True


class EntityContext:
    """Handed to each behavior; the entity's window onto the kernel."""

    def __init__(self, kernel: "Kernel", entity_id: EntityId, name: str):
        self._kernel = kernel
        self.id = entity_id
        self.name = name

    @property
    def now(self) -> float:
        return self._kernel.now

    def schedule(self, dst: EntityId, delay: float, tag: str,
                 payload: Any = None) -> int:
        return self._kernel.schedule(self.id, dst, delay, tag, payload)


class _Entity:
    __slots__ = ("id", "name", "behavior", "gen", "waiting", "deferred", "done")

    def __init__(self, entity_id: EntityId, name: str, behavior):
        self.id = entity_id
        self.name = name
        self.behavior = behavior
        self.gen = None
        self.waiting: Optional[Receive] = None
        self.deferred: deque = deque()
        self.done = False


class Kernel:
    """One simulation run: registration, scheduling, then a single run()."""

    def __init__(self, trace: bool = False):
        self._entities: list = []
        self._names: dict = {}
        self._queue: list = []
        self._clock = 0.0
        self._seq = 0
        self._started = False
        self._processed = 0
        self._dropped = 0
        self.trace: Optional[list] = [] if trace else None

    @property
    def now(self) -> float:
        return self._clock

    def register_entity(self, name: str, behavior) -> EntityId:
        """Add an entity; ids are dense from 0 in registration order.

        `behavior` is called once with an :class:`EntityContext` when the
        run starts; it may return a generator (a live process) or None
        (setup only).
        """
        if self._started:
            raise ContractViolation("cannot register entities after run()")
        if name in self._names:
            raise ContractViolation(f"duplicate entity name {name!r}")
        eid = len(self._entities)
        self._entities.append(_Entity(eid, name, behavior))
        self._names[name] = eid
        return eid

    def entity_name(self, entity_id: EntityId) -> str:
        if 0 <= entity_id < len(self._entities):
            return self._entities[entity_id].name
        return "env"

    def schedule(self, src: EntityId, dst: EntityId, delay: float, tag: str,
                 payload: Any = None) -> int:
        """Queue an event at now + delay; returns its sequence number."""
        if delay < 0:
            raise ContractViolation(f"negative delay {delay}")
        if not (0 <= dst < len(self._entities)):
            raise ContractViolation(f"unknown destination entity {dst}")
        event = Event(self._clock + delay, self._seq, src, dst, tag, payload)
        self._seq += 1
        heapq.heappush(self._queue, (event.fire_time, event.seq, event))
        return event.seq

    def run(self, until: Optional[float] = None) -> SimReport:
        """Deliver events in (fire_time, seq) order until the queue drains.

        With `until`, events firing later than it stay queued and the clock
        stops at the last delivered event. The kernel is single-shot.
        """
        if self._started:
            raise ContractViolation("kernel.run() is single-shot")
        if not self._entities:
            raise ContractViolation("no entities registered")
        self._started = True

        for ent in self._entities:
            ctx = EntityContext(self, ent.id, ent.name)
            gen = ent.behavior(ctx)
            if gen is None:
                ent.done = True
                continue
            ent.gen = gen
            self._advance(ent, first=True)

        while self._queue:
            if until is not None and self._queue[0][0] > until:
                break
            _, _, event = heapq.heappop(self._queue)
            self._clock = event.fire_time
            self._deliver(event)

        starved = tuple(e.name for e in self._entities if e.waiting is not None)
        return SimReport(
            final_clock=self._clock,
            events_processed=self._processed,
            events_scheduled=self._seq,
            events_dropped=self._dropped,
            events_unpopped=len(self._queue),
            deferred_pending=sum(len(e.deferred) for e in self._entities),
            starved=starved,
        )

    def _deliver(self, event: Event) -> None:
        ent = self._entities[event.dst]
        if ent.done:
            self._dropped += 1
            return
        self._processed += 1
        if self.trace is not None:
            self.trace.append(TraceRecord(
                event.fire_time, event.seq,
                self.entity_name(event.src), ent.name, event.tag))
        if ent.waiting is None:
            # Cannot happen: a live generator entity is always parked.
            raise SimulationError(
                f"entity {ent.name} received event while not waiting")
        if ent.waiting.matches(event):
            ent.waiting = None
            self._advance(ent, value=event)
        else:
            ent.deferred.append(event)

    def _advance(self, ent: _Entity, value: Optional[Event] = None,
                 first: bool = False) -> None:
        """Run an entity until it parks at a Receive or finishes."""
        while True:
            try:
                if first:
                    req = next(ent.gen)
                    first = False
                else:
                    req = ent.gen.send(value)
            except StopIteration:
                ent.done = True
                ent.waiting = None
                return
            except Exception as exc:
                raise SimulationError(
                    f"entity {ent.name} failed at t={self._clock}"
                    + (f" handling event seq={value.seq} tag={value.tag}"
                       if value is not None else "")
                ) from exc
            if not isinstance(req, Receive):
                raise SimulationError(
                    f"entity {ent.name} yielded {req!r}; expected Receive")
            # Deferred events satisfy a new wait before any future delivery.
            matched = None
            for i, pending in enumerate(ent.deferred):
                if req.matches(pending):
                    matched = i
                    break
            if matched is None:
                ent.waiting = req
                return
            del_event = ent.deferred[matched]
            del ent.deferred[matched]
            value = del_event
