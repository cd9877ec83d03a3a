"""Grid resources, advance-reservation calendars, and the resource registry.

A resource is a homogeneous block of machines x PEs with one MIPS rating,
one network baud rate and one usage cost rate. Each PE owns a calendar of
disjoint half-open busy intervals [start, end); advance reservation books
an interval before the simulation reaches it, so back-to-back tasks abut
without conflict.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from . import kernels
from .errors import ContractViolation, ReservationConflict, ResourceConfigError

ResourceId = int


@dataclass
class ResourceSpec:
    name: str
    num_machines: int
    pes_per_machine: int
    pe_rating_mips: float
    baud_rate_bps: float
    cost_per_sec: float
    architecture: str = "generic"
    time_zone: float = 0.0  # stored and reported, never shifts the clock
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise ResourceConfigError("name", "must be a non-empty string")
        if not isinstance(self.num_machines, int) or self.num_machines < 1:
            raise ResourceConfigError("num_machines", "must be an integer >= 1")
        if not isinstance(self.pes_per_machine, int) or self.pes_per_machine < 1:
            raise ResourceConfigError("pes_per_machine",
                                      "must be an integer >= 1")
        if not (self.pe_rating_mips > 0):
            raise ResourceConfigError("pe_rating_mips", "must be > 0")
        if not (self.baud_rate_bps > 0):
            raise ResourceConfigError("baud_rate_bps", "must be > 0")
        if self.cost_per_sec < 0:
            raise ResourceConfigError("cost_per_sec", "must be >= 0")

    @property
    def total_pes(self) -> int:
        return self.num_machines * self.pes_per_machine


@dataclass(frozen=True)
class PEId:
    resource: ResourceId
    machine_index: int
    pe_index: int


@dataclass(frozen=True)
class Reservation:
    id: int
    task_id: int
    pe: PEId
    start: float
    duration: float

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class RegistryEntry:
    resource_id: ResourceId
    spec: ResourceSpec
    registration_time: float


class ReservationCalendar:
    """Per-PE sets of disjoint busy intervals for one resource.

    PEs are addressed by (machine_index, pe_index); internally each PE keeps
    a flat sorted float array [s0, e0, s1, e1, ...] that the scan kernels
    consume directly.
    """

    def __init__(self, resource_id: ResourceId, spec: ResourceSpec):
        self.resource_id = resource_id
        self.spec = spec
        self._bounds = [array("d") for _ in range(spec.total_pes)]
        self._next_reservation_id = 0

    def _flat(self, machine_index: int, pe_index: int) -> int:
        if not (0 <= machine_index < self.spec.num_machines):
            raise ContractViolation(f"machine index {machine_index} out of range")
        if not (0 <= pe_index < self.spec.pes_per_machine):
            raise ContractViolation(f"pe index {pe_index} out of range")
        return machine_index * self.spec.pes_per_machine + pe_index

    def _pe_of_flat(self, flat: int) -> PEId:
        return PEId(self.resource_id,
                    flat // self.spec.pes_per_machine,
                    flat % self.spec.pes_per_machine)

    def intervals(self, machine_index: int, pe_index: int) -> list:
        b = self._bounds[self._flat(machine_index, pe_index)]
        return [(b[2 * i], b[2 * i + 1]) for i in range(len(b) // 2)]

    def earliest_feasible_start(self, not_before: float, duration: float):
        """Minimal start >= not_before with a free [start, start+duration).

        Returns (start, PEId); among equally early PEs the lowest
        (machine_index, pe_index) wins. A slot always exists at or after
        the last busy interval, so this never fails.
        """
        if not (duration > 0):
            raise ContractViolation("duration must be > 0")
        if not_before < 0:
            raise ContractViolation("not_before must be >= 0")
        start, flat = kernels.earliest_start_over_pes(
            self._bounds, not_before, duration)
        return start, self._pe_of_flat(flat)

    def is_free(self, machine_index: int, pe_index: int,
                start: float, duration: float) -> bool:
        b = self._bounds[self._flat(machine_index, pe_index)]
        end = start + duration
        for i in range(len(b) // 2):
            if b[2 * i] < end and start < b[2 * i + 1]:
                return False
        return True

    def commit(self, task_id: int, machine_index: int, pe_index: int,
               start: float, duration: float) -> Reservation:
        """Atomically book [start, start+duration) on the given PE."""
        if not (duration > 0):
            raise ContractViolation("duration must be > 0")
        if start < 0:
            raise ContractViolation("start must be >= 0")
        flat = self._flat(machine_index, pe_index)
        b = self._bounds[flat]
        end = start + duration

        # Insertion point among the sorted interval starts.
        lo, hi = 0, len(b) // 2
        while lo < hi:
            mid = (lo + hi) // 2
            if b[2 * mid] < start:
                lo = mid + 1
            else:
                hi = mid
        if lo > 0 and b[2 * (lo - 1) + 1] > start:
            raise ReservationConflict(
                f"[{start}, {end}) overlaps committed interval on PE "
                f"({machine_index}, {pe_index})")
        if 2 * lo < len(b) and b[2 * lo] < end:
            raise ReservationConflict(
                f"[{start}, {end}) overlaps committed interval on PE "
                f"({machine_index}, {pe_index})")

        b[2 * lo:2 * lo] = array("d", (start, end))
        res = Reservation(self._next_reservation_id, task_id,
                          self._pe_of_flat(flat), start, duration)
        self._next_reservation_id += 1
        return res


class ResourceRegistry:
    """Registration and discovery of resources (the information service role)."""

    def __init__(self):
        self._entries = []
        self._names = set()

    def register(self, spec: ResourceSpec,
                 at_time: float = 0.0) -> ResourceId:
        """Add a resource; its id is dense from 0 in registration order."""
        if spec.name in self._names:
            raise ResourceConfigError(
                "name", f"resource {spec.name!r} already registered")
        rid = len(self._entries)
        self._entries.append(RegistryEntry(rid, spec, at_time))
        self._names.add(spec.name)
        return rid

    def discover(self) -> list:
        """All registered resources, in registration order."""
        return list(self._entries)

    def entry(self, resource_id: ResourceId) -> RegistryEntry:
        try:
            return self._entries[resource_id]
        except IndexError:
            raise ContractViolation(
                f"unknown resource id {resource_id}") from None

    def __len__(self) -> int:
        return len(self._entries)


def execution_duration(length_mi: float, spec: ResourceSpec) -> float:
    """Seconds to run `length_mi` million instructions on one PE."""
    if not (length_mi > 0):
        raise ContractViolation("length_mi must be > 0")
    return length_mi / spec.pe_rating_mips


def transfer_duration(nbytes: float, src: RegistryEntry,
                      dst: RegistryEntry) -> float:
    """Seconds to move `nbytes` between two resources.

    Co-located transfers are free; remote ones pay the bottleneck of the
    two endpoint baud rates, with no latency term.
    """
    if nbytes < 0:
        raise ContractViolation("bytes must be >= 0")
    if src.resource_id == dst.resource_id:
        return 0.0
    return nbytes * 8.0 / min(src.spec.baud_rate_bps, dst.spec.baud_rate_bps)
