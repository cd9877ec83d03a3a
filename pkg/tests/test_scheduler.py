import random

import pytest

from dagsched import (CHEAPEST_FIRST, FASTEST_FIRST, ContractViolation,
                      DagApp, DependencyEdge, MinMinScheduler, PlanningError,
                      ReservationCalendar, ResourceRegistry, ResourceSpec,
                      TaskNode, data_available_time, ect_probe,
                      min_min_schedule, order_resources, transfer_duration,
                      validate)
from dagsched.scheduler import Assignment
from generators import (dag_to_plain, random_specs, random_valid_dag,
                        specs_to_rows)
from oracle import oracle_min_min


def build_registry(rows):
    registry = ResourceRegistry()
    for name, machines, pes, rating, baud, cost in rows:
        registry.register(ResourceSpec(name, machines, pes, rating, baud,
                                       cost))
    return registry


def valid_dag(tasks_mi, edges, name="g"):
    dag = DagApp(name,
                 [TaskNode(i, f"task{i}", mi) for i, mi in tasks_mi.items()],
                 [DependencyEdge(s, d, b) for s, d, b in edges])
    assert validate(dag) == []
    return dag


PAIR = [("R1", 1, 1, 1000.0, 1e6, 3.0), ("R2", 1, 1, 1000.0, 1e6, 3.0)]


class TestOrderResources:
    def test_fastest_first_descending(self):
        registry = build_registry([("a", 1, 1, 400.0, 1e6, 1.0),
                                   ("b", 1, 1, 1000.0, 1e6, 1.0),
                                   ("c", 1, 1, 600.0, 1e6, 1.0)])
        ordered = order_resources(registry.discover(), FASTEST_FIRST)
        assert [e.spec.pe_rating_mips for e in ordered] == [1000.0, 600.0,
                                                            400.0]

    def test_equal_ratings_keep_registration_order(self):
        registry = build_registry([("a", 1, 1, 500.0, 1e6, 9.0),
                                   ("b", 1, 1, 500.0, 1e6, 1.0),
                                   ("c", 1, 1, 500.0, 1e6, 5.0)])
        ordered = order_resources(registry.discover(), FASTEST_FIRST)
        assert [e.spec.name for e in ordered] == ["a", "b", "c"]

    def test_cheapest_first_ascending(self):
        registry = build_registry([("a", 1, 1, 500.0, 1e6, 3.0),
                                   ("b", 1, 1, 500.0, 1e6, 1.0),
                                   ("c", 1, 1, 500.0, 1e6, 2.0)])
        ordered = order_resources(registry.discover(), CHEAPEST_FIRST)
        assert [e.spec.cost_per_sec for e in ordered] == [1.0, 2.0, 3.0]

    def test_empty_list_is_a_planning_error(self):
        with pytest.raises(PlanningError, match="no resources discovered"):
            order_resources([], FASTEST_FIRST)

    def test_unknown_key_rejected(self):
        registry = build_registry(PAIR[:1])
        with pytest.raises(ContractViolation):
            order_resources(registry.discover(), "slowest")


class TestDataAvailableTime:
    def test_entry_task_zero(self):
        dag = valid_dag({1: 1000.0}, [])
        registry = build_registry(PAIR[:1])
        entries = {e.resource_id: e for e in registry.discover()}
        assert data_available_time(dag, 1, entries[0], {}, entries) == 0.0

    def test_colocated_parent(self):
        dag = valid_dag({1: 1000.0, 2: 1000.0}, [(1, 2, 100000.0)])
        registry = build_registry(PAIR)
        entries = {e.resource_id: e for e in registry.discover()}
        assigned = {1: Assignment(1, 0, 0, 0, 0.0, 500.0, 1.0, 500.0)}
        assert data_available_time(dag, 2, entries[0], assigned,
                                   entries) == 500.0

    def test_remote_parent_pays_bottleneck(self):
        dag = valid_dag({1: 1000.0, 2: 1000.0}, [(1, 2, 100000.0)])
        registry = build_registry(PAIR)
        entries = {e.resource_id: e for e in registry.discover()}
        assigned = {1: Assignment(1, 0, 0, 0, 0.0, 500.0, 1.0, 500.0)}
        assert data_available_time(dag, 2, entries[1], assigned,
                                   entries) == 500.8

    def test_unassigned_parent_is_contract_violation(self):
        dag = valid_dag({1: 1000.0, 2: 1000.0}, [(1, 2, 1.0)])
        registry = build_registry(PAIR)
        entries = {e.resource_id: e for e in registry.discover()}
        with pytest.raises(ContractViolation):
            data_available_time(dag, 2, entries[0], {}, entries)


class TestEctProbe:
    def test_idle_resource(self):
        dag = valid_dag({1: 200000.0}, [])
        registry = build_registry([("a", 1, 1, 400.0, 1e6, 1.0)])
        entries = {e.resource_id: e for e in registry.discover()}
        cal = ReservationCalendar(0, entries[0].spec)
        probe = ect_probe(dag, 1, entries[0], {}, entries, cal)
        assert (probe.start, probe.ect) == (0.0, 500.0)

    def test_busy_pe_pushes_start(self):
        dag = valid_dag({1: 200000.0}, [])
        registry = build_registry([("a", 1, 1, 400.0, 1e6, 1.0)])
        entries = {e.resource_id: e for e in registry.discover()}
        cal = ReservationCalendar(0, entries[0].spec)
        cal.commit(99, 0, 0, 0.0, 100.0)
        probe = ect_probe(dag, 1, entries[0], {}, entries, cal)
        assert (probe.start, probe.ect) == (100.0, 600.0)

    def test_data_availability_dominates(self):
        dag = valid_dag({1: 1000.0, 2: 200000.0}, [(1, 2, 100000.0)])
        registry = build_registry([("a", 1, 1, 500.0, 1e6, 1.0),
                                   ("b", 1, 1, 1000.0, 1e6, 1.0)])
        entries = {e.resource_id: e for e in registry.discover()}
        assigned = {1: Assignment(1, 0, 0, 0, 0.0, 500.0, 1.0, 500.0)}
        cal = ReservationCalendar(1, entries[1].spec)
        probe = ect_probe(dag, 2, entries[1], assigned, entries, cal)
        assert probe.data_available == 500.8
        assert probe.ect == 700.8

    def test_probe_does_not_mutate(self):
        dag = valid_dag({1: 200000.0}, [])
        registry = build_registry([("a", 1, 1, 400.0, 1e6, 1.0)])
        entries = {e.resource_id: e for e in registry.discover()}
        cal = ReservationCalendar(0, entries[0].spec)
        for _ in range(4):
            ect_probe(dag, 1, entries[0], {}, entries, cal)
        assert cal.intervals(0, 0) == []


class TestMinMinPlanner:
    def test_single_task_single_resource(self):
        dag = valid_dag({1: 200000.0}, [])
        registry = build_registry([("a", 1, 1, 400.0, 1e6, 2.0)])
        plan = min_min_schedule(dag, registry.discover())
        assert plan.makespan == 500.0
        assert plan.total_cost == 1000.0
        a = plan.assignments[0]
        assert (a.start, a.finish, a.resource) == (0.0, 500.0, 0)

    def test_chain_colocated_transfer_free(self):
        dag = valid_dag({1: 200000.0, 2: 200000.0}, [(1, 2, 100000.0)])
        registry = build_registry([("a", 1, 1, 400.0, 1e6, 1.0)])
        plan = min_min_schedule(dag, registry.discover())
        spans = [(a.start, a.finish) for a in plan.assignments]
        assert spans == [(0.0, 500.0), (500.0, 1000.0)]
        assert plan.makespan == 1000.0

    def test_hand_trace_diamond(self, diamond_dag, pair_specs):
        registry = ResourceRegistry()
        for s in pair_specs:
            registry.register(s)
        plan = min_min_schedule(diamond_dag, registry.discover())
        got = {a.task: (a.resource, a.start, a.finish)
               for a in plan.assignments}
        assert got == {
            1: (0, 0.0, 100.0),
            2: (0, 100.0, 200.0),
            3: (1, 100.4, 200.4),
            4: (1, 200.4, 300.4),
        }
        assert plan.makespan == 300.4
        assert plan.resource_order_used == (0, 1)

    def test_task_tie_breaks_to_lowest_id(self):
        # two ready siblings with identical everything: 2 must go before 3
        dag = valid_dag({1: 1000.0, 2: 50000.0, 3: 50000.0, 4: 1000.0},
                        [(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)])
        registry = build_registry(PAIR)
        plan = min_min_schedule(dag, registry.discover())
        a2 = plan.assignment_for(2)
        a3 = plan.assignment_for(3)
        # task 2 was committed first: it inherits task 1's resource slot
        assert a2.resource == plan.assignment_for(1).resource
        assert a3.resource != a2.resource

    def test_resource_tie_breaks_to_order_position(self):
        dag = valid_dag({1: 1000.0}, [])
        registry = build_registry(PAIR)
        plan = min_min_schedule(dag, registry.discover())
        assert plan.assignment_for(1).resource == 0

    def test_cheapest_first_changes_resource_order_used(self):
        dag = valid_dag({1: 1000.0}, [])
        registry = build_registry([("fast", 1, 1, 2000.0, 1e6, 7.0),
                                   ("slow", 1, 1, 500.0, 1e6, 2.0)])
        fastest = min_min_schedule(dag, registry.discover(), FASTEST_FIRST)
        cheapest = min_min_schedule(dag, registry.discover(), CHEAPEST_FIRST)
        assert fastest.resource_order_used == (0, 1)
        assert cheapest.resource_order_used == (1, 0)

    def test_requires_validated_dag(self):
        dag = DagApp("g", [TaskNode(1, "t", 1.0)], [])
        registry = build_registry(PAIR[:1])
        with pytest.raises(ContractViolation):
            min_min_schedule(dag, registry.discover())

    def test_contract_status_and_duplicate_store(self):
        dag = valid_dag({1: 1000.0, 2: 1000.0}, [(1, 2, 0.0)])
        registry = build_registry(PAIR[:1])
        sched = MinMinScheduler(dag, registry.discover())
        assert sched.get_schedule_status() is False
        assert sched.get_immediate_unscheduled_tasks() == [1]
        plan = sched.schedule()
        assert sched.get_schedule_status() is True
        assert sched.get_immediate_unscheduled_tasks() == []
        with pytest.raises(ContractViolation):
            sched.store_task_assignment(plan.assignments[0])
        with pytest.raises(ContractViolation):
            sched.schedule()

    def test_makespan_is_exit_task_finish(self):
        rng = random.Random(4242)
        for _ in range(30):
            dag = random_valid_dag(rng, max_tasks=12)
            registry = build_registry(specs_to_rows(random_specs(rng)))
            plan = min_min_schedule(dag, registry.discover())
            finishes = {a.task: a.finish for a in plan.assignments}
            assert plan.makespan == max(finishes.values())

    def test_oracle_equivalence_random_sample(self):
        rng = random.Random(515151)
        for _ in range(60):
            dag = random_valid_dag(rng, max_tasks=8)
            specs = random_specs(rng, max_resources=3)
            registry = build_registry(specs_to_rows(specs))
            order = rng.choice((FASTEST_FIRST, CHEAPEST_FIRST))
            plan = min_min_schedule(dag, registry.discover(), order)
            task_mi, edge_list = dag_to_plain(dag)
            want = oracle_min_min(task_mi, edge_list, specs_to_rows(specs),
                                  order)
            got = {a.task: {"resource": a.resource, "machine": a.machine,
                            "pe": a.pe, "start": a.start,
                            "finish": a.finish, "cost": a.cost}
                   for a in plan.assignments}
            assert got == want

    def test_precedence_feasibility_random(self):
        rng = random.Random(616161)
        for _ in range(40):
            dag = random_valid_dag(rng, max_tasks=20)
            registry = build_registry(
                specs_to_rows(random_specs(rng, max_resources=5)))
            entries = {e.resource_id: e for e in registry.discover()}
            plan = min_min_schedule(dag, list(entries.values()))
            by_task = {a.task: a for a in plan.assignments}
            for e in dag.edges:
                parent, child = by_task[e.src], by_task[e.dst]
                hop = transfer_duration(e.bytes, entries[parent.resource],
                                        entries[child.resource])
                assert child.start >= parent.finish + hop

    def test_plan_intervals_disjoint_per_pe(self):
        rng = random.Random(717171)
        for _ in range(25):
            dag = random_valid_dag(rng, max_tasks=15)
            registry = build_registry(
                specs_to_rows(random_specs(rng, max_resources=3)))
            plan = min_min_schedule(dag, registry.discover())
            per_pe = {}
            for a in plan.assignments:
                per_pe.setdefault((a.resource, a.machine, a.pe),
                                  []).append((a.start, a.finish))
            for spans in per_pe.values():
                spans.sort()
                for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
                    assert e1 <= s2

    def test_single_resource_reduction(self):
        rng = random.Random(818181)
        for _ in range(20):
            dag = random_valid_dag(rng, max_tasks=20)
            rating = rng.choice((250.0, 400.0, 1000.0))
            registry = build_registry([("one", 1, 1, rating, 1e6, 1.0)])
            plan = min_min_schedule(dag, registry.discover())
            expected = sum(t.length_mi / rating for t in dag.tasks)
            assert plan.makespan == pytest.approx(expected, rel=1e-9)

    def test_faster_resources_never_hurt_on_corpus(self):
        # Heuristic spot-check, not a theorem: scaling every rating up by
        # one factor keeps the tie structure, so makespan must not grow on
        # this frozen corpus.
        rng = random.Random(919191)
        for _ in range(20):
            dag = random_valid_dag(rng, max_tasks=10)
            rows = specs_to_rows(random_specs(rng, max_resources=3))
            base = min_min_schedule(
                dag, build_registry(rows).discover()).makespan
            for k in (2.0, 4.0):
                scaled = [(n, m, p, r * k, b, c)
                          for (n, m, p, r, b, c) in rows]
                fast = min_min_schedule(
                    dag, build_registry(scaled).discover()).makespan
                assert fast <= base + 1e-9
