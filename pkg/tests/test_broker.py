import random

import pytest

from dagsched import (ContractViolation, DagApp, DagStructureError,
                      DependencyEdge, ExperimentConfig, PEId, PlanningError,
                      Reservation, ResourceConfigError, ResourceSpec,
                      SimulationError, TaskCompletion, TaskNode,
                      collect_completions, run_experiment, validate)
from dagsched.broker import run_reserved_task, utilization
from dagsched.io import dumps_canonical, result_to_jsonable
from generators import random_specs, random_valid_dag


def experiment(dag, specs, **kw):
    return run_experiment(ExperimentConfig(dag=dag, resources=specs, **kw))


def valid_dag(tasks_mi, edges, name="g"):
    dag = DagApp(name,
                 [TaskNode(i, f"task{i}", mi) for i, mi in tasks_mi.items()],
                 [DependencyEdge(s, d, b) for s, d, b in edges])
    assert validate(dag) == []
    return dag


class TestRunExperiment:
    def test_single_task_single_resource(self):
        dag = valid_dag({1: 200000.0}, [])
        res = experiment(dag, [ResourceSpec("a", 1, 1, 400.0, 1e6, 2.0)])
        assert res.makespan == 500.0
        assert len(res.completions) == 1
        c = res.completions[0]
        assert (c.start, c.finish, c.cost) == (0.0, 500.0, 1000.0)

    def test_hand_trace_timeline(self, diamond_dag, pair_specs):
        res = experiment(diamond_dag, pair_specs)
        assert res.makespan == 300.4
        assert [c.task for c in res.completions] == [1, 2, 3, 4]
        assert [c.finish for c in res.completions] == [100.0, 200.0, 200.4,
                                                       300.4]
        assert res.final_clock == 300.4
        # registration, discovery, reply, 4x(reserve+ack+dispatch+done),
        # all-done, 3 shutdowns
        assert res.events_processed == 24

    def test_simulated_equals_plan_bitwise(self, diamond_dag, pair_specs):
        res = experiment(diamond_dag, pair_specs)
        by_task = {a.task: a for a in res.plan.assignments}
        for c in res.completions:
            a = by_task[c.task]
            assert (c.start - a.start) == 0.0
            assert (c.finish - a.finish) == 0.0
            assert (c.cost - a.cost) == 0.0

    def test_utilization_hand_trace(self, diamond_dag, pair_specs):
        res = experiment(diamond_dag, pair_specs)
        assert res.utilization == {
            "R1": pytest.approx(200.0 / 300.4, rel=1e-12),
            "R2": pytest.approx(200.0 / 300.4, rel=1e-12),
        }

    def test_utilization_single_task_is_one(self):
        dag = valid_dag({1: 200000.0}, [])
        res = experiment(dag, [ResourceSpec("a", 1, 1, 400.0, 1e6, 2.0)])
        assert res.utilization == {"a": 1.0}

    def test_idle_resource_utilization_zero(self):
        dag = valid_dag({1: 200000.0}, [])
        res = experiment(dag, [ResourceSpec("a", 1, 1, 400.0, 1e6, 2.0),
                               ResourceSpec("b", 1, 1, 100.0, 1e6, 2.0)])
        assert res.utilization["b"] == 0.0

    def test_trace_off_by_default_on_when_asked(self, diamond_dag, pair_specs):
        assert experiment(diamond_dag, pair_specs).trace == ()
        traced = experiment(diamond_dag, pair_specs, trace=True)
        assert len(traced.trace) == traced.events_processed
        tags = [r.tag for r in traced.trace]
        assert tags[:3] == ["REGISTER", "REGISTER", "DISCOVER"]
        assert "ALL_DONE" in tags

    def test_deterministic_repeats(self, diamond_dag, pair_specs):
        a = experiment(diamond_dag, pair_specs, trace=True)
        b = experiment(diamond_dag, pair_specs, trace=True)
        assert (dumps_canonical(result_to_jsonable(a))
                == dumps_canonical(result_to_jsonable(b)))
        assert a.trace == b.trace

    def test_random_experiments_exact(self):
        rng = random.Random(112233)
        for _ in range(30):
            dag = random_valid_dag(rng, max_tasks=15)
            res = experiment(dag, random_specs(rng))
            assert len(res.completions) == len(dag.tasks)
            by_task = {a.task: a for a in res.plan.assignments}
            for c in res.completions:
                assert c.finish == by_task[c.task].finish
            finishes = [c.finish for c in res.completions]
            assert finishes == sorted(finishes)

    def test_invalid_dag_rejected_before_simulation(self):
        dag = DagApp("bad", [TaskNode(1, "a", 1.0), TaskNode(2, "b", 1.0)],
                     [])  # two floating tasks
        with pytest.raises(DagStructureError) as exc:
            experiment(dag, [ResourceSpec("a", 1, 1, 400.0, 1e6, 2.0)])
        assert {e.code for e in exc.value.errors} == {"FloatingTask"}

    def test_no_resources_rejected(self):
        dag = valid_dag({1: 1000.0}, [])
        with pytest.raises(PlanningError):
            experiment(dag, [])

    def test_duplicate_resource_names_rejected(self):
        dag = valid_dag({1: 1000.0}, [])
        with pytest.raises(ResourceConfigError):
            experiment(dag, [ResourceSpec("a", 1, 1, 400.0, 1e6, 2.0),
                             ResourceSpec("a", 1, 1, 500.0, 1e6, 2.0)])

    def test_unknown_algorithm_and_order_rejected(self):
        dag = valid_dag({1: 1000.0}, [])
        specs = [ResourceSpec("a", 1, 1, 400.0, 1e6, 2.0)]
        with pytest.raises(ContractViolation):
            experiment(dag, specs, algorithm="heft")
        with pytest.raises(ContractViolation):
            experiment(dag, specs, resource_order="slowest")


class TestCollectorAndResource:
    def c(self, task, finish):
        return TaskCompletion(task, 0, 0, 0, finish - 1.0, finish, 1.0)

    def test_collect_zero_expected(self):
        assert collect_completions([], []) == ()

    def test_collect_preserves_arrival_order(self):
        got = [self.c(2, 100.0), self.c(1, 200.0), self.c(3, 200.0)]
        assert collect_completions(got, [1, 2, 3]) == tuple(got)

    def test_collect_missing_tasks_named(self):
        with pytest.raises(SimulationError, match="never completed: 2 4"):
            collect_completions([self.c(1, 1.0), self.c(3, 2.0)],
                                [1, 2, 3, 4])

    def test_collect_duplicate_rejected(self):
        with pytest.raises(SimulationError, match="twice"):
            collect_completions([self.c(1, 1.0), self.c(1, 2.0)], [1])

    def test_collect_stray_rejected(self):
        with pytest.raises(SimulationError, match="unknown tasks: 9"):
            collect_completions([self.c(1, 1.0), self.c(9, 2.0)], [1])

    def test_run_reserved_task_happy_path(self):
        res = Reservation(0, 7, PEId(0, 1, 0), 10.0, 5.0)
        assert run_reserved_task(res, 1, 0, 10.0) == 15.0

    def test_run_reserved_task_wrong_pe(self):
        res = Reservation(0, 7, PEId(0, 1, 0), 10.0, 5.0)
        with pytest.raises(SimulationError, match="reserved on"):
            run_reserved_task(res, 0, 0, 10.0)

    def test_run_reserved_task_wrong_time(self):
        res = Reservation(0, 7, PEId(0, 0, 0), 10.0, 5.0)
        with pytest.raises(SimulationError, match="reserved for"):
            run_reserved_task(res, 0, 0, 9.0)


class TestUtilizationFunction:
    def test_multi_pe_capacity_counts_all_pes(self, diamond_dag):
        # both R1 PEs live on one 2-PE resource: capacity doubles
        res = experiment(diamond_dag,
                         [ResourceSpec("big", 1, 2, 1000.0, 1e6, 3.0)])
        busy = sum(a.finish - a.start for a in res.plan.assignments)
        assert res.utilization["big"] == pytest.approx(
            busy / (res.makespan * 2), rel=1e-12)

    def test_utilization_via_result_fields(self, diamond_dag, pair_specs):
        res = experiment(diamond_dag, pair_specs)
        again = utilization(res.plan,
                            [type("E", (), {"resource_id": i, "spec": s})()
                             for i, s in enumerate(res.resource_specs)],
                            res.makespan)
        assert again == res.utilization
