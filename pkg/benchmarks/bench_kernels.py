"""Compare the compiled calendar kernels against the pure-Python fallback.

Two views: a microbenchmark of the gap-scan primitive on synthetic busy
arrays, and a macro run planning one large random workflow. Both swap the
implementation behind `dagsched.kernels` in place, so the package under
test is otherwise identical; outputs are asserted equal before timing is
reported.

Run:  python3 benchmarks/bench_kernels.py [--seed N] [--tasks N]
"""

import argparse
import random
import time
from array import array

import dagsched.kernels as kernels
from dagsched import (DagApp, DependencyEdge, ResourceSpec, TaskNode,
                      min_min_schedule, validate)
from dagsched import _kernels_py
from dagsched.grid import ResourceRegistry

try:
    from dagsched import _kernels
except ImportError:
    _kernels = None


def use(impl):
    kernels.earliest_gap = impl.earliest_gap
    kernels.earliest_start_over_pes = impl.earliest_start_over_pes


def busy_array(n_intervals):
    # 6s busy, 4s free, repeating; most queries must scan deep
    bounds = array("d")
    for i in range(n_intervals):
        bounds.append(i * 10.0)
        bounds.append(i * 10.0 + 6.0)
    return bounds


def bench_gap_scan(impl, bounds, queries, repeat):
    gap = impl.earliest_gap
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for not_before, duration in queries:
            gap(bounds, not_before, duration)
        best = min(best, time.perf_counter() - t0)
    return best / len(queries)


def micro(seed, repeat):
    rng = random.Random(seed)
    print(f"{'intervals':>10} {'python us/op':>14} {'compiled us/op':>15}"
          f" {'speedup':>8}")
    for n in (10, 100, 1000, 10000):
        bounds = busy_array(n)
        horizon = n * 10.0
        queries = [(rng.uniform(0.0, horizon), rng.choice((3.0, 5.0)))
                   for _ in range(200)]
        for not_before, duration in queries:
            a = _kernels_py.earliest_gap(bounds, not_before, duration)
            if _kernels is not None:
                b = _kernels.earliest_gap(bounds, not_before, duration)
                assert a == b, (n, not_before, duration, a, b)
        py = bench_gap_scan(_kernels_py, bounds, queries, repeat)
        if _kernels is None:
            print(f"{n:>10} {py * 1e6:>14.3f} {'n/a':>15} {'n/a':>8}")
            continue
        cy = bench_gap_scan(_kernels, bounds, queries, repeat)
        print(f"{n:>10} {py * 1e6:>14.3f} {cy * 1e6:>15.3f}"
              f" {py / cy:>7.1f}x")


def large_workflow(rng, n_tasks):
    tasks = [TaskNode(i, f"t{i}", float(rng.randint(1, 400) * 500))
             for i in range(1, n_tasks + 1)]
    edges = [(i, i + 1) for i in range(1, n_tasks)]
    pool = [(s, d) for s in range(1, n_tasks + 1)
            for d in range(s + 2, min(s + 30, n_tasks + 1))]
    extra = rng.sample(pool, min(len(pool), n_tasks * 2))
    dag = DagApp("bench", tasks,
                 [DependencyEdge(s, d, float(rng.randint(0, 200) * 1000))
                  for s, d in sorted(set(edges) | set(extra))])
    errors = validate(dag)
    assert errors == [], errors
    return dag


def plan_once(dag, entries):
    t0 = time.perf_counter()
    plan = min_min_schedule(dag, entries, "fastest")
    return time.perf_counter() - t0, plan


def macro(seed, n_tasks):
    rng = random.Random(seed)
    dag = large_workflow(rng, n_tasks)
    registry = ResourceRegistry()
    for i in range(4):
        registry.register(ResourceSpec(f"r{i}", 2, 2,
                                       rng.choice((500.0, 1000.0, 2000.0)),
                                       rng.choice((5e5, 1e6)), 3.0))
    entries = registry.discover()

    use(_kernels_py)
    py_time, py_plan = plan_once(dag, entries)
    print(f"planner, {n_tasks} tasks on 16 PEs: python {py_time:.3f}s",
          end="")
    if _kernels is None:
        print("  (compiled backend not built)")
        return
    use(_kernels)
    cy_time, cy_plan = plan_once(dag, entries)
    assert py_plan.assignments == cy_plan.assignments
    assert py_plan.makespan == cy_plan.makespan
    print(f", compiled {cy_time:.3f}s, speedup {py_time / cy_time:.1f}x"
          f" (identical plans, makespan {py_plan.makespan:.3f})")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--tasks", type=int, default=250,
                        help="workflow size for the macro benchmark")
    parser.add_argument("--repeat", type=int, default=5,
                        help="best-of repetitions for the microbenchmark")
    args = parser.parse_args()
    print(f"active backend at import: {kernels.BACKEND}")
    micro(args.seed, args.repeat)
    macro(args.seed, args.tasks)


if __name__ == "__main__":
    main()
