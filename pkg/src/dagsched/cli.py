"""Command-line surface: validate, schedule, simulate, serve.

Exit codes are a pure function of the outcome category:
0 success, 2 invalid input (validation codes on stderr, one per line as
"Code id id..."), 64 usage error, 66 unreadable or unparseable file,
70 internal plan/simulation mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .broker import ExperimentConfig, run_experiment
from .dag import validate
from .errors import InternalMismatch, ParseError, ResourceConfigError
from .gantt import GANTT_FORMATS, render_gantt
from .grid import ResourceRegistry
from .io import (dumps_canonical, load_dag, load_resources, plan_to_jsonable,
                 result_to_jsonable, save_json)
from .scheduler import (ALGORITHMS, FASTEST_FIRST, MIN_MIN, RESOURCE_ORDERS,
                        PlanningError, min_min_schedule)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_USAGE = 64
EXIT_FILE = 66
EXIT_INTERNAL = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="dagsched",
                     description="Static DAG scheduling simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a task graph file")
    p.add_argument("dag", help="task graph file")
    p.set_defaults(func=_cmd_validate)

    for name, help_text in (("schedule", "plan only, no simulation"),
                            ("simulate", "plan, then replay on the kernel")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("dag", help="task graph file")
        p.add_argument("resources", help="resource list file")
        p.add_argument("--order", choices=RESOURCE_ORDERS,
                       default=FASTEST_FIRST,
                       help="resource ordering for the planner")
        p.add_argument("--algorithm", choices=ALGORITHMS, default=MIN_MIN)
        p.add_argument("--out", help="write the structured output here")
        if name == "simulate":
            p.add_argument("--gantt", choices=GANTT_FORMATS,
                           help="print a gantt rendering to stdout")
            p.add_argument("--trace", action="store_true",
                           help="emit the event log to stderr as JSON lines")
        p.set_defaults(func=_cmd_schedule if name == "schedule"
                       else _cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", help="serve this directory at /")
    p.set_defaults(func=_cmd_serve)
    return parser


def _print_validation_errors(errors) -> None:
    for e in errors:
        print(str(e), file=sys.stderr)


def _cmd_validate(args) -> int:
    dag = load_dag(args.dag)
    errors = validate(dag)
    if errors:
        _print_validation_errors(errors)
        return EXIT_INVALID
    print(f"Ok: {len(dag.tasks)} tasks, {len(dag.edges)} edges")
    return EXIT_OK


def _load_validated(args):
    dag = load_dag(args.dag)
    specs = load_resources(args.resources)
    errors = validate(dag)
    if errors:
        _print_validation_errors(errors)
        return None, None
    return dag, specs


def _cmd_schedule(args) -> int:
    dag, specs = _load_validated(args)
    if dag is None:
        return EXIT_INVALID
    registry = ResourceRegistry()
    for spec in specs:
        registry.register(spec)
    plan = min_min_schedule(dag, registry.discover(), args.order)
    doc = plan_to_jsonable(plan)
    sys.stdout.write(dumps_canonical(doc))
    if args.out:
        save_json(doc, args.out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    dag, specs = _load_validated(args)
    if dag is None:
        return EXIT_INVALID
    result = run_experiment(ExperimentConfig(
        dag=dag, resources=specs, algorithm=args.algorithm,
        resource_order=args.order, trace=args.trace))
    if args.trace:
        for rec in result.trace:
            sys.stderr.write(json.dumps(
                {"time": rec.time, "seq": rec.seq, "src": rec.src,
                 "dst": rec.dst, "tag": rec.tag}) + "\n")
    if args.gantt:
        sys.stdout.buffer.write(render_gantt(result, args.gantt))
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(dumps_canonical(result_to_jsonable(result)))
    if args.out:
        save_json(result_to_jsonable(result), args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .api import make_server  # deferred so the CLI core has no socket use
    server = make_server(port=args.port, static_dir=args.static)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def cli_main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FILE
    except (ResourceConfigError, PlanningError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except InternalMismatch as e:
        print(f"internal mismatch: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
