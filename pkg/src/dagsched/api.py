"""Stateless HTTP facade over validate/schedule/simulate, plus static files.

The routing core is a pure function (method, path, body) -> (status, doc),
so the whole contract is testable without sockets. The server wrapper is
a thread-per-request stdlib server; every request builds its own model
objects and kernel, so concurrent requests share nothing.

Status codes: 400 malformed body, 404 unknown path, 405 wrong method,
413 body over the size cap, 422 semantically invalid dag/resources,
500 internal plan/simulation mismatch.
"""

from __future__ import annotations

import mimetypes
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .broker import ExperimentConfig, run_experiment
from .dag import validate
from .errors import (ContractViolation, InternalMismatch, ParseError,
                     ResourceConfigError)
from .gantt import build_gantt, gantt_to_jsonable
from .grid import ResourceRegistry
from .io import (dag_from_jsonable, dumps_canonical, parse_json,
                 plan_to_jsonable, resources_from_jsonable,
                 result_body_jsonable)
from .scheduler import (ALGORITHMS, FASTEST_FIRST, MIN_MIN, RESOURCE_ORDERS,
                        PlanningError, min_min_schedule)

MAX_BODY_BYTES = 5 * 1024 * 1024

_API_PATHS = ("/api/validate", "/api/schedule", "/api/simulate",
              "/api/algorithms")


def _fail(code: str, message: str, status: int) -> tuple:
    return status, {"ok": False,
                    "errors": [{"code": code, "message": message}]}


def _validation_errors(errors) -> list:
    return [{"code": e.code, "ids": list(e.ids)} for e in errors]


def _parse_options(obj: dict) -> tuple:
    options = obj.get("options", {})
    if not isinstance(options, dict):
        raise ParseError("body.options: expected an object")
    algorithm = options.get("algorithm", MIN_MIN)
    order = options.get("resource_order", FASTEST_FIRST)
    return algorithm, order


def _parse_run_body(obj) -> tuple:
    if not isinstance(obj, dict):
        raise ParseError("body: expected an object")
    if "dag" not in obj:
        raise ParseError("body: missing required field 'dag'")
    if "resources" not in obj:
        raise ParseError("body: missing required field 'resources'")
    dag = dag_from_jsonable(obj["dag"], where="body.dag")
    algorithm, order = _parse_options(obj)
    return dag, obj["resources"], algorithm, order


def _semantic_checks(dag, resources_value, algorithm, order):
    """Returns (specs, error_response); exactly one side is None."""
    if algorithm not in ALGORITHMS:
        return None, _fail("UnknownAlgorithm",
                           f"unknown algorithm {algorithm!r}", 422)
    if order not in RESOURCE_ORDERS:
        return None, _fail("UnknownOrder",
                           f"unknown resource order {order!r}", 422)
    errors = validate(dag)
    if errors:
        return None, (422, {"ok": False,
                            "errors": _validation_errors(errors)})
    try:
        specs = resources_from_jsonable(resources_value,
                                        where="body.resources")
    except ResourceConfigError as e:
        return None, _fail("ResourceConfig", str(e), 422)
    if not specs:
        return None, _fail("PlanningError", "no resources discovered", 422)
    return specs, None


def handle_api(method: str, path: str, body: bytes) -> tuple:
    """Pure request router; returns (http status, response document)."""
    path = path.split("?", 1)[0]
    if path == "/api/algorithms":
        if method != "GET":
            return _fail("MethodNotAllowed", "use GET", 405)
        return 200, {"algorithms": list(ALGORITHMS),
                     "orders": list(RESOURCE_ORDERS)}
    if path not in _API_PATHS:
        return _fail("NotFound", f"unknown path {path}", 404)
    if method != "POST":
        return _fail("MethodNotAllowed", "use POST", 405)
    if len(body) > MAX_BODY_BYTES:
        return _fail("PayloadTooLarge",
                     f"body exceeds {MAX_BODY_BYTES} bytes", 413)

    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as e:
        return _fail("ParseError", f"body is not valid UTF-8: {e}", 400)
    try:
        obj = parse_json(text, "body")
        if path == "/api/validate":
            dag = dag_from_jsonable(obj, where="body")
            errors = validate(dag)
            return 200, {"ok": not errors,
                         "errors": _validation_errors(errors)}
        dag, resources_value, algorithm, order = _parse_run_body(obj)
    except ParseError as e:
        return _fail("ParseError", str(e), 400)

    # Resource *parsing* faults are 400s; the split below keeps value-level
    # faults (negative rates and such) in the 422 lane.
    try:
        specs, error = _semantic_checks(dag, resources_value, algorithm,
                                        order)
    except ParseError as e:
        return _fail("ParseError", str(e), 400)
    if error is not None:
        return error

    if path == "/api/schedule":
        registry = ResourceRegistry()
        try:
            for spec in specs:
                registry.register(spec)
            plan = min_min_schedule(dag, registry.discover(), order)
        except (ResourceConfigError, PlanningError) as e:
            return _fail(type(e).__name__, str(e), 422)
        return 200, {"ok": True, "plan": plan_to_jsonable(plan)}

    try:
        result = run_experiment(ExperimentConfig(
            dag=dag, resources=specs, algorithm=algorithm,
            resource_order=order))
    except (ResourceConfigError, PlanningError) as e:
        return _fail(type(e).__name__, str(e), 422)
    except InternalMismatch as e:
        return _fail("InternalMismatch", str(e), 500)
    return 200, {"ok": True,
                 "result": result_body_jsonable(result),
                 "gantt": gantt_to_jsonable(build_gantt(result))}


class _Handler(BaseHTTPRequestHandler):
    server_version = "dagsched"
    static_dir = None  # set on the subclass made by make_server

    def log_message(self, format, *args):  # quiet; tests drive the server
        pass

    def _send_doc(self, status: int, doc) -> None:
        data = dumps_canonical(doc).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _dispatch_api(self) -> None:
        length_header = self.headers.get("Content-Length") or "0"
        try:
            length = int(length_header)
        except ValueError:
            self._send_doc(*_fail("BadRequest", "bad Content-Length", 400))
            return
        if length > MAX_BODY_BYTES:
            # refuse before reading; the connection is dropped after reply
            self.close_connection = True
            self._send_doc(*_fail(
                "PayloadTooLarge",
                f"body exceeds {MAX_BODY_BYTES} bytes", 413))
            return
        body = self.rfile.read(length) if length > 0 else b""
        self._send_doc(*handle_api(self.command, self.path, body))

    def _serve_static(self) -> None:
        root = self.static_dir
        if root is None:
            self._send_doc(*_fail("NotFound", "no static directory", 404))
            return
        rel = self.path.split("?", 1)[0].lstrip("/")
        if not rel:
            rel = "index.html"
        full = os.path.realpath(os.path.join(root, rel))
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not full.startswith(os.path.realpath(root) + os.sep):
            self._send_doc(*_fail("NotFound", "outside static root", 404))
            return
        if not os.path.isfile(full):
            self._send_doc(*_fail("NotFound", f"no such file {rel}", 404))
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as f:
            data = f.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self) -> None:
        if self.path.split("?", 1)[0].startswith("/api/"):
            self._dispatch_api()
        else:
            self._serve_static()

    def do_POST(self) -> None:
        if self.path.split("?", 1)[0].startswith("/api/"):
            self._dispatch_api()
        else:
            self._send_doc(*_fail("MethodNotAllowed", "use GET", 405))


def make_server(port: int = 8080, static_dir=None,
                host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Build a ready-to-run server; caller owns serve_forever/shutdown."""
    if static_dir is not None and not os.path.isdir(static_dir):
        raise ContractViolation(f"static directory {static_dir!r} not found")
    handler = type("BoundHandler", (_Handler,),
                   {"static_dir": static_dir})
    return ThreadingHTTPServer((host, port), handler)


def serve_in_thread(port: int = 0, static_dir=None) -> tuple:
    """Start a server on a background thread; returns (server, base_url)."""
    server = make_server(port=port, static_dir=static_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, bound_port = server.server_address[:2]
    return server, f"http://{host}:{bound_port}"
