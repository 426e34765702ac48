"""Interactive stage-debugging backend.

Serves one client over local TCP. Messages are UTF-8 JSON, one per
line. Commands: nextStage, step, continue, setBreakpoint(line),
clearBreakpoint(line), inspect(name), quit. Events: stage, paused,
stageEnd, value, error, bye. Every command gets exactly one reply
event; `stage` with stage 0 means staging is complete.

In debug mode every stage source gets a `debugger;` first line; the
delivered source byte-equals the saved stage file. A fresh `nextStage`
starts evaluating the stage on a worker thread, which immediately
pauses at that first line — the stage event itself announces the
pause, so stepping can begin at once. The worker parks inside the
interpreter's statement observer; step resumes for one statement,
continue runs to the next breakpoint (line numbers of the delivered
source, reset each stage, settable only while paused — the reply is a
paused echo of the current line). Stepping or continuing off the end
of a stage replies stageEnd, after which nextStage delivers the next
stage or stage 0.

Inspect resolves a name in the environment the worker is paused in.
Scalar replies carry their printed form; AST-valued replies carry both
the reflection tree and its unparsed source text.
"""

from __future__ import annotations

import json
import queue
import socket
import threading
from typing import Optional

from .ast import NodeKind, is_statement, make_node
from .driver import DriverConfig, evaluate_stage, finish_residual, prepare_stage_source, save_stage_source
from .errors import StagedError
from .interp import Environment, display, type_name
from .parser import parse
from .reflect import MalformedReflection, is_ast_value, reflection_to_ast
from .stagecraft import StagingState
from .unparse import unparse, unparse_expression
from .values import JS_NULL, JS_UNDEFINED
import os


class _Aborted(Exception):
    pass


def _to_wire(value, _seen: Optional[set] = None):
    """JSON-encodable view of an interpreter value (for inspect replies)."""
    if isinstance(value, bool) or isinstance(value, (int, float, str)):
        return value
    if value is JS_NULL or value is JS_UNDEFINED:
        return None
    if _seen is None:
        _seen = set()
    if id(value) in _seen:
        return "..."
    _seen = _seen | {id(value)}
    if isinstance(value, list):
        return [_to_wire(v, _seen) for v in value]
    if isinstance(value, dict):
        return {str(k): _to_wire(v, _seen) for k, v in value.items()}
    return display(value)


def _ast_source(value) -> str:
    node = reflection_to_ast(value)
    if node.kind is NodeKind.PROGRAM:
        return unparse(node).rstrip("\n")
    if is_statement(node):
        return unparse(make_node(NodeKind.PROGRAM, [node])).rstrip("\n")
    return unparse_expression(node)


class _StageRun:
    """One stage evaluation on a worker thread, parked between commands."""

    def __init__(self, session: "_Session", stage, source: str, index: int):
        self.session = session
        self.stage = stage
        self.source = source
        self.index = index
        self.breakpoints: set = set()
        self.resume_q: "queue.Queue[str]" = queue.Queue()
        self.event_q: "queue.Queue[tuple]" = queue.Queue()
        self.mode = "step"
        self.current_line = 0
        self.current_env: Optional[Environment] = None
        self.thread = threading.Thread(target=self._run, daemon=True)

    def start(self) -> tuple:
        self.thread.start()
        return self.event_q.get()

    def resume(self, mode: str) -> tuple:
        self.resume_q.put(mode)
        return self.event_q.get()

    def abort(self) -> None:
        self.resume_q.put("abort")
        self.event_q.get()
        self.thread.join(timeout=5)

    def _observer(self, line: int, env: Environment, force: bool) -> None:
        self.current_line = line
        self.current_env = env
        if force or self.mode == "step" or line in self.breakpoints:
            self.event_q.put(("paused", line))
            command = self.resume_q.get()
            if command == "abort":
                raise _Aborted()
            self.mode = command

    def _run(self) -> None:
        session = self.session
        try:
            evaluate_stage(
                session.root,
                self.stage,
                self.source,
                session.staging_state,
                base_dir=session.base_dir,
                output=session.stage_output,
                observer=self._observer,
            )
        except _Aborted:
            self.event_q.put(("aborted", None))
        except StagedError as exc:
            self.event_q.put(("failed", exc))
        except BaseException as exc:  # release the protocol thread, whatever happens
            self.event_q.put(("failed", StagedError(f"internal error: {exc!r}")))
        else:
            self.event_q.put(("done", None))


class _Session:
    def __init__(self, config: DriverConfig, root, stdout):
        self.config = config
        self.root = root
        self.stdout = stdout
        self.state = "Idle"  # Idle | Paused | Finished | Failed
        self.staging_state = StagingState()
        self.stages_run = 0
        self.run: Optional[_StageRun] = None
        self.base_dir = os.path.dirname(os.path.abspath(config.input_path))

    def stage_output(self, line: str) -> None:
        self.stdout(line)

    # -- command handlers, each returning exactly one event dict --------

    def handle(self, msg: dict) -> dict:
        cmd = msg.get("cmd")
        if cmd == "nextStage":
            return self.cmd_next_stage()
        if cmd == "step":
            return self.cmd_resume("step")
        if cmd == "continue":
            return self.cmd_resume("continue")
        if cmd == "setBreakpoint":
            return self.cmd_breakpoint(msg, add=True)
        if cmd == "clearBreakpoint":
            return self.cmd_breakpoint(msg, add=False)
        if cmd == "inspect":
            return self.cmd_inspect(msg)
        return {"event": "error", "message": f"malformed command: {cmd!r}"}

    def _illegal(self, _cmd: str) -> dict:
        return {"event": "error", "message": f"illegal in state {self.state}"}

    def cmd_next_stage(self) -> dict:
        if self.state == "Finished":
            return {"event": "stage", "stage": 0}
        if self.state != "Idle":
            return self._illegal("nextStage")
        try:
            stage, source = prepare_stage_source(self.root, True)
        except StagedError as exc:
            self.state = "Failed"
            return {"event": "error", "message": str(exc)}
        if stage is None:
            return self._finish()
        if self.stages_run >= self.config.max_stages:
            self.state = "Failed"
            return {
                "event": "error",
                "message": f"stage limit of {self.config.max_stages} reached with stages remaining",
            }
        index = self.stages_run + 1
        save_stage_source(
            self.config.resolved_save_dir(), self.config.stem(), index, source
        )
        run = _StageRun(self, stage, source, index)
        kind, payload = run.start()
        if kind != "paused":
            # debugger; heads every debug stage, so evaluation must pause
            # before anything else can happen.
            self.state = "Failed"
            return {"event": "error", "message": str(payload or "stage never paused")}
        self.run = run
        self.state = "Paused"
        return {"event": "stage", "stage": index, "source": source}

    def _finish(self) -> dict:
        try:
            finish_residual(self.root)
        except StagedError as exc:
            self.state = "Failed"
            return {"event": "error", "message": str(exc)}
        if self.config.output_path:
            text = unparse(self.root)
            out_dir = os.path.dirname(self.config.output_path)
            if out_dir:
                os.makedirs(out_dir, exist_ok=True)
            with open(self.config.output_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        self.state = "Finished"
        return {"event": "stage", "stage": 0}

    def cmd_resume(self, mode: str) -> dict:
        if self.state != "Paused" or self.run is None:
            return self._illegal(mode)
        kind, payload = self.run.resume(mode)
        if kind == "paused":
            return {"event": "paused", "line": payload}
        if kind == "done":
            index = self.run.index
            self.stages_run += 1
            self.run = None
            self.state = "Idle"
            return {"event": "stageEnd", "stage": index}
        self.state = "Failed"
        self.run = None
        return {"event": "error", "message": str(payload)}

    def cmd_breakpoint(self, msg: dict, add: bool) -> dict:
        if self.state != "Paused" or self.run is None:
            return self._illegal("breakpoint")
        line = msg.get("line")
        if not isinstance(line, int) or isinstance(line, bool) or line < 1:
            return {"event": "error", "message": "malformed command: line must be a positive integer"}
        if add:
            self.run.breakpoints.add(line)
        else:
            self.run.breakpoints.discard(line)
        return {"event": "paused", "line": self.run.current_line}

    def cmd_inspect(self, msg: dict) -> dict:
        if self.state != "Paused" or self.run is None:
            return self._illegal("inspect")
        name = msg.get("name")
        if not isinstance(name, str):
            return {"event": "error", "message": "malformed command: name must be a string"}
        env = self.run.current_env
        bindings = env.flatten() if env is not None else {}
        if name not in bindings:
            return {"event": "error", "message": f"unknown name {name!r}"}
        value = bindings[name]
        if is_ast_value(value):
            try:
                source = _ast_source(value)
            except (MalformedReflection, StagedError):
                pass
            else:
                return {
                    "event": "value",
                    "name": name,
                    "kind": "ast",
                    "repr": {"reflection": _to_wire(value), "source": source},
                }
        return {
            "event": "value",
            "name": name,
            "kind": type_name(value),
            "repr": display(value),
        }

    def shutdown(self) -> None:
        if self.run is not None:
            self.run.abort()
            self.run = None


def _announce(*args) -> None:
    # The port announcement must reach a pipe reader before accept()
    # parks the process, so the default writer cannot buffer.
    print(*args, flush=True)


def serve(config: DriverConfig, *, stdout=_announce) -> int:
    try:
        with open(config.input_path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        stdout(f"stagedc: cannot read {config.input_path}: {exc.strerror}")
        return 1
    try:
        root = parse(source)
    except StagedError as exc:
        stdout(f"stagedc: {config.input_path}: {exc}")
        return 2
    listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        listener.bind(("127.0.0.1", config.debug_port or 0))
    except OSError as exc:
        stdout(f"stagedc: cannot bind port {config.debug_port}: {exc.strerror}")
        listener.close()
        return 1
    listener.listen(1)
    stdout(f"stagedc: debug session listening on port {listener.getsockname()[1]}")
    conn, _addr = listener.accept()
    listener.close()  # single-client session: refuse everyone else
    session = _Session(config, root, stdout)
    try:
        reader = conn.makefile("r", encoding="utf-8", newline="\n")
        for raw in reader:
            line = raw.strip()
            if not line:
                continue
            try:
                msg = json.loads(line)
                if not isinstance(msg, dict):
                    raise ValueError("not an object")
            except ValueError:
                _send(conn, {"event": "error", "message": "malformed command: not a JSON object"})
                continue
            if msg.get("cmd") == "quit":
                _send(conn, {"event": "bye"})
                break
            try:
                event = session.handle(msg)
            except Exception as exc:  # keep the session alive on internal faults
                event = {"event": "error", "message": f"internal error: {exc!r}"}
            _send(conn, event)
    except (BrokenPipeError, ConnectionResetError):
        pass
    finally:
        session.shutdown()
        try:
            conn.close()
        except OSError:
            pass
    return 0


def _send(conn: socket.socket, event: dict) -> None:
    conn.sendall((json.dumps(event) + "\n").encode("utf-8"))
