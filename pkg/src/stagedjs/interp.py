"""Tree-walking evaluator for the pure (tag-free) language.

Value universe: float, str, bool, the null/undefined singletons,
dict (objects, insertion-ordered), list (arrays), Closure, Builtin.

Scoping is function-level: a program and each function body own one
scope; blocks do not. `var` defines in the enclosing function scope at
the moment it executes; assignment to a name that was never defined is
an error rather than an implicit global. Function declarations that sit
directly in a program or function body are hoisted to its start.

Operators are deliberately strict: arithmetic wants numbers (`+` also
concatenates when either side is a string), comparisons want two
numbers or two strings, `==`/`!=` never coerce (objects, arrays and
functions compare by identity), and division by zero or a non-finite
result is an error instead of Infinity/NaN. `&&`/`||` short-circuit on
truthiness and return the deciding operand. `new F(...)` binds a fresh
object to `this` and always returns that object.

An observer callable, when supplied, runs before every statement —
including statements inside function calls — receiving the source
line, the innermost environment, and whether the statement demands a
pause (`debugger;`). The stage debugger is built on this hook.

When a stage context is supplied, the `__meta*` builtins that staged
translations call are wired to it; pure programs never see them.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

from .ast import AstNode, NodeKind
from .errors import StagedError
from .reflect import is_ast_value
from .unparse import format_number
from .values import JS_NULL, JS_UNDEFINED
from . import uispec


class JsRuntimeError(StagedError):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class Environment:
    """One scope: a name table plus a link to the enclosing scope."""

    __slots__ = ("parent", "names")

    def __init__(self, parent: Optional["Environment"] = None):
        self.parent = parent
        self.names: dict = {}

    def define(self, name: str, value) -> None:
        self.names[name] = value

    def lookup(self, name: str):
        env = self
        while env is not None:
            if name in env.names:
                return env.names[name]
            env = env.parent
        raise JsRuntimeError(f"unbound identifier {name!r}")

    def assign(self, name: str, value) -> None:
        env = self
        while env is not None:
            if name in env.names:
                env.names[name] = value
                return
            env = env.parent
        raise JsRuntimeError(f"assignment to undeclared identifier {name!r}")

    def flatten(self) -> dict:
        """Innermost-wins view of every visible binding."""
        chain = []
        env = self
        while env is not None:
            chain.append(env.names)
            env = env.parent
        merged: dict = {}
        for names in reversed(chain):
            merged.update(names)
        return merged


class Closure:
    __slots__ = ("name", "params", "body", "env")

    def __init__(self, name: Optional[str], params: list, body: AstNode, env: Environment):
        self.name = name
        self.params = params
        self.body = body
        self.env = env


class Builtin:
    __slots__ = ("name", "fn")

    def __init__(self, name: str, fn):
        self.name = name
        self.fn = fn


def truthy(value) -> bool:
    if value is JS_NULL or value is JS_UNDEFINED:
        return False
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value != 0.0 and not math.isnan(value)
    if isinstance(value, str):
        return value != ""
    return True


def display(value, _seen: Optional[set] = None) -> str:
    """Human-readable rendering used by print and string concatenation."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, str):
        return value
    if value is JS_NULL:
        return "null"
    if value is JS_UNDEFINED:
        return "undefined"
    if isinstance(value, (Closure, Builtin)):
        return "function"
    if _seen is None:
        _seen = set()
    if id(value) in _seen:
        return "..."
    _seen = _seen | {id(value)}
    if isinstance(value, list):
        return "[" + ", ".join(display(item, _seen) for item in value) + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ", ".join(f"{k}: {display(v, _seen)}" for k, v in value.items())
        return "{ " + inner + " }"
    raise JsRuntimeError(f"unprintable host value {value!r}")


def type_name(value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if value is JS_NULL:
        return "null"
    if value is JS_UNDEFINED:
        return "undefined"
    if isinstance(value, list):
        return "array"
    if isinstance(value, dict):
        return "object"
    if isinstance(value, (Closure, Builtin)):
        return "function"
    return "host"


# Observer signature: (line, innermost Environment, force_pause) -> None
Observer = Callable[[int, Environment, bool], None]


class Interpreter:
    def __init__(
        self,
        *,
        output: Optional[Callable[[str], None]] = None,
        base_dir: Optional[str] = None,
        observer: Optional[Observer] = None,
        meta=None,
    ):
        self.output = output if output is not None else lambda line: print(line)
        self.base_dir = base_dir
        self.observer = observer
        self.meta = meta
        self._line = 0

    # ------------------------------------------------------------------
    # program / statements
    # ------------------------------------------------------------------

    def run(self, program: AstNode) -> Environment:
        if program.kind is not NodeKind.PROGRAM:
            raise JsRuntimeError("interpreter expects a whole program")
        env = Environment()
        self._install_builtins(env)
        try:
            self._exec_body(program.children, env)
        except _ReturnSignal:
            raise JsRuntimeError("return outside a function", self._line)
        except RecursionError:
            raise JsRuntimeError("call stack exhausted", self._line) from None
        return env

    def _exec_body(self, stmts: list, env: Environment) -> None:
        for stmt in stmts:
            if stmt.kind is NodeKind.FUNCTION_DECL:
                self._declare_function(stmt, env)
        for stmt in stmts:
            self._exec_stmt(stmt, env)

    def _declare_function(self, stmt: AstNode, env: Environment) -> None:
        name = self._binding_name(stmt.children[0])
        params = [self._binding_name(p) for p in stmt.children[1:-1]]
        env.define(name, Closure(name, params, stmt.children[-1], env))

    def _binding_name(self, node: AstNode) -> str:
        if node.kind is not NodeKind.IDENTIFIER:
            raise JsRuntimeError(
                f"staging construct {node.kind.value} in a name position at run time",
                self._node_line(node),
            )
        return node.payload

    def _node_line(self, node: AstNode) -> int:
        line = node.span.start_line
        return line if line else self._line

    def _exec_stmt(self, stmt: AstNode, env: Environment) -> None:
        line = self._node_line(stmt)
        self._line = line
        if self.observer is not None:
            self.observer(line, env, stmt.kind is NodeKind.DEBUGGER_STMT)
        kind = stmt.kind
        if kind is NodeKind.VAR_DECL:
            name = self._binding_name(stmt.children[0])
            value = self._eval(stmt.children[1], env) if len(stmt.children) > 1 else JS_UNDEFINED
            env.define(name, value)
        elif kind is NodeKind.FUNCTION_DECL:
            self._declare_function(stmt, env)
        elif kind is NodeKind.RETURN:
            value = self._eval(stmt.children[0], env) if stmt.children else JS_UNDEFINED
            raise _ReturnSignal(value)
        elif kind is NodeKind.IF:
            if truthy(self._eval(stmt.children[0], env)):
                self._exec_stmt(stmt.children[1], env)
            elif len(stmt.children) > 2:
                self._exec_stmt(stmt.children[2], env)
        elif kind is NodeKind.WHILE:
            while truthy(self._eval(stmt.children[0], env)):
                self._exec_stmt(stmt.children[1], env)
        elif kind is NodeKind.FOR_CLASSIC:
            self._exec_for(stmt, env)
        elif kind is NodeKind.FOR_IN:
            self._exec_for_in(stmt, env)
        elif kind is NodeKind.EXPR_STMT:
            self._eval(stmt.children[0], env)
        elif kind is NodeKind.BLOCK:
            for inner in stmt.children:
                self._exec_stmt(inner, env)
        elif kind is NodeKind.EMPTY_STMT or kind is NodeKind.DEBUGGER_STMT:
            pass
        else:
            raise JsRuntimeError(
                f"staging construct {kind.value} survived to run time", line
            )

    def _exec_for(self, stmt: AstNode, env: Environment) -> None:
        init, test, update, body = stmt.children
        if init.kind is not NodeKind.EMPTY_STMT:
            self._exec_loop_clause(init, env)
        while truthy(self._eval(test, env)):
            self._exec_stmt(body, env)
            self._eval(update, env)

    def _exec_loop_clause(self, clause: AstNode, env: Environment) -> None:
        # for-init clauses are statements (VarDecl or ExprStmt) but must not
        # re-enter the observer: the loop head already announced itself.
        if clause.kind is NodeKind.VAR_DECL:
            name = self._binding_name(clause.children[0])
            value = self._eval(clause.children[1], env) if len(clause.children) > 1 else JS_UNDEFINED
            env.define(name, value)
        elif clause.kind is NodeKind.EXPR_STMT:
            self._eval(clause.children[0], env)
        else:
            raise JsRuntimeError(
                f"unsupported for-loop clause {clause.kind.value}", self._line
            )

    def _exec_for_in(self, stmt: AstNode, env: Environment) -> None:
        target, subject, body = stmt.children
        value = self._eval(subject, env)
        if isinstance(value, list):
            items = [float(i) for i in range(len(value))]
        elif isinstance(value, dict):
            items = list(value.keys())
        else:
            raise JsRuntimeError(
                f"for-in needs an array or object, got {type_name(value)}",
                self._node_line(subject),
            )
        if target.kind is NodeKind.VAR_DECL:
            name = self._binding_name(target.children[0])
        else:
            name = self._binding_name(target)
        for item in items:
            # The loop variable is (re)defined rather than assigned so a
            # bare-identifier target works without a prior var.
            env.define(name, item)
            self._exec_stmt(body, env)

    # ------------------------------------------------------------------
    # expressions
    # ------------------------------------------------------------------

    def _eval(self, node: AstNode, env: Environment):
        kind = node.kind
        if kind is NodeKind.NUMBER_LIT:
            return node.payload
        if kind is NodeKind.STRING_LIT:
            return node.payload
        if kind is NodeKind.BOOL_LIT:
            return node.payload
        if kind is NodeKind.NULL_LIT:
            return JS_NULL
        if kind is NodeKind.UNDEFINED_LIT:
            return JS_UNDEFINED
        if kind is NodeKind.IDENTIFIER:
            try:
                return env.lookup(node.payload)
            except JsRuntimeError as exc:
                raise JsRuntimeError(exc.message, self._node_line(node)) from None
        if kind is NodeKind.ARRAY_LIT:
            return [self._eval(item, env) for item in node.children]
        if kind is NodeKind.OBJECT_LIT:
            obj: dict = {}
            for prop in node.children:
                obj[prop.payload] = self._eval(prop.children[0], env)
            return obj
        if kind is NodeKind.FUNCTION_EXPR:
            params = [self._binding_name(p) for p in node.children[:-1]]
            return Closure(None, params, node.children[-1], env)
        if kind is NodeKind.MEMBER:
            return self._read_member(node, env)
        if kind is NodeKind.INDEX:
            return self._read_index(node, env)
        if kind is NodeKind.ASSIGN:
            return self._eval_assign(node, env)
        if kind is NodeKind.BINARY:
            return self._eval_binary(node, env)
        if kind is NodeKind.UNARY:
            return self._eval_unary(node, env)
        if kind is NodeKind.CONDITIONAL:
            test = self._eval(node.children[0], env)
            branch = node.children[1] if truthy(test) else node.children[2]
            return self._eval(branch, env)
        if kind is NodeKind.CALL:
            return self._eval_call(node, env)
        if kind is NodeKind.NEW:
            return self._eval_new(node, env)
        raise JsRuntimeError(
            f"staging construct {kind.value} survived to run time",
            self._node_line(node),
        )

    def _read_member(self, node: AstNode, env: Environment):
        obj = self._eval(node.children[0], env)
        if isinstance(obj, dict):
            return obj.get(node.payload, JS_UNDEFINED)
        raise JsRuntimeError(
            f"cannot read property {node.payload!r} of {type_name(obj)}",
            self._node_line(node),
        )

    def _index_key(self, container, key, line: int):
        if isinstance(container, list):
            if not isinstance(key, float) or isinstance(key, bool) or key != int(key):
                raise JsRuntimeError(
                    f"array index must be a whole number, got {display(key)}", line
                )
            return int(key)
        if isinstance(container, dict):
            if isinstance(key, str):
                return key
            if isinstance(key, float) and not isinstance(key, bool):
                return format_number(key)
            raise JsRuntimeError(
                f"object key must be a string or number, got {type_name(key)}", line
            )
        raise JsRuntimeError(f"cannot index into {type_name(container)}", line)

    def _read_index(self, node: AstNode, env: Environment):
        container = self._eval(node.children[0], env)
        key = self._eval(node.children[1], env)
        line = self._node_line(node)
        resolved = self._index_key(container, key, line)
        if isinstance(container, list):
            if 0 <= resolved < len(container):
                return container[resolved]
            return JS_UNDEFINED
        return container.get(resolved, JS_UNDEFINED)

    def _eval_assign(self, node: AstNode, env: Environment):
        target, rhs = node.children
        value = self._eval(rhs, env)
        if target.kind is NodeKind.IDENTIFIER:
            try:
                env.assign(target.payload, value)
            except JsRuntimeError as exc:
                raise JsRuntimeError(exc.message, self._node_line(node)) from None
        elif target.kind is NodeKind.MEMBER:
            obj = self._eval(target.children[0], env)
            if not isinstance(obj, dict):
                raise JsRuntimeError(
                    f"cannot set property {target.payload!r} on {type_name(obj)}",
                    self._node_line(node),
                )
            obj[target.payload] = value
        elif target.kind is NodeKind.INDEX:
            container = self._eval(target.children[0], env)
            key = self._eval(target.children[1], env)
            line = self._node_line(node)
            resolved = self._index_key(container, key, line)
            if isinstance(container, list):
                if 0 <= resolved < len(container):
                    container[resolved] = value
                elif resolved == len(container):
                    container.append(value)
                else:
                    raise JsRuntimeError(
                        f"array index {resolved} out of range", line
                    )
            else:
                container[resolved] = value
        else:
            raise JsRuntimeError(
                "invalid assignment target", self._node_line(node)
            )
        return value

    def _want_number(self, value, op: str, line: int) -> float:
        if isinstance(value, float) and not isinstance(value, bool):
            return value
        raise JsRuntimeError(
            f"operator {op} needs numbers, got {type_name(value)}", line
        )

    def _eval_binary(self, node: AstNode, env: Environment):
        op = node.payload
        line = self._node_line(node)
        if op == "&&":
            left = self._eval(node.children[0], env)
            return self._eval(node.children[1], env) if truthy(left) else left
        if op == "||":
            left = self._eval(node.children[0], env)
            return left if truthy(left) else self._eval(node.children[1], env)
        left = self._eval(node.children[0], env)
        right = self._eval(node.children[1], env)
        if op == "+":
            if isinstance(left, str) or isinstance(right, str):
                return display(left) + display(right)
            return self._finite(
                self._want_number(left, op, line) + self._want_number(right, op, line),
                line,
            )
        if op in ("-", "*", "/", "%"):
            a = self._want_number(left, op, line)
            b = self._want_number(right, op, line)
            if op == "-":
                return self._finite(a - b, line)
            if op == "*":
                return self._finite(a * b, line)
            if b == 0.0:
                raise JsRuntimeError("division by zero", line)
            if op == "/":
                return self._finite(a / b, line)
            return self._finite(math.fmod(a, b), line)
        if op == "==":
            return self._equals(left, right)
        if op == "!=":
            return not self._equals(left, right)
        if op in ("<", "<=", ">", ">="):
            return self._compare(op, left, right, line)
        raise JsRuntimeError(f"unknown operator {op!r}", line)

    @staticmethod
    def _finite(value: float, line: int) -> float:
        if math.isfinite(value):
            return value
        raise JsRuntimeError("arithmetic overflow", line)

    @staticmethod
    def _equals(left, right) -> bool:
        if isinstance(left, bool) or isinstance(right, bool):
            return left is right if isinstance(left, bool) and isinstance(right, bool) else False
        if isinstance(left, float) and isinstance(right, float):
            return left == right
        if isinstance(left, str) and isinstance(right, str):
            return left == right
        return left is right

    def _compare(self, op: str, left, right, line: int) -> bool:
        if isinstance(left, str) and isinstance(right, str):
            pass
        else:
            left = self._want_number(left, op, line)
            right = self._want_number(right, op, line)
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right

    def _eval_unary(self, node: AstNode, env: Environment):
        op = node.payload
        value = self._eval(node.children[0], env)
        if op == "!":
            return not truthy(value)
        if op == "-":
            return -self._want_number(value, "unary -", self._node_line(node))
        if op == "typeof":
            return type_name(value)
        raise JsRuntimeError(f"unknown unary operator {op!r}", self._node_line(node))

    def _eval_call(self, node: AstNode, env: Environment):
        callee = self._eval(node.children[0], env)
        args = [self._eval(arg, env) for arg in node.children[1:]]
        line = self._node_line(node)
        return self._invoke(callee, args, line)

    def _invoke(self, callee, args: list, line: int):
        if isinstance(callee, Builtin):
            try:
                return callee.fn(*args)
            except StagedError as exc:
                if exc.line is None:
                    exc.line = line
                raise
            except TypeError:
                raise JsRuntimeError(
                    f"wrong number of arguments for {callee.name}", line
                ) from None
        if isinstance(callee, Closure):
            frame = Environment(callee.env)
            for i, name in enumerate(callee.params):
                frame.define(name, args[i] if i < len(args) else JS_UNDEFINED)
            caller_line = self._line
            try:
                self._exec_body(callee.body.children, frame)
            except _ReturnSignal as signal:
                return signal.value
            finally:
                self._line = caller_line
            return JS_UNDEFINED
        raise JsRuntimeError(f"cannot call a {type_name(callee)} value", line)

    def _eval_new(self, node: AstNode, env: Environment):
        callee = self._eval(node.children[0], env)
        args = [self._eval(arg, env) for arg in node.children[1:]]
        line = self._node_line(node)
        if not isinstance(callee, Closure):
            raise JsRuntimeError(
                f"new needs a function, got {type_name(callee)}", line
            )
        instance: dict = {}
        frame = Environment(callee.env)
        frame.define("this", instance)
        for i, name in enumerate(callee.params):
            frame.define(name, args[i] if i < len(args) else JS_UNDEFINED)
        caller_line = self._line
        try:
            self._exec_body(callee.body.children, frame)
        except _ReturnSignal:
            pass
        finally:
            self._line = caller_line
        return instance

    # ------------------------------------------------------------------
    # builtins
    # ------------------------------------------------------------------

    def _install_builtins(self, env: Environment) -> None:
        def bi(name, fn):
            env.define(name, Builtin(name, fn))

        bi("print", self._builtin_print)
        bi("len", self._builtin_len)
        bi("push", self._builtin_push)
        bi("keys", self._builtin_keys)
        bi("str", lambda value: display(value))
        bi("num", self._builtin_num)
        bi("loadSpecs", self._builtin_load_specs)
        if self.meta is not None:
            bi("__metaInline", self._builtin_meta_inline)
            bi("__metaEscape", self.meta.escape)
            bi("__metaUnique", self._builtin_meta_unique)
            bi("__metaQuoteId", self.meta.quote_id)

    def _builtin_print(self, *values):
        self.output(" ".join(display(v) for v in values))
        return JS_UNDEFINED

    @staticmethod
    def _builtin_len(value):
        if isinstance(value, (str, list)):
            return float(len(value))
        if isinstance(value, dict):
            return float(len(value))
        raise JsRuntimeError(f"len needs a string, array or object, got {type_name(value)}")

    @staticmethod
    def _builtin_push(array, value):
        if not isinstance(array, list):
            raise JsRuntimeError(f"push needs an array, got {type_name(array)}")
        array.append(value)
        return float(len(array))

    @staticmethod
    def _builtin_keys(obj):
        if not isinstance(obj, dict):
            raise JsRuntimeError(f"keys needs an object, got {type_name(obj)}")
        return list(obj.keys())

    @staticmethod
    def _builtin_num(value):
        if isinstance(value, bool):
            return 1.0 if value else 0.0
        if isinstance(value, float):
            return value
        if isinstance(value, str):
            try:
                result = float(value)
            except ValueError:
                raise JsRuntimeError(f"cannot convert {value!r} to a number") from None
            if not math.isfinite(result):
                raise JsRuntimeError(f"cannot convert {value!r} to a number")
            return result
        raise JsRuntimeError(f"cannot convert {type_name(value)} to a number")

    def _builtin_load_specs(self, path):
        if not isinstance(path, str):
            raise JsRuntimeError(f"loadSpecs needs a path string, got {type_name(path)}")
        if self.base_dir is not None and not path.startswith("/"):
            import os

            path = os.path.join(self.base_dir, path)
        return uispec.load_specs(path)

    def _builtin_meta_inline(self, value):
        self.meta.inline(value)
        return JS_UNDEFINED

    def _builtin_meta_unique(self, name, qid):
        if not isinstance(name, str):
            raise JsRuntimeError("unique-name request needs a string")
        return self.meta.unique_name(name, qid)


def run_program(
    program: AstNode,
    *,
    output: Optional[Callable[[str], None]] = None,
    base_dir: Optional[str] = None,
    observer: Optional[Observer] = None,
    meta=None,
) -> Environment:
    interp = Interpreter(output=output, base_dir=base_dir, observer=observer, meta=meta)
    return interp.run(program)
