"""Reflection layer: MiniJS trees as plain runtime values.

Staged code manipulates programs as ordinary dict/list values ("node
values") whose shape mirrors a conventional JS AST: every node value is
a dict with a "type" field naming the node type plus per-type fields.
This module is the single source of truth for that shape:

  * `plan_node` describes, per AST node, the node value its type maps
    to — a small template tree reused by both `ast_to_reflection` and
    the stage translator (which turns the same template into MiniJS
    object-literal code with holes for escapes).
  * `reflection_to_ast` validates a runtime value against the schema
    and rebuilds the AST, reporting violations with a `$`-rooted path.
  * `is_ast_value` is the boolean form of that validation.

docs/reflection_schema.md is generated from `plan_node` via
`schema_table()`; a test pins the two together.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    STATEMENT_KINDS,
    AstNode,
    NodeKind,
    make_node,
)
from .errors import StagedError
from .lexer import KEYWORDS
from .values import JS_NULL, JS_UNDEFINED


class MalformedReflection(StagedError):
    pass


BINARY_OPERATORS = frozenset(
    {"||", "&&", "==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/", "%"}
)
UNARY_OPERATORS = frozenset({"!", "-", "typeof"})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_NAME_SLOT_KINDS = frozenset(
    {NodeKind.IDENTIFIER, NodeKind.UNIQUE_IDENT, NodeKind.ESCAPE, NodeKind.INLINE}
)
_ASSIGN_TARGET_KINDS = frozenset(
    {NodeKind.IDENTIFIER, NodeKind.UNIQUE_IDENT, NodeKind.MEMBER, NodeKind.INDEX}
)
_EXPRESSION_KINDS = frozenset(
    k
    for k in NodeKind
    if k not in STATEMENT_KINDS and k not in (NodeKind.PROGRAM, NodeKind.PROPERTY)
)


# --------------------------------------------------------------------------
# Conversion plans: the schema in executable form.


@dataclass(frozen=True)
class PlanScalar:
    value: object


@dataclass(frozen=True)
class PlanChild:
    node: AstNode


@dataclass(frozen=True)
class PlanList:
    items: tuple


@dataclass(frozen=True)
class PlanDict:
    type_name: str
    fields: tuple  # of (field_name, plan) pairs


def plan_node(node: AstNode) -> PlanDict:
    """The node-value template for one AST node (children stay AST refs)."""
    k = node.kind
    c = node.children

    if k is NodeKind.PROGRAM:
        return PlanDict("Program", (("body", PlanList(tuple(map(PlanChild, c)))),))
    if k is NodeKind.BLOCK:
        return PlanDict(
            "BlockStatement", (("body", PlanList(tuple(map(PlanChild, c)))),)
        )
    if k is NodeKind.VAR_DECL:
        declarator_fields = [("id", PlanChild(c[0]))]
        if len(c) == 2:
            declarator_fields.append(("init", PlanChild(c[1])))
        declarator = PlanDict("VariableDeclarator", tuple(declarator_fields))
        return PlanDict("VariableDeclaration", (("declarations", PlanList((declarator,))),))
    if k is NodeKind.FUNCTION_DECL:
        return PlanDict(
            "FunctionDeclaration",
            (
                ("id", PlanChild(c[0])),
                ("params", PlanList(tuple(map(PlanChild, c[1:-1])))),
                ("body", PlanChild(c[-1])),
            ),
        )
    if k is NodeKind.FUNCTION_EXPR:
        return PlanDict(
            "FunctionExpression",
            (
                ("params", PlanList(tuple(map(PlanChild, c[:-1])))),
                ("body", PlanChild(c[-1])),
            ),
        )
    if k is NodeKind.RETURN:
        fields = (("argument", PlanChild(c[0])),) if c else ()
        return PlanDict("ReturnStatement", fields)
    if k is NodeKind.IF:
        fields = [("test", PlanChild(c[0])), ("consequent", PlanChild(c[1]))]
        if len(c) == 3:
            fields.append(("alternate", PlanChild(c[2])))
        return PlanDict("IfStatement", tuple(fields))
    if k is NodeKind.WHILE:
        return PlanDict(
            "WhileStatement", (("test", PlanChild(c[0])), ("body", PlanChild(c[1])))
        )
    if k is NodeKind.FOR_CLASSIC:
        return PlanDict(
            "ForStatement",
            (
                ("init", PlanChild(c[0])),
                ("test", PlanChild(c[1])),
                ("update", PlanChild(c[2])),
                ("body", PlanChild(c[3])),
            ),
        )
    if k is NodeKind.FOR_IN:
        return PlanDict(
            "ForInStatement",
            (
                ("left", PlanChild(c[0])),
                ("right", PlanChild(c[1])),
                ("body", PlanChild(c[2])),
            ),
        )
    if k is NodeKind.EXPR_STMT:
        if c[0].kind is NodeKind.INLINE:
            return PlanDict(
                "InlineDirective",
                (
                    ("argument", PlanChild(c[0].children[0])),
                    ("position", PlanScalar("stmt")),
                ),
            )
        return PlanDict("ExpressionStatement", (("expression", PlanChild(c[0])),))
    if k is NodeKind.EMPTY_STMT:
        return PlanDict("EmptyStatement", ())
    if k is NodeKind.DEBUGGER_STMT:
        return PlanDict("DebuggerStatement", ())
    if k is NodeKind.ASSIGN:
        return PlanDict(
            "AssignmentExpression",
            (
                ("operator", PlanScalar("=")),
                ("left", PlanChild(c[0])),
                ("right", PlanChild(c[1])),
            ),
        )
    if k is NodeKind.BINARY:
        return PlanDict(
            "BinaryExpression",
            (
                ("operator", PlanScalar(str(node.payload))),
                ("left", PlanChild(c[0])),
                ("right", PlanChild(c[1])),
            ),
        )
    if k is NodeKind.UNARY:
        return PlanDict(
            "UnaryExpression",
            (
                ("operator", PlanScalar(str(node.payload))),
                ("argument", PlanChild(c[0])),
            ),
        )
    if k is NodeKind.CONDITIONAL:
        return PlanDict(
            "ConditionalExpression",
            (
                ("test", PlanChild(c[0])),
                ("consequent", PlanChild(c[1])),
                ("alternate", PlanChild(c[2])),
            ),
        )
    if k is NodeKind.CALL:
        return PlanDict(
            "CallExpression",
            (
                ("callee", PlanChild(c[0])),
                ("arguments", PlanList(tuple(map(PlanChild, c[1:])))),
            ),
        )
    if k is NodeKind.NEW:
        return PlanDict(
            "NewExpression",
            (
                ("callee", PlanChild(c[0])),
                ("arguments", PlanList(tuple(map(PlanChild, c[1:])))),
            ),
        )
    if k is NodeKind.MEMBER:
        prop = PlanDict("Identifier", (("name", PlanScalar(str(node.payload))),))
        return PlanDict(
            "MemberExpression",
            (
                ("object", PlanChild(c[0])),
                ("property", prop),
                ("computed", PlanScalar(False)),
            ),
        )
    if k is NodeKind.INDEX:
        return PlanDict(
            "MemberExpression",
            (
                ("object", PlanChild(c[0])),
                ("property", PlanChild(c[1])),
                ("computed", PlanScalar(True)),
            ),
        )
    if k is NodeKind.IDENTIFIER:
        return PlanDict("Identifier", (("name", PlanScalar(str(node.payload))),))
    if k is NodeKind.UNIQUE_IDENT:
        return PlanDict("UniqueIdentifier", (("name", PlanScalar(str(node.payload))),))
    if k is NodeKind.NUMBER_LIT:
        return PlanDict("Literal", (("value", PlanScalar(float(node.payload))),))
    if k is NodeKind.STRING_LIT:
        return PlanDict("Literal", (("value", PlanScalar(str(node.payload))),))
    if k is NodeKind.BOOL_LIT:
        return PlanDict("Literal", (("value", PlanScalar(bool(node.payload))),))
    if k is NodeKind.NULL_LIT:
        return PlanDict("Literal", (("value", PlanScalar(JS_NULL)),))
    if k is NodeKind.UNDEFINED_LIT:
        return PlanDict("UndefinedLiteral", ())
    if k is NodeKind.OBJECT_LIT:
        return PlanDict(
            "ObjectExpression", (("properties", PlanList(tuple(map(PlanChild, c)))),)
        )
    if k is NodeKind.PROPERTY:
        key = PlanDict("Literal", (("value", PlanScalar(str(node.payload))),))
        return PlanDict("Property", (("key", key), ("value", PlanChild(c[0]))))
    if k is NodeKind.ARRAY_LIT:
        return PlanDict(
            "ArrayExpression", (("elements", PlanList(tuple(map(PlanChild, c)))),)
        )
    if k is NodeKind.QUASI_QUOTE:
        return PlanDict(
            "QuasiQuote",
            (
                ("bodyKind", PlanScalar(str(node.payload))),
                ("body", PlanChild(c[0])),
            ),
        )
    if k is NodeKind.ESCAPE:
        return PlanDict("EscapeExpression", (("argument", PlanChild(c[0])),))
    if k is NodeKind.INLINE:
        return PlanDict(
            "InlineDirective",
            (("argument", PlanChild(c[0])), ("position", PlanScalar("expr"))),
        )
    if k is NodeKind.EXECUTE:
        return PlanDict("ExecuteDirective", (("body", PlanChild(c[0])),))
    raise MalformedReflection(f"{k.value} has no node-value form")


def ast_to_reflection(node: AstNode) -> dict:
    return _eval_plan(plan_node(node))


def _eval_plan(plan):
    if isinstance(plan, PlanDict):
        out = {"type": plan.type_name}
        for name, sub in plan.fields:
            out[name] = _eval_plan(sub)
        return out
    if isinstance(plan, PlanList):
        return [_eval_plan(item) for item in plan.items]
    if isinstance(plan, PlanChild):
        return _eval_plan(plan_node(plan.node))
    return plan.value


# --------------------------------------------------------------------------
# Validation + reconstruction.


def is_ast_value(value: object) -> bool:
    try:
        reflection_to_ast(value)
        return True
    except MalformedReflection:
        return False


def reflection_to_ast(value: object, path: str = "$") -> AstNode:
    d = _need_node_dict(value, path)
    type_name = d["type"]
    builder = _BUILDERS.get(type_name)
    if builder is None:
        raise MalformedReflection(f"{path}: unknown node type {type_name!r}")
    return builder(d, path)


def _need_node_dict(value: object, path: str) -> dict:
    if not isinstance(value, dict):
        raise MalformedReflection(
            f"{path}: expected a node value, got {_describe(value)}"
        )
    type_name = value.get("type")
    if not isinstance(type_name, str):
        raise MalformedReflection(f"{path}: node value lacks a string 'type' field")
    return value


def _describe(value: object) -> str:
    if value is JS_NULL:
        return "null"
    if value is JS_UNDEFINED:
        return "undefined"
    if isinstance(value, bool):
        return "a boolean"
    if isinstance(value, (int, float)):
        return "a number"
    if isinstance(value, str):
        return "a string"
    if isinstance(value, list):
        return "an array"
    if isinstance(value, dict):
        return "an object"
    return type(value).__name__


def _check_keys(d: dict, path: str, required: tuple, optional: tuple = ()) -> None:
    allowed = {"type", *required, *optional}
    for key in d:
        if key not in allowed:
            raise MalformedReflection(
                f"{path}: unexpected field {key!r} on {d['type']}"
            )
    for key in required:
        if key not in d:
            raise MalformedReflection(f"{path}: {d['type']} is missing {key!r}")


def _opt_field(d: dict, key: str):
    """Optional slots treat a missing key, null and undefined alike."""
    v = d.get(key)
    if v is JS_NULL or v is JS_UNDEFINED:
        return None
    return v


def _need_list(d: dict, key: str, path: str) -> list:
    v = d[key]
    if not isinstance(v, list):
        raise MalformedReflection(
            f"{path}.{key}: expected an array, got {_describe(v)}"
        )
    return v


def _expr(value: object, path: str) -> AstNode:
    node = reflection_to_ast(value, path)
    if node.kind not in _EXPRESSION_KINDS:
        raise MalformedReflection(f"{path}: {node.kind.value} is not an expression")
    return node


def _stmt(value: object, path: str) -> AstNode:
    node = reflection_to_ast(value, path)
    if node.kind not in STATEMENT_KINDS:
        raise MalformedReflection(f"{path}: {node.kind.value} is not a statement")
    return node


def _name_slot(value: object, path: str) -> AstNode:
    node = reflection_to_ast(value, path)
    if node.kind not in _NAME_SLOT_KINDS:
        raise MalformedReflection(
            f"{path}: {node.kind.value} cannot fill a binding-name slot"
        )
    return node


def _valid_name(name: object, path: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name) or name in KEYWORDS:
        raise MalformedReflection(f"{path}.name: {name!r} is not a valid identifier")
    return name


def _build_program(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("body",))
    body = _need_list(d, "body", path)
    return make_node(
        NodeKind.PROGRAM,
        [_stmt(s, f"{path}.body[{i}]") for i, s in enumerate(body)],
    )


def _build_block(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("body",))
    body = _need_list(d, "body", path)
    return make_node(
        NodeKind.BLOCK,
        [_stmt(s, f"{path}.body[{i}]") for i, s in enumerate(body)],
    )


def _build_var_decl(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("declarations",))
    decls = _need_list(d, "declarations", path)
    if len(decls) != 1:
        raise MalformedReflection(
            f"{path}.declarations: expected exactly one declarator, got {len(decls)}"
        )
    dpath = f"{path}.declarations[0]"
    decl = _need_node_dict(decls[0], dpath)
    if decl["type"] != "VariableDeclarator":
        raise MalformedReflection(
            f"{dpath}: expected a VariableDeclarator, got {decl['type']!r}"
        )
    _check_keys(decl, dpath, ("id",), ("init",))
    children = [_name_slot(decl["id"], f"{dpath}.id")]
    init = _opt_field(decl, "init")
    if init is not None:
        children.append(_expr(init, f"{dpath}.init"))
    return make_node(NodeKind.VAR_DECL, children)


def _build_function_decl(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("id", "params", "body"))
    children = [_name_slot(d["id"], f"{path}.id")]
    for i, p in enumerate(_need_list(d, "params", path)):
        children.append(_name_slot(p, f"{path}.params[{i}]"))
    children.append(_block_slot(d["body"], f"{path}.body"))
    return make_node(NodeKind.FUNCTION_DECL, children)


def _build_function_expr(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("params", "body"))
    children = [
        _name_slot(p, f"{path}.params[{i}]")
        for i, p in enumerate(_need_list(d, "params", path))
    ]
    children.append(_block_slot(d["body"], f"{path}.body"))
    return make_node(NodeKind.FUNCTION_EXPR, children)


def _block_slot(value: object, path: str) -> AstNode:
    node = reflection_to_ast(value, path)
    if node.kind is not NodeKind.BLOCK:
        raise MalformedReflection(
            f"{path}: function bodies must be BlockStatement nodes"
        )
    return node


def _build_return(d: dict, path: str) -> AstNode:
    _check_keys(d, path, (), ("argument",))
    arg = _opt_field(d, "argument")
    children = [] if arg is None else [_expr(arg, f"{path}.argument")]
    return make_node(NodeKind.RETURN, children)


def _build_if(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("test", "consequent"), ("alternate",))
    children = [
        _expr(d["test"], f"{path}.test"),
        _stmt(d["consequent"], f"{path}.consequent"),
    ]
    alt = _opt_field(d, "alternate")
    if alt is not None:
        children.append(_stmt(alt, f"{path}.alternate"))
    return make_node(NodeKind.IF, children)


def _build_while(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("test", "body"))
    return make_node(
        NodeKind.WHILE,
        [_expr(d["test"], f"{path}.test"), _stmt(d["body"], f"{path}.body")],
    )


def _build_for(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("init", "test", "update", "body"))
    init = reflection_to_ast(d["init"], f"{path}.init")
    if init.kind not in (NodeKind.VAR_DECL, NodeKind.EXPR_STMT, NodeKind.EMPTY_STMT):
        raise MalformedReflection(
            f"{path}.init: {init.kind.value} cannot head a for loop"
        )
    return make_node(
        NodeKind.FOR_CLASSIC,
        [
            init,
            _expr(d["test"], f"{path}.test"),
            _expr(d["update"], f"{path}.update"),
            _stmt(d["body"], f"{path}.body"),
        ],
    )


def _build_for_in(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("left", "right", "body"))
    left = reflection_to_ast(d["left"], f"{path}.left")
    if left.kind is NodeKind.VAR_DECL:
        if len(left.children) != 1:
            raise MalformedReflection(
                f"{path}.left: a for-in declaration cannot carry an initializer"
            )
    elif left.kind is not NodeKind.IDENTIFIER:
        raise MalformedReflection(
            f"{path}.left: {left.kind.value} cannot be a for-in target"
        )
    return make_node(
        NodeKind.FOR_IN,
        [
            left,
            _expr(d["right"], f"{path}.right"),
            _stmt(d["body"], f"{path}.body"),
        ],
    )


def _build_expr_stmt(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("expression",))
    return make_node(
        NodeKind.EXPR_STMT, [_expr(d["expression"], f"{path}.expression")]
    )


def _build_empty(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ())
    return make_node(NodeKind.EMPTY_STMT, [])


def _build_debugger(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ())
    return make_node(NodeKind.DEBUGGER_STMT, [])


def _build_assign(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("operator", "left", "right"))
    if d["operator"] != "=":
        raise MalformedReflection(
            f"{path}.operator: only plain assignment is supported, got {d['operator']!r}"
        )
    left = _expr(d["left"], f"{path}.left")
    if left.kind not in _ASSIGN_TARGET_KINDS:
        raise MalformedReflection(
            f"{path}.left: cannot assign to {left.kind.value}"
        )
    return make_node(NodeKind.ASSIGN, [left, _expr(d["right"], f"{path}.right")])


def _build_binary(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("operator", "left", "right"))
    op = d["operator"]
    if op not in BINARY_OPERATORS:
        raise MalformedReflection(f"{path}.operator: unknown operator {op!r}")
    return make_node(
        NodeKind.BINARY,
        [_expr(d["left"], f"{path}.left"), _expr(d["right"], f"{path}.right")],
        op,
    )


def _build_unary(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("operator", "argument"))
    op = d["operator"]
    if op not in UNARY_OPERATORS:
        raise MalformedReflection(f"{path}.operator: unknown operator {op!r}")
    return make_node(NodeKind.UNARY, [_expr(d["argument"], f"{path}.argument")], op)


def _build_conditional(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("test", "consequent", "alternate"))
    return make_node(
        NodeKind.CONDITIONAL,
        [
            _expr(d["test"], f"{path}.test"),
            _expr(d["consequent"], f"{path}.consequent"),
            _expr(d["alternate"], f"{path}.alternate"),
        ],
    )


def _build_call(d: dict, path: str) -> AstNode:
    return _build_call_like(d, path, NodeKind.CALL)


def _build_new(d: dict, path: str) -> AstNode:
    return _build_call_like(d, path, NodeKind.NEW)


def _build_call_like(d: dict, path: str, kind: NodeKind) -> AstNode:
    _check_keys(d, path, ("callee", "arguments"))
    children = [_expr(d["callee"], f"{path}.callee")]
    for i, a in enumerate(_need_list(d, "arguments", path)):
        children.append(_expr(a, f"{path}.arguments[{i}]"))
    return make_node(kind, children)


def _build_member(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("object", "property", "computed"))
    computed = d["computed"]
    if not isinstance(computed, bool):
        raise MalformedReflection(f"{path}.computed: expected a boolean")
    obj = _expr(d["object"], f"{path}.object")
    if computed:
        return make_node(NodeKind.INDEX, [obj, _expr(d["property"], f"{path}.property")])
    prop = _need_node_dict(d["property"], f"{path}.property")
    if prop["type"] != "Identifier":
        raise MalformedReflection(
            f"{path}.property: dotted access needs an Identifier property"
        )
    _check_keys(prop, f"{path}.property", ("name",))
    name = _valid_name(prop["name"], f"{path}.property")
    return make_node(NodeKind.MEMBER, [obj], name)


def _build_identifier(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("name",))
    return make_node(NodeKind.IDENTIFIER, [], _valid_name(d["name"], path))


def _build_unique_ident(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("name",))
    return make_node(NodeKind.UNIQUE_IDENT, [], _valid_name(d["name"], path))


def _build_literal(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("value",))
    v = d["value"]
    if isinstance(v, bool):
        return make_node(NodeKind.BOOL_LIT, [], v)
    if isinstance(v, (int, float)):
        f = float(v)
        if f != f or f in (float("inf"), float("-inf")):
            raise MalformedReflection(
                f"{path}.value: non-finite numbers have no literal form"
            )
        if f < 0:
            # Number tokens are unsigned; negatives are canonically a
            # unary minus over the magnitude so emitted text re-parses
            # to an identical tree.
            return make_node(
                NodeKind.UNARY, [make_node(NodeKind.NUMBER_LIT, [], -f)], "-"
            )
        return make_node(NodeKind.NUMBER_LIT, [], f)
    if isinstance(v, str):
        return make_node(NodeKind.STRING_LIT, [], v)
    if v is JS_NULL:
        return make_node(NodeKind.NULL_LIT, [])
    raise MalformedReflection(
        f"{path}.value: literals hold numbers, strings, booleans or null, "
        f"got {_describe(v)}"
    )


def _build_undefined(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ())
    return make_node(NodeKind.UNDEFINED_LIT, [])


def _build_object(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("properties",))
    props = []
    for i, p in enumerate(_need_list(d, "properties", path)):
        props.append(_build_property_entry(p, f"{path}.properties[{i}]"))
    return make_node(NodeKind.OBJECT_LIT, props)


def _build_property_entry(value: object, path: str) -> AstNode:
    d = _need_node_dict(value, path)
    if d["type"] != "Property":
        raise MalformedReflection(f"{path}: expected a Property, got {d['type']!r}")
    _check_keys(d, path, ("key", "value"))
    key = _need_node_dict(d["key"], f"{path}.key")
    if key["type"] == "Identifier":
        _check_keys(key, f"{path}.key", ("name",))
        key_text = _valid_name(key["name"], f"{path}.key")
    elif key["type"] == "Literal":
        _check_keys(key, f"{path}.key", ("value",))
        if not isinstance(key["value"], str):
            raise MalformedReflection(
                f"{path}.key: property-key literals must be strings"
            )
        key_text = key["value"]
    else:
        raise MalformedReflection(
            f"{path}.key: expected an Identifier or string Literal"
        )
    return make_node(
        NodeKind.PROPERTY, [_expr(d["value"], f"{path}.value")], key_text
    )


def _build_array(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("elements",))
    return make_node(
        NodeKind.ARRAY_LIT,
        [
            _expr(e, f"{path}.elements[{i}]")
            for i, e in enumerate(_need_list(d, "elements", path))
        ],
    )


def _build_quote(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("bodyKind", "body"))
    body_kind = d["bodyKind"]
    if body_kind == "expr":
        body = _expr(d["body"], f"{path}.body")
    elif body_kind == "stmts":
        body = reflection_to_ast(d["body"], f"{path}.body")
        if body.kind is not NodeKind.PROGRAM:
            raise MalformedReflection(
                f"{path}.body: a 'stmts' quote body must be a Program"
            )
    else:
        raise MalformedReflection(
            f"{path}.bodyKind: expected 'expr' or 'stmts', got {body_kind!r}"
        )
    return make_node(NodeKind.QUASI_QUOTE, [body], body_kind)


def _build_escape(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("argument",))
    return make_node(NodeKind.ESCAPE, [_expr(d["argument"], f"{path}.argument")])


def _build_inline(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("argument", "position"))
    position = d["position"]
    if position not in ("stmt", "expr"):
        raise MalformedReflection(
            f"{path}.position: expected 'stmt' or 'expr', got {position!r}"
        )
    inline = make_node(NodeKind.INLINE, [_expr(d["argument"], f"{path}.argument")])
    if position == "stmt":
        return make_node(NodeKind.EXPR_STMT, [inline])
    return inline


def _build_execute(d: dict, path: str) -> AstNode:
    _check_keys(d, path, ("body",))
    return make_node(NodeKind.EXECUTE, [_stmt(d["body"], f"{path}.body")])


_BUILDERS = {
    "Program": _build_program,
    "BlockStatement": _build_block,
    "VariableDeclaration": _build_var_decl,
    "FunctionDeclaration": _build_function_decl,
    "FunctionExpression": _build_function_expr,
    "ReturnStatement": _build_return,
    "IfStatement": _build_if,
    "WhileStatement": _build_while,
    "ForStatement": _build_for,
    "ForInStatement": _build_for_in,
    "ExpressionStatement": _build_expr_stmt,
    "EmptyStatement": _build_empty,
    "DebuggerStatement": _build_debugger,
    "AssignmentExpression": _build_assign,
    "BinaryExpression": _build_binary,
    "UnaryExpression": _build_unary,
    "ConditionalExpression": _build_conditional,
    "CallExpression": _build_call,
    "NewExpression": _build_new,
    "MemberExpression": _build_member,
    "Identifier": _build_identifier,
    "UniqueIdentifier": _build_unique_ident,
    "Literal": _build_literal,
    "UndefinedLiteral": _build_undefined,
    "ObjectExpression": _build_object,
    "ArrayExpression": _build_array,
    "QuasiQuote": _build_quote,
    "EscapeExpression": _build_escape,
    "InlineDirective": _build_inline,
    "ExecuteDirective": _build_execute,
}

NODE_TYPE_NAMES = frozenset(_BUILDERS) | {"VariableDeclarator", "Property"}


def schema_table() -> list[tuple[str, str]]:
    """(type name, field summary) rows for the docs generator."""
    rows = [
        ("Program", "body: [Statement]"),
        ("BlockStatement", "body: [Statement]"),
        (
            "VariableDeclaration",
            "declarations: [VariableDeclarator] (exactly one)",
        ),
        ("VariableDeclarator", "id: NameSlot, init?: Expression"),
        ("FunctionDeclaration", "id: NameSlot, params: [NameSlot], body: BlockStatement"),
        ("FunctionExpression", "params: [NameSlot], body: BlockStatement"),
        ("ReturnStatement", "argument?: Expression"),
        ("IfStatement", "test: Expression, consequent: Statement, alternate?: Statement"),
        ("WhileStatement", "test: Expression, body: Statement"),
        (
            "ForStatement",
            "init: VariableDeclaration | ExpressionStatement | EmptyStatement, "
            "test: Expression, update: Expression, body: Statement",
        ),
        (
            "ForInStatement",
            "left: VariableDeclaration (no init) | Identifier, "
            "right: Expression, body: Statement",
        ),
        ("ExpressionStatement", "expression: Expression"),
        ("EmptyStatement", ""),
        ("DebuggerStatement", ""),
        ("AssignmentExpression", 'operator: "=", left: Target, right: Expression'),
        ("BinaryExpression", "operator: BinaryOp, left: Expression, right: Expression"),
        ("UnaryExpression", "operator: UnaryOp, argument: Expression"),
        (
            "ConditionalExpression",
            "test: Expression, consequent: Expression, alternate: Expression",
        ),
        ("CallExpression", "callee: Expression, arguments: [Expression]"),
        ("NewExpression", "callee: Expression, arguments: [Expression]"),
        (
            "MemberExpression",
            "object: Expression, property: Identifier | Expression, computed: boolean",
        ),
        ("Identifier", "name: string"),
        ("UniqueIdentifier", "name: string"),
        ("Literal", "value: number | string | boolean | null"),
        ("UndefinedLiteral", ""),
        ("ObjectExpression", "properties: [Property]"),
        ("Property", "key: Identifier | string Literal, value: Expression"),
        ("ArrayExpression", "elements: [Expression]"),
        ("QuasiQuote", 'bodyKind: "expr" | "stmts", body: Expression | Program'),
        ("EscapeExpression", "argument: Expression"),
        ("InlineDirective", 'argument: Expression, position: "stmt" | "expr"'),
        ("ExecuteDirective", "body: Statement"),
    ]
    return rows
