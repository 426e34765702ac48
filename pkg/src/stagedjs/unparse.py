"""Deterministic source emitter for MiniJS trees.

Formatting contract: one statement per line, two-space indent per block
depth, and every compound subexpression wrapped in parentheses, so
operator precedence never has to be consulted when re-reading emitted
text. `unparse` output re-parses to a structurally equal tree and is
byte-idempotent (unparse(parse(unparse(t))) == unparse(t)).

One representability gap: `if (c) if (d) s; else e;` always re-binds the
`else` to the inner `if`, so an If node that has an alternate but whose
braceless consequent ends in an else-less `if` cannot be spelled
directly; the consequent is emitted with braces in that case (same
behavior, one extra Block on re-parse). See docs/language.md.
"""

from __future__ import annotations

from decimal import Decimal

from .ast import AstNode, NodeKind
from .errors import StagedError
from .lexer import KEYWORDS


class MalformedTree(StagedError):
    pass


def unparse(root: AstNode) -> str:
    if root.kind is not NodeKind.PROGRAM:
        raise MalformedTree(f"can only unparse whole programs, got {root.kind.value}")
    lines: list[str] = []
    for stmt in root.children:
        lines.extend(_stmt(stmt, 0, 0))
    return "\n".join(lines) + ("\n" if lines else "")


def unparse_expression(node: AstNode) -> str:
    """Single expression, no trailing newline; used by inspect/tests."""
    return _expr(node, 0, 0)


def format_number(value: float) -> str:
    """Exponent-free decimal that re-parses to the identical float."""
    if value != value or value in (float("inf"), float("-inf")):
        raise MalformedTree("non-finite numbers have no literal form")
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    text = repr(value)
    if "e" in text or "E" in text:
        text = format(Decimal(value), "f")
    return text


def escape_string(value: str) -> str:
    out = ['"']
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


_IND = "  "

# Postfix bases whose emitted text can be followed by `.name`, `[i]` or
# `(args)` without re-parse ambiguity. Self-parenthesizing kinds qualify
# because their text starts with "(".
_SAFE_BASE = frozenset(
    {
        NodeKind.IDENTIFIER,
        NodeKind.UNIQUE_IDENT,
        NodeKind.MEMBER,
        NodeKind.INDEX,
        NodeKind.CALL,
        NodeKind.NEW,
        NodeKind.STRING_LIT,
        NodeKind.ARRAY_LIT,
        NodeKind.BINARY,
        NodeKind.UNARY,
        NodeKind.CONDITIONAL,
        NodeKind.ASSIGN,
        NodeKind.FUNCTION_EXPR,
    }
)

_NAME_KINDS = frozenset({NodeKind.IDENTIFIER, NodeKind.UNIQUE_IDENT})


def _stmt(node: AstNode, depth: int, qdepth: int) -> list[str]:
    ind = _IND * depth
    kind = node.kind

    if kind is NodeKind.BLOCK:
        return [ind + "{", *_stmt_list(node.children, depth + 1, qdepth), ind + "}"]
    if kind is NodeKind.VAR_DECL:
        text = ind + "var " + _binding(node.children[0], depth, qdepth)
        if len(node.children) == 2:
            text += " = " + _expr(node.children[1], depth, qdepth)
        return [text + ";"]
    if kind is NodeKind.FUNCTION_DECL:
        head = (
            ind
            + "function "
            + _function_id(node.children[0], depth, qdepth)
            + _params(node.children[1:-1], depth, qdepth)
            + " {"
        )
        body = node.children[-1]
        if body.kind is not NodeKind.BLOCK:
            raise MalformedTree("function body must be a block")
        return [head, *_stmt_list(body.children, depth + 1, qdepth), ind + "}"]
    if kind is NodeKind.RETURN:
        if node.children:
            return [ind + "return " + _expr(node.children[0], depth, qdepth) + ";"]
        return [ind + "return;"]
    if kind is NodeKind.IF:
        return _if_stmt(node, depth, qdepth)
    if kind is NodeKind.WHILE:
        head = ind + "while (" + _naked(node.children[0], depth, qdepth) + ")"
        return _attach_body(head, node.children[1], depth, qdepth)
    if kind is NodeKind.FOR_CLASSIC:
        init, test, update, body = node.children
        init_text = _for_init(init, depth, qdepth)
        head = (
            ind
            + "for ("
            + init_text
            + " "
            + _naked(test, depth, qdepth)
            + "; "
            + _naked(update, depth, qdepth)
            + ")"
        )
        return _attach_body(head, body, depth, qdepth)
    if kind is NodeKind.FOR_IN:
        target, subject, body = node.children
        if target.kind is NodeKind.VAR_DECL:
            target_text = "var " + _binding(target.children[0], depth, qdepth)
        else:
            target_text = _expr(target, depth, qdepth)
        head = (
            ind + "for (" + target_text + " in " + _expr(subject, depth, qdepth) + ")"
        )
        return _attach_body(head, body, depth, qdepth)
    if kind is NodeKind.EXPR_STMT:
        return [ind + _expr_stmt_text(node.children[0], depth, qdepth) + ";"]
    if kind is NodeKind.EMPTY_STMT:
        return [ind + ";"]
    if kind is NodeKind.DEBUGGER_STMT:
        return [ind + "debugger;"]
    if kind is NodeKind.EXECUTE:
        inner = _stmt(node.children[0], depth, qdepth)
        return [ind + ".& " + inner[0][len(ind):], *inner[1:]]
    raise MalformedTree(f"{kind.value} is not a statement")


def _stmt_list(stmts: list[AstNode], depth: int, qdepth: int) -> list[str]:
    lines: list[str] = []
    for stmt in stmts:
        lines.extend(_stmt(stmt, depth, qdepth))
    return lines


def _if_stmt(node: AstNode, depth: int, qdepth: int) -> list[str]:
    ind = _IND * depth
    test, consequent = node.children[0], node.children[1]
    alternate = node.children[2] if len(node.children) == 3 else None
    head = ind + "if (" + _naked(test, depth, qdepth) + ")"
    force_braces = alternate is not None and _dangles(consequent)
    if consequent.kind is NodeKind.BLOCK or force_braces:
        body = consequent.children if consequent.kind is NodeKind.BLOCK else [consequent]
        lines = [head + " {", *_stmt_list(body, depth + 1, qdepth), ind + "}"]
    else:
        lines = [head, *_stmt(consequent, depth + 1, qdepth)]
    if alternate is not None:
        if alternate.kind is NodeKind.BLOCK:
            lines.append(ind + "else {")
            lines.extend(_stmt_list(alternate.children, depth + 1, qdepth))
            lines.append(ind + "}")
        else:
            lines.append(ind + "else")
            lines.extend(_stmt(alternate, depth + 1, qdepth))
    return lines


def _dangles(stmt: AstNode) -> bool:
    """Does this braceless statement end in an `if` that could steal an else?"""
    if stmt.kind is NodeKind.IF:
        if len(stmt.children) == 2:
            return True
        return _dangles(stmt.children[2])
    if stmt.kind is NodeKind.WHILE:
        return _dangles(stmt.children[1])
    if stmt.kind in (NodeKind.FOR_CLASSIC, NodeKind.FOR_IN):
        return _dangles(stmt.children[-1])
    if stmt.kind is NodeKind.EXECUTE:
        return _dangles(stmt.children[0])
    return False


def _attach_body(head: str, body: AstNode, depth: int, qdepth: int) -> list[str]:
    ind = _IND * depth
    if body.kind is NodeKind.BLOCK:
        return [head + " {", *_stmt_list(body.children, depth + 1, qdepth), ind + "}"]
    return [head, *_stmt(body, depth + 1, qdepth)]


def _for_init(init: AstNode, depth: int, qdepth: int) -> str:
    if init.kind is NodeKind.EMPTY_STMT:
        return ";"
    if init.kind is NodeKind.VAR_DECL:
        text = "var " + _binding(init.children[0], depth, qdepth)
        if len(init.children) == 2:
            text += " = " + _expr(init.children[1], depth, qdepth)
        return text + ";"
    if init.kind is NodeKind.EXPR_STMT:
        return _expr_stmt_text(init.children[0], depth, qdepth) + ";"
    raise MalformedTree(f"{init.kind.value} cannot head a for loop")


def _expr_stmt_text(expr: AstNode, depth: int, qdepth: int) -> str:
    text = _naked(expr, depth, qdepth)
    if text.startswith("{"):
        return "(" + text + ")"
    return text


def _naked(expr: AstNode, depth: int, qdepth: int) -> str:
    """Expression without the outermost self-parentheses (safe contexts)."""
    if expr.kind is NodeKind.ASSIGN:
        target, value = expr.children
        return (
            _expr(target, depth, qdepth) + " = " + _expr(value, depth, qdepth)
        )
    if expr.kind in (NodeKind.BINARY, NodeKind.UNARY, NodeKind.CONDITIONAL):
        text = _expr(expr, depth, qdepth)
        return text[1:-1]
    return _expr(expr, depth, qdepth)


def _binding(node: AstNode, depth: int, qdepth: int) -> str:
    """A declarator-name slot: name, $name, or tag form."""
    if node.kind is NodeKind.IDENTIFIER:
        return str(node.payload)
    if node.kind is NodeKind.UNIQUE_IDENT:
        return _unique_text(node, qdepth)
    if node.kind in (NodeKind.ESCAPE, NodeKind.INLINE):
        return _tag_text(node, depth, qdepth, force_parens=False)
    raise MalformedTree(f"{node.kind.value} cannot be a binding name")


def _function_id(node: AstNode, depth: int, qdepth: int) -> str:
    if node.kind in (NodeKind.ESCAPE, NodeKind.INLINE):
        return _tag_text(node, depth, qdepth, force_parens=True)
    return _binding(node, depth, qdepth)


def _params(params: list[AstNode], depth: int, qdepth: int) -> str:
    return "(" + ", ".join(_expr(p, depth, qdepth) for p in params) + ")"


def _unique_text(node: AstNode, qdepth: int) -> str:
    if qdepth == 0:
        raise MalformedTree(
            f"unique identifier ${node.payload} survived outside any quote"
        )
    return "$" + str(node.payload)


def _tag_text(node: AstNode, depth: int, qdepth: int, force_parens: bool) -> str:
    tag = ".~" if node.kind is NodeKind.ESCAPE else ".!"
    operand = node.children[0]
    if not force_parens and operand.kind in _NAME_KINDS:
        if operand.kind is NodeKind.UNIQUE_IDENT:
            return tag + _unique_text(operand, qdepth)
        return tag + str(operand.payload)
    return tag + "(" + _expr(operand, depth, qdepth) + ")"


def _base(node: AstNode, depth: int, qdepth: int) -> str:
    """Emit a postfix base (member/index/call target)."""
    if node.kind in (NodeKind.ESCAPE, NodeKind.INLINE):
        return _tag_text(node, depth, qdepth, force_parens=True)
    if node.kind in _SAFE_BASE:
        return _expr(node, depth, qdepth)
    return "(" + _expr(node, depth, qdepth) + ")"


def _callee(node: AstNode, depth: int, qdepth: int) -> str:
    if node.kind in (NodeKind.ESCAPE, NodeKind.INLINE):
        operand = node.children[0]
        force = operand.kind not in _NAME_KINDS or operand.kind is NodeKind.UNIQUE_IDENT
        return _tag_text(node, depth, qdepth, force_parens=force)
    return _base(node, depth, qdepth)


def _expr(node: AstNode, depth: int, qdepth: int) -> str:
    kind = node.kind

    if kind is NodeKind.NUMBER_LIT:
        return format_number(float(node.payload))
    if kind is NodeKind.STRING_LIT:
        return escape_string(str(node.payload))
    if kind is NodeKind.BOOL_LIT:
        return "true" if node.payload else "false"
    if kind is NodeKind.NULL_LIT:
        return "null"
    if kind is NodeKind.UNDEFINED_LIT:
        return "undefined"
    if kind is NodeKind.IDENTIFIER:
        return str(node.payload)
    if kind is NodeKind.UNIQUE_IDENT:
        return _unique_text(node, qdepth)
    if kind is NodeKind.ARRAY_LIT:
        return "[" + ", ".join(_expr(c, depth, qdepth) for c in node.children) + "]"
    if kind is NodeKind.OBJECT_LIT:
        if not node.children:
            return "{}"
        parts = []
        for prop in node.children:
            if prop.kind is not NodeKind.PROPERTY:
                raise MalformedTree("object literals may only contain properties")
            parts.append(
                _property_key(str(prop.payload))
                + ": "
                + _expr(prop.children[0], depth, qdepth)
            )
        return "{ " + ", ".join(parts) + " }"
    if kind is NodeKind.MEMBER:
        return _base(node.children[0], depth, qdepth) + "." + str(node.payload)
    if kind is NodeKind.INDEX:
        return (
            _base(node.children[0], depth, qdepth)
            + "["
            + _expr(node.children[1], depth, qdepth)
            + "]"
        )
    if kind is NodeKind.CALL:
        args = ", ".join(_expr(a, depth, qdepth) for a in node.children[1:])
        return _callee(node.children[0], depth, qdepth) + "(" + args + ")"
    if kind is NodeKind.NEW:
        args = ", ".join(_expr(a, depth, qdepth) for a in node.children[1:])
        return "new " + _callee(node.children[0], depth, qdepth) + "(" + args + ")"
    if kind is NodeKind.BINARY:
        left, right = node.children
        return (
            "("
            + _expr(left, depth, qdepth)
            + f" {node.payload} "
            + _expr(right, depth, qdepth)
            + ")"
        )
    if kind is NodeKind.UNARY:
        sep = " " if node.payload == "typeof" else ""
        return "(" + str(node.payload) + sep + _expr(node.children[0], depth, qdepth) + ")"
    if kind is NodeKind.CONDITIONAL:
        test, cons, alt = node.children
        return (
            "("
            + _expr(test, depth, qdepth)
            + " ? "
            + _expr(cons, depth, qdepth)
            + " : "
            + _expr(alt, depth, qdepth)
            + ")"
        )
    if kind is NodeKind.ASSIGN:
        return "(" + _naked(node, depth, qdepth) + ")"
    if kind is NodeKind.FUNCTION_EXPR:
        head = "(function " + _params(node.children[:-1], depth, qdepth) + " {"
        body = node.children[-1]
        if body.kind is not NodeKind.BLOCK:
            raise MalformedTree("function body must be a block")
        inner = _stmt_list(body.children, depth + 1, qdepth)
        return "\n".join([head, *inner, _IND * depth + "})"])
    if kind is NodeKind.QUASI_QUOTE:
        return _quote_text(node, depth, qdepth)
    if kind in (NodeKind.ESCAPE, NodeKind.INLINE):
        return _tag_text(node, depth, qdepth, force_parens=False)
    raise MalformedTree(f"{kind.value} is not an expression")


def _quote_text(node: AstNode, depth: int, qdepth: int) -> str:
    body = node.children[0]
    if node.payload == "expr":
        # An expression body whose text opens with "{" would be read back as
        # a statement list, so it gets the same parenthesis guard as
        # expression statements.
        return ".< " + _expr_stmt_text(body, depth, qdepth + 1) + " >."
    if node.payload != "stmts" or body.kind is not NodeKind.PROGRAM:
        raise MalformedTree("malformed quasi-quote body")
    if not body.children:
        return ".< >."
    inner = _stmt_list(body.children, depth + 1, qdepth + 1)
    return "\n".join([".<", *inner, _IND * depth + ">."])


def _property_key(key: str) -> str:
    if key and (key[0].isalpha() or key[0] == "_") and key not in KEYWORDS:
        if all(ch.isalnum() or ch == "_" for ch in key):
            return key
    return escape_string(key)
