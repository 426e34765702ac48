"""Uniform AST for the MiniJS dialect.

Every node is the same shape: a kind tag, ordered children, an optional
scalar payload (name, operator, literal value, quote body kind), a source
span and a tree-unique uid. Staging tags are ordinary node kinds so the
whole staged program lives in one tree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum, unique

from .errors import StagedError


class ArityViolation(StagedError):
    pass


class TargetNotFound(StagedError):
    pass


class ListIntoFixedSlot(StagedError):
    pass


@unique
class NodeKind(Enum):
    PROGRAM = "Program"
    BLOCK = "Block"
    VAR_DECL = "VarDecl"
    FUNCTION_DECL = "FunctionDecl"
    FUNCTION_EXPR = "FunctionExpr"
    RETURN = "Return"
    IF = "If"
    WHILE = "While"
    FOR_CLASSIC = "ForClassic"
    FOR_IN = "ForIn"
    EXPR_STMT = "ExprStmt"
    EMPTY_STMT = "EmptyStmt"
    DEBUGGER_STMT = "DebuggerStmt"
    ASSIGN = "Assign"
    BINARY = "Binary"
    UNARY = "Unary"
    CONDITIONAL = "Conditional"
    CALL = "Call"
    NEW = "New"
    MEMBER = "Member"
    INDEX = "Index"
    IDENTIFIER = "Identifier"
    UNIQUE_IDENT = "UniqueIdent"
    NUMBER_LIT = "NumberLit"
    STRING_LIT = "StringLit"
    BOOL_LIT = "BoolLit"
    NULL_LIT = "NullLit"
    UNDEFINED_LIT = "UndefinedLit"
    OBJECT_LIT = "ObjectLit"
    PROPERTY = "Property"
    ARRAY_LIT = "ArrayLit"
    QUASI_QUOTE = "QuasiQuote"
    ESCAPE = "Escape"
    INLINE = "Inline"
    EXECUTE = "Execute"


# (min_children, max_children); None means unbounded.
# Child layouts:
#   VarDecl        [id, init?]           FunctionDecl [id, *params, body]
#   FunctionExpr   [*params, body]       Return       [value?]
#   If             [test, cons, alt?]    While        [test, body]
#   ForClassic     [init, test, update, body]
#   ForIn          [target, subject, body]
#   Call / New     [callee, *args]       Member       [object] (payload: name)
#   Index          [object, key]         Property     [value]  (payload: key)
#   QuasiQuote     [body] (payload: "expr" | "stmts"; stmts body is a Program)
ARITY: dict[NodeKind, tuple[int, int | None]] = {
    NodeKind.PROGRAM: (0, None),
    NodeKind.BLOCK: (0, None),
    NodeKind.VAR_DECL: (1, 2),
    NodeKind.FUNCTION_DECL: (2, None),
    NodeKind.FUNCTION_EXPR: (1, None),
    NodeKind.RETURN: (0, 1),
    NodeKind.IF: (2, 3),
    NodeKind.WHILE: (2, 2),
    NodeKind.FOR_CLASSIC: (4, 4),
    NodeKind.FOR_IN: (3, 3),
    NodeKind.EXPR_STMT: (1, 1),
    NodeKind.EMPTY_STMT: (0, 0),
    NodeKind.DEBUGGER_STMT: (0, 0),
    NodeKind.ASSIGN: (2, 2),
    NodeKind.BINARY: (2, 2),
    NodeKind.UNARY: (1, 1),
    NodeKind.CONDITIONAL: (3, 3),
    NodeKind.CALL: (1, None),
    NodeKind.NEW: (1, None),
    NodeKind.MEMBER: (1, 1),
    NodeKind.INDEX: (2, 2),
    NodeKind.IDENTIFIER: (0, 0),
    NodeKind.UNIQUE_IDENT: (0, 0),
    NodeKind.NUMBER_LIT: (0, 0),
    NodeKind.STRING_LIT: (0, 0),
    NodeKind.BOOL_LIT: (0, 0),
    NodeKind.NULL_LIT: (0, 0),
    NodeKind.UNDEFINED_LIT: (0, 0),
    NodeKind.OBJECT_LIT: (0, None),
    NodeKind.PROPERTY: (1, 1),
    NodeKind.ARRAY_LIT: (0, None),
    NodeKind.QUASI_QUOTE: (1, 1),
    NodeKind.ESCAPE: (1, 1),
    NodeKind.INLINE: (1, 1),
    NodeKind.EXECUTE: (1, 1),
}

STAGING_KINDS = frozenset(
    {NodeKind.QUASI_QUOTE, NodeKind.ESCAPE, NodeKind.INLINE, NodeKind.EXECUTE}
)

STATEMENT_KINDS = frozenset(
    {
        NodeKind.BLOCK,
        NodeKind.VAR_DECL,
        NodeKind.FUNCTION_DECL,
        NodeKind.RETURN,
        NodeKind.IF,
        NodeKind.WHILE,
        NodeKind.FOR_CLASSIC,
        NodeKind.FOR_IN,
        NodeKind.EXPR_STMT,
        NodeKind.EMPTY_STMT,
        NodeKind.DEBUGGER_STMT,
        NodeKind.EXECUTE,
    }
)

# Slots where a node list may replace a single child (statement lists).
_LIST_SLOT_KINDS = frozenset({NodeKind.PROGRAM, NodeKind.BLOCK})


@dataclass(frozen=True)
class SourceSpan:
    """1-based lines, 0-based columns. Line 0 marks synthesized nodes."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError(f"span ends before it starts: {self}")


SYNTHETIC_SPAN = SourceSpan(0, 0, 0, 0)

_uid_counter = itertools.count(1)


@dataclass(eq=False)
class AstNode:
    kind: NodeKind
    children: list["AstNode"]
    payload: object = None
    span: SourceSpan = SYNTHETIC_SPAN
    uid: int = field(default_factory=lambda: next(_uid_counter))
    meta_level: int | None = None

    def __repr__(self) -> str:  # compact, for test failures
        bits = [self.kind.value]
        if self.payload is not None:
            bits.append(repr(self.payload))
        if self.children:
            bits.append(f"{len(self.children)} kids")
        return f"<{' '.join(bits)} #{self.uid}>"


def make_node(
    kind: NodeKind,
    children: list[AstNode] | None = None,
    payload: object = None,
    span: SourceSpan = SYNTHETIC_SPAN,
) -> AstNode:
    children = list(children or [])
    check_arity(kind, len(children))
    return AstNode(kind, children, payload, span)


def check_arity(kind: NodeKind, count: int) -> None:
    lo, hi = ARITY[kind]
    if count < lo or (hi is not None and count > hi):
        raise ArityViolation(f"{kind.value} cannot have {count} children")


def dfs(root: AstNode):
    """Pre-order, document order."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def locate(root: AstNode, uid: int) -> tuple[AstNode, AstNode | None, int]:
    """Find the node with `uid`; returns (node, parent, index in parent)."""
    if root.uid == uid:
        return root, None, -1
    for node in dfs(root):
        for i, child in enumerate(node.children):
            if child.uid == uid:
                return child, node, i
    raise TargetNotFound(f"no node with uid {uid} in tree")


def replace_in_parent(
    root: AstNode, target_uid: int, replacement: AstNode | list[AstNode]
) -> AstNode:
    """Swap the node with `target_uid` for `replacement`, in place.

    A list replacement is only legal when the target sits in a statement
    list (Program/Block body); elsewhere it raises ListIntoFixedSlot.
    Returns the (possibly new) root.
    """
    _, parent, index = locate(root, target_uid)
    if parent is None:
        if isinstance(replacement, list):
            raise ListIntoFixedSlot("cannot replace the root with a node list")
        return replacement
    if isinstance(replacement, list):
        if parent.kind not in _LIST_SLOT_KINDS:
            raise ListIntoFixedSlot(
                f"node list cannot fill a {parent.kind.value} child slot"
            )
        for node in replacement:
            if node.kind is NodeKind.PROGRAM:
                raise ListIntoFixedSlot("Program nodes cannot be spliced as statements")
        parent.children[index : index + 1] = replacement
        check_arity(parent.kind, len(parent.children))
    else:
        parent.children[index] = replacement
    return root


def structural_equals(a: AstNode, b: AstNode) -> bool:
    """Equality over kind/payload/shape; spans, uids and levels are ignored."""
    if a.kind is not b.kind or len(a.children) != len(b.children):
        return False
    if not _payload_equal(a.payload, b.payload):
        return False
    return all(structural_equals(x, y) for x, y in zip(a.children, b.children))


def _payload_equal(a: object, b: object) -> bool:
    if type(a) is not type(b):
        return False
    return a == b


def clone(node: AstNode) -> AstNode:
    """Deep copy with fresh uids; spans and payloads are preserved."""
    return AstNode(
        node.kind,
        [clone(c) for c in node.children],
        node.payload,
        node.span,
        next(_uid_counter),
        node.meta_level,
    )


def is_statement(node: AstNode) -> bool:
    return node.kind in STATEMENT_KINDS


def contains_staging(root: AstNode) -> bool:
    return any(n.kind in STAGING_KINDS or n.kind is NodeKind.UNIQUE_IDENT for n in dfs(root))
