"""Meta-level analysis, stage extraction, and stage-to-MiniJS translation.

A staged tree is split into *stages* by meta-level: each Execute tag and
each Inline region (the Inline node, or the whole Call/New when the tag
sits in callee position) raises the level of the code it encloses by
one, while each quasi-quote lowers it (quoted code is data). The
deepest level N forms the next stage: a pure MiniJS program built from

  * clones of main-program top-level function declarations whose whole
    subtree sits at level <= 0 (so stage code can call helpers such as
    a self-reproducing generator),
  * the operands of level-N Execute tags, and
  * one `__metaInline(...)` statement per level-N Inline region, in
    document order, with the region's uid queued in the inline registry.

Quasi-quotes inside stage code translate to expressions that build node
values (see reflect.py), with three kinds of holes:

  * escapes become `__metaEscape(mode, payload, kind)` calls — `single`
    for a lone slot, `list` for statement/argument/element lists where
    the payload interleaves constructed nodes with `{index, expr}`
    markers;
  * `$name` identifiers become `__metaUnique("name", __metaQid)` calls,
    with `__metaQid` bound once per quote evaluation by an enclosing
    immediately-invoked function;
  * nested quotes, and Inline/Execute tags inside quotes, construct
    QuasiQuote/InlineDirective/ExecuteDirective node values (data, not
    calls).

The StageContext implements the `__meta*` runtime against the main
tree; the interpreter exposes its methods as builtins during stage
evaluation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .ast import (
    STATEMENT_KINDS,
    AstNode,
    ListIntoFixedSlot,
    NodeKind,
    clone,
    dfs,
    locate,
    make_node,
    replace_in_parent,
)
from .errors import StagedError
from .reflect import (
    MalformedReflection,
    PlanChild,
    PlanDict,
    PlanList,
    PlanScalar,
    plan_node,
    reflection_to_ast,
)
from .values import JS_NULL, JS_UNDEFINED


class EscapeOutsideQuote(StagedError):
    pass


class NegativeLevel(StagedError):
    pass


class UnconsumedInline(StagedError):
    pass


class RegistryEmpty(StagedError):
    pass


class InlineOfNonAst(StagedError):
    pass


class KindMismatch(StagedError):
    pass


class EscapeOfIllegalValue(StagedError):
    pass


class StageAssemblyError(StagedError):
    """Internal invariant violation in extraction/translation."""


META_INLINE = "__metaInline"
META_ESCAPE = "__metaEscape"
META_UNIQUE = "__metaUnique"
META_QUOTE_ID = "__metaQuoteId"
META_QID_VAR = "__metaQid"
META_BUILTIN_NAMES = (META_INLINE, META_ESCAPE, META_UNIQUE, META_QUOTE_ID)


def _is_inline_call(node: AstNode) -> bool:
    return (
        node.kind in (NodeKind.CALL, NodeKind.NEW)
        and node.children[0].kind is NodeKind.INLINE
    )


def _is_region_head(node: AstNode) -> bool:
    return node.kind in (NodeKind.EXECUTE, NodeKind.INLINE) or _is_inline_call(node)


# --------------------------------------------------------------------------
# Meta-level analysis.


def compute_meta_levels(root: AstNode) -> AstNode:
    """Annotate every node's metaLevel; reject impossible placements.

    Level = enclosing Execute regions + enclosing Inline regions −
    enclosing quotes. Escape operands regain the level of the nearest
    enclosing stage context (quote nesting resets to zero). A node
    below level 0 with no enclosing stage region has no stage that
    could ever build it; an escape with no enclosing quote has nothing
    to splice into.
    """
    _walk_levels(root, 0, 0)
    return root


def _walk_levels(node: AstNode, regions: int, quotes: int) -> None:
    raised = _is_region_head(node)
    level = (regions + 1 if raised else regions) - quotes
    node.meta_level = level
    if level < 0 and regions == 0:
        raise NegativeLevel(
            "quasi-quoted code with no enclosing stage to build it",
            _line(node),
        )

    kind = node.kind
    if kind is NodeKind.ESCAPE:
        if quotes == 0:
            raise EscapeOutsideQuote(
                "escape tag outside any quasi-quote", _line(node)
            )
        _walk_levels(node.children[0], regions, 0)
    elif kind is NodeKind.QUASI_QUOTE:
        _walk_levels(node.children[0], regions, quotes + 1)
    elif kind in (NodeKind.EXECUTE, NodeKind.INLINE):
        _walk_levels(node.children[0], regions + 1, quotes)
    elif _is_inline_call(node):
        callee = node.children[0]
        callee.meta_level = level
        _walk_levels(callee.children[0], regions + 1, quotes)
        for arg in node.children[1:]:
            _walk_levels(arg, regions + 1, quotes)
    else:
        for child in node.children:
            _walk_levels(child, regions, quotes)


def _line(node: AstNode) -> int | None:
    return node.span.start_line or None


# --------------------------------------------------------------------------
# Stage extraction.


@dataclass
class StageProgram:
    level: int
    stmts: list  # statement forms, document order (preamble first)
    inline_refs: list  # uids of inline region roots, document order
    exec_uids: list = field(default_factory=list)


def get_stage(root: AstNode) -> StageProgram | None:
    """Extract the deepest stage, or None when no stage regions remain.

    Recomputes meta-levels first, so callers can loop extract→run→
    finalize without bookkeeping.
    """
    compute_meta_levels(root)
    heads: list[tuple[AstNode, AstNode | None]] = []
    _find_heads(root, None, False, heads)
    if not heads:
        return None
    level = max(h.meta_level for h, _ in heads)

    stmts: list[AstNode] = []
    inline_refs: list[int] = []
    exec_uids: list[int] = []
    for child in root.children:
        if child.kind is NodeKind.FUNCTION_DECL and _subtree_max_level(child) <= 0:
            stmts.append(clone(child))
    for head, parent in heads:
        if head.meta_level != level:
            continue
        if head.kind is NodeKind.EXECUTE:
            exec_uids.append(head.uid)
            stmts.append(head.children[0])
        else:
            inline_refs.append(head.uid)
            stmts.append(_inline_stmt_form(head, parent))
    return StageProgram(level, stmts, inline_refs, exec_uids)


def _find_heads(
    node: AstNode,
    parent: AstNode | None,
    in_data: bool,
    out: list,
) -> None:
    """Collect stage region heads in document order.

    Quote interiors are data — directives there are constructed, never
    extracted — except escape operands, which re-enter live stage code.
    """
    if in_data:
        if node.kind is NodeKind.ESCAPE:
            _find_heads(node.children[0], node, False, out)
            return
    else:
        if _is_region_head(node):
            out.append((node, parent))
            # A deeper region can only live inside this one's operand.
            operand = node.children[0]
            if node.kind in (NodeKind.EXECUTE, NodeKind.INLINE):
                _find_heads(operand, node, False, out)
            else:
                _find_heads(operand.children[0], operand, False, out)
                for arg in node.children[1:]:
                    _find_heads(arg, node, False, out)
            return
        if node.kind is NodeKind.QUASI_QUOTE:
            _find_heads(node.children[0], node, True, out)
            return
    for child in node.children:
        _find_heads(child, node, in_data, out)


def _subtree_max_level(node: AstNode) -> int:
    return max(n.meta_level for n in dfs(node))


def _inline_stmt_form(head: AstNode, parent: AstNode | None) -> AstNode:
    if (
        parent is not None
        and parent.kind is NodeKind.EXPR_STMT
        and parent.children[0] is head
    ):
        return parent
    return make_node(NodeKind.EXPR_STMT, [head])


# --------------------------------------------------------------------------
# Translation to pure MiniJS.


def translate_stage(stage: StageProgram) -> AstNode:
    out = []
    for stmt in stage.stmts:
        if stmt.kind is NodeKind.EXPR_STMT and _is_region_head(stmt.children[0]):
            out.append(_inline_call_stmt(stmt.children[0]))
        else:
            out.append(_translate(stmt))
    return make_node(NodeKind.PROGRAM, out)


def _inline_call_stmt(head: AstNode) -> AstNode:
    if head.kind is NodeKind.INLINE:
        value = _translate(head.children[0])
    else:  # Call/New with Inline callee: strip the tag, keep the call
        callee = _translate(head.children[0].children[0])
        args = [_translate(a) for a in head.children[1:]]
        value = make_node(head.kind, [callee, *args], head.payload)
    call = make_node(
        NodeKind.CALL, [make_node(NodeKind.IDENTIFIER, [], META_INLINE), value]
    )
    return make_node(NodeKind.EXPR_STMT, [call])


def _translate(node: AstNode) -> AstNode:
    if node.kind is NodeKind.QUASI_QUOTE:
        return _translate_quote(node)
    if node.kind in (NodeKind.ESCAPE, NodeKind.INLINE, NodeKind.EXECUTE):
        raise StageAssemblyError(
            f"{node.kind.value} tag survived into stage code", _line(node)
        )
    return make_node(
        node.kind, [_translate(c) for c in node.children], node.payload, node.span
    )


def _translate_quote(quote: AstNode) -> AstNode:
    body = _construct(quote.children[0], 1)
    if not _has_local_uniques(quote.children[0]):
        return body
    qid_decl = make_node(
        NodeKind.VAR_DECL,
        [
            make_node(NodeKind.IDENTIFIER, [], META_QID_VAR),
            make_node(
                NodeKind.CALL, [make_node(NodeKind.IDENTIFIER, [], META_QUOTE_ID)]
            ),
        ],
    )
    ret = make_node(NodeKind.RETURN, [body])
    fn = make_node(
        NodeKind.FUNCTION_EXPR, [make_node(NodeKind.BLOCK, [qid_decl, ret])]
    )
    return make_node(NodeKind.CALL, [fn])


def _has_local_uniques(node: AstNode) -> bool:
    """Any $name at this quote's own level (not nested quotes/escapes)?"""
    if node.kind is NodeKind.UNIQUE_IDENT:
        return True
    if node.kind in (NodeKind.QUASI_QUOTE, NodeKind.ESCAPE):
        return False
    return any(_has_local_uniques(c) for c in node.children)


def _construct(node: AstNode, qdepth: int) -> AstNode:
    if node.kind is NodeKind.ESCAPE:
        return _escape_call("single", _translate(node.children[0]), "expr")
    if (
        node.kind is NodeKind.EXPR_STMT
        and node.children[0].kind is NodeKind.ESCAPE
    ):
        return _escape_call(
            "single", _translate(node.children[0].children[0]), "stmt"
        )
    if node.kind is NodeKind.UNIQUE_IDENT and qdepth == 1:
        return make_node(
            NodeKind.CALL,
            [
                make_node(NodeKind.IDENTIFIER, [], META_UNIQUE),
                make_node(NodeKind.STRING_LIT, [], str(node.payload)),
                make_node(NodeKind.IDENTIFIER, [], META_QID_VAR),
            ],
        )
    if node.kind is NodeKind.QUASI_QUOTE:
        return _object_lit(
            "QuasiQuote",
            [
                ("bodyKind", make_node(NodeKind.STRING_LIT, [], str(node.payload))),
                ("body", _construct(node.children[0], qdepth + 1)),
            ],
        )
    return _build_plan_dict(plan_node(node), qdepth)


def _build_plan_dict(plan: PlanDict, qdepth: int) -> AstNode:
    fields = []
    for name, sub in plan.fields:
        stmt_list = name == "body" and plan.type_name in ("Program", "BlockStatement")
        fields.append((name, _build_plan_value(sub, qdepth, stmt_list)))
    return _object_lit(plan.type_name, fields)


def _build_plan_value(plan, qdepth: int, stmt_list: bool) -> AstNode:
    if isinstance(plan, PlanScalar):
        return _scalar_lit(plan.value)
    if isinstance(plan, PlanChild):
        return _construct(plan.node, qdepth)
    if isinstance(plan, PlanDict):
        return _build_plan_dict(plan, qdepth)
    if isinstance(plan, PlanList):
        return _build_plan_list(plan, qdepth, stmt_list)
    raise StageAssemblyError(f"unknown plan value {plan!r}")


def _build_plan_list(plan: PlanList, qdepth: int, stmt_list: bool) -> AstNode:
    escape_slots = any(
        isinstance(item, PlanChild) and _escape_item_operand(item.node) is not None
        for item in plan.items
    )
    if not escape_slots:
        return make_node(
            NodeKind.ARRAY_LIT,
            [_build_plan_value(item, qdepth, False) for item in plan.items],
        )
    entries = []
    for index, item in enumerate(plan.items):
        operand = (
            _escape_item_operand(item.node) if isinstance(item, PlanChild) else None
        )
        if operand is not None:
            entries.append(
                _object_entries(
                    [
                        ("index", make_node(NodeKind.NUMBER_LIT, [], float(index))),
                        ("expr", _translate(operand)),
                    ]
                )
            )
        else:
            entries.append(_build_plan_value(item, qdepth, False))
    payload = make_node(NodeKind.ARRAY_LIT, entries)
    return _escape_call("list", payload, "stmt" if stmt_list else "expr")


def _escape_item_operand(node: AstNode) -> AstNode | None:
    if node.kind is NodeKind.ESCAPE:
        return node.children[0]
    if node.kind is NodeKind.EXPR_STMT and node.children[0].kind is NodeKind.ESCAPE:
        return node.children[0].children[0]
    return None


def _escape_call(mode: str, payload: AstNode, kind: str) -> AstNode:
    return make_node(
        NodeKind.CALL,
        [
            make_node(NodeKind.IDENTIFIER, [], META_ESCAPE),
            make_node(NodeKind.STRING_LIT, [], mode),
            payload,
            make_node(NodeKind.STRING_LIT, [], kind),
        ],
    )


def _object_lit(type_name: str, fields: list) -> AstNode:
    entries = [("type", make_node(NodeKind.STRING_LIT, [], type_name))]
    entries.extend(fields)
    return _object_entries(entries)


def _object_entries(entries: list) -> AstNode:
    props = [
        make_node(NodeKind.PROPERTY, [value], key) for key, value in entries
    ]
    return make_node(NodeKind.OBJECT_LIT, props)


def _scalar_lit(value) -> AstNode:
    if isinstance(value, bool):
        return make_node(NodeKind.BOOL_LIT, [], value)
    if isinstance(value, (int, float)):
        return make_node(NodeKind.NUMBER_LIT, [], float(value))
    if isinstance(value, str):
        return make_node(NodeKind.STRING_LIT, [], value)
    if value is JS_NULL:
        return make_node(NodeKind.NULL_LIT, [])
    raise StageAssemblyError(f"cannot embed {value!r} in a construction")


# --------------------------------------------------------------------------
# Finalization.


def finalize_stage(root: AstNode, stage: StageProgram, ctx: "StageContext") -> AstNode:
    if ctx.pending_inlines():
        raise UnconsumedInline(
            f"stage {stage.level} finished with {ctx.pending_inlines()} inline "
            "directive(s) never consumed"
        )
    for uid in stage.exec_uids:
        _, parent, index = locate(root, uid)
        if parent is None:
            raise StageAssemblyError("stage tag cannot be the program root")
        if parent.kind in (NodeKind.PROGRAM, NodeKind.BLOCK):
            parent.children.pop(index)
        else:
            parent.children[index] = make_node(NodeKind.EMPTY_STMT, [])
    return root


# --------------------------------------------------------------------------
# The meta runtime.


class StagingState:
    """Run-wide hygiene/quote-id state, shared by every stage's context.

    Generated names must stay distinct across stages because they all
    end up in one residual program.
    """

    def __init__(self) -> None:
        self._name_counter = 0
        self._qid_counter = 0
        self._memo: dict = {}

    def next_quote_id(self) -> float:
        self._qid_counter += 1
        return float(self._qid_counter)

    def fresh_name(self, name: str, qid) -> str:
        key = (qid, name)
        if key not in self._memo:
            self._name_counter += 1
            self._memo[key] = f"{name}__g{self._name_counter}"
        return self._memo[key]


class StageContext:
    """Live registry and splice operations for one stage evaluation."""

    def __init__(self, root: AstNode, stage: StageProgram, state: StagingState):
        self.root = root
        self.stage = stage
        self.state = state
        self._registry = deque(stage.inline_refs)

    def pending_inlines(self) -> int:
        return len(self._registry)

    # -- builtin: __metaQuoteId() ------------------------------------------
    def quote_id(self) -> float:
        return self.state.next_quote_id()

    # -- builtin: __metaUnique(name, qid) ----------------------------------
    def unique_name(self, name, qid) -> dict:
        if not isinstance(name, str):
            raise StageAssemblyError("hygiene name must be a string")
        return {"type": "Identifier", "name": self.state.fresh_name(name, qid)}

    # -- builtin: __metaInline(value) --------------------------------------
    def inline(self, value) -> None:
        if not self._registry:
            raise RegistryEmpty(
                "inline call with an empty registry (more calls than directives)"
            )
        node = self._inline_node(value)
        uid = self._registry.popleft()
        target, parent, _ = locate(self.root, uid)
        if parent is not None and parent.kind is NodeKind.EXPR_STMT:
            if node.kind in (NodeKind.PROGRAM, NodeKind.BLOCK):
                self._place_statements(parent, node.children)
            elif node.kind in STATEMENT_KINDS:
                replace_in_parent(self.root, parent.uid, node)
            else:
                replace_in_parent(self.root, target.uid, node)
        else:
            if node.kind in STATEMENT_KINDS or node.kind is NodeKind.PROGRAM:
                raise KindMismatch(
                    "statement code cannot replace an expression-position inline"
                )
            replace_in_parent(self.root, target.uid, node)

    def _inline_node(self, value) -> AstNode:
        if not isinstance(value, dict):
            raise InlineOfNonAst(
                f"inlined value must be code, got {_describe_value(value)}"
            )
        try:
            return reflection_to_ast(value)
        except MalformedReflection as exc:
            raise InlineOfNonAst(str(exc)) from exc

    def _place_statements(self, target_stmt: AstNode, stmts: list) -> None:
        try:
            replace_in_parent(self.root, target_stmt.uid, list(stmts))
        except ListIntoFixedSlot:
            if not stmts:
                replacement = make_node(NodeKind.EMPTY_STMT, [])
            elif len(stmts) == 1:
                replacement = stmts[0]
            else:
                replacement = make_node(NodeKind.BLOCK, list(stmts))
            replace_in_parent(self.root, target_stmt.uid, replacement)

    # -- builtin: __metaEscape(mode, payload, kind) ------------------------
    def escape(self, mode, payload, kind):
        if mode == "single":
            return self._escape_single(payload, kind)
        if mode == "list":
            if not isinstance(payload, list):
                raise StageAssemblyError("list escape payload must be an array")
            return self._escape_list(payload, kind)
        raise StageAssemblyError(f"unknown escape mode {mode!r}")

    def _escape_single(self, value, kind):
        lifted = _lift_ground(value)
        if kind == "expr":
            if lifted is not None:
                return lifted
            node = self._escape_node(value)
            if node.kind in STATEMENT_KINDS or node.kind is NodeKind.PROGRAM:
                raise KindMismatch(
                    f"{node.kind.value} code cannot fill an expression slot"
                )
            return value
        if lifted is not None:
            return {"type": "ExpressionStatement", "expression": lifted}
        node = self._escape_node(value)
        if node.kind in (NodeKind.PROGRAM, NodeKind.BLOCK):
            body = list(value["body"])
            if len(body) == 1:
                return body[0]
            return {"type": "BlockStatement", "body": body}
        if node.kind in STATEMENT_KINDS:
            return value
        return {"type": "ExpressionStatement", "expression": value}

    def _escape_list(self, payload: list, kind: str) -> list:
        out: list = []
        for entry in payload:
            if isinstance(entry, dict) and "type" in entry:
                out.append(entry)
                continue
            if not isinstance(entry, dict) or "expr" not in entry:
                raise StageAssemblyError("malformed list-escape payload entry")
            value = entry["expr"]
            if kind == "expr":
                self._splice_expr(value, out)
            else:
                self._splice_stmt(value, out)
        return out

    def _splice_expr(self, value, out: list) -> None:
        lifted = _lift_ground(value)
        if lifted is not None:
            out.append(lifted)
            return
        node = self._escape_node(value)
        if node.kind in (NodeKind.PROGRAM, NodeKind.BLOCK):
            if all(c.kind is NodeKind.EXPR_STMT for c in node.children):
                out.extend(stmt["expression"] for stmt in value["body"])
                return
            raise KindMismatch(
                "only a list of bare expressions can splice into an expression list"
            )
        if node.kind in STATEMENT_KINDS:
            raise KindMismatch(
                f"{node.kind.value} code cannot splice into an expression list"
            )
        out.append(value)

    def _splice_stmt(self, value, out: list) -> None:
        lifted = _lift_ground(value)
        if lifted is not None:
            out.append({"type": "ExpressionStatement", "expression": lifted})
            return
        node = self._escape_node(value)
        if node.kind in (NodeKind.PROGRAM, NodeKind.BLOCK):
            out.extend(value["body"])
        elif node.kind in STATEMENT_KINDS:
            out.append(value)
        else:
            out.append({"type": "ExpressionStatement", "expression": value})

    def _escape_node(self, value) -> AstNode:
        if not isinstance(value, dict):
            raise EscapeOfIllegalValue(
                f"escaped value must be code or a ground value, "
                f"got {_describe_value(value)}"
            )
        try:
            return reflection_to_ast(value)
        except MalformedReflection as exc:
            raise EscapeOfIllegalValue(str(exc)) from exc


def _lift_ground(value):
    """Ground scalars lift to literal node values; None means not ground."""
    if isinstance(value, bool):
        return {"type": "Literal", "value": value}
    if isinstance(value, (int, float)):
        v = float(value)
        if v != v or v in (float("inf"), float("-inf")):
            raise EscapeOfIllegalValue("non-finite numbers cannot become literals")
        return {"type": "Literal", "value": v}
    if isinstance(value, str):
        return {"type": "Literal", "value": value}
    if value is JS_NULL or value is JS_UNDEFINED:
        raise EscapeOfIllegalValue(f"cannot lift {value!r} into code")
    return None


def _describe_value(value) -> str:
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
    return f"a {type(value).__name__}"
