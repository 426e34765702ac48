"""Recursive-descent parser for the MiniJS dialect.

Expression precedence, loosest first (ten levels):

    1 assignment       =                     right assoc
    2 conditional      ?:
    3 logical or       ||
    4 logical and      &&
    5 equality         == !=
    6 relational       < <= > >=
    7 additive         + -
    8 multiplicative   * / %
    9 unary            ! - typeof .~ .! (prefix)
   10 postfix          call args, .name, [index]

Staging tags parse context-free; meta-level legality is checked later by
stagecraft. `.~`/`.!` take a primary-plus-member-chain operand; if a `(`
follows, the tag node becomes the call callee (`.!f()` is
`Call(Inline(f), [])`). The parenthesized operand form `.~(expr)` closes
the operand explicitly and is required when the operand is itself a call.

Identifiers containing `__g` followed by a digit are reserved for
hygiene renaming, and identifiers starting with `__meta` are reserved
for the staging runtime; both are rejected when `hygiene_check` is on
(the default; internal re-parses of generated sources turn it off).
"""

from __future__ import annotations

import re

from .ast import AstNode, NodeKind, SourceSpan, make_node
from .errors import StagedError
from .lexer import Token, tokenize


class ParseError(StagedError):
    pass


_RESERVED_NAME = re.compile(r"__g\d")

_STATEMENT_START = frozenset(
    {"var", "return", "if", "while", "for", "debugger", "{", ";", ".&"}
)

_ASSIGN_TARGETS = frozenset(
    {NodeKind.IDENTIFIER, NodeKind.UNIQUE_IDENT, NodeKind.MEMBER, NodeKind.INDEX}
)

_ID_SLOT_KINDS = frozenset(
    {NodeKind.IDENTIFIER, NodeKind.UNIQUE_IDENT, NodeKind.ESCAPE, NodeKind.INLINE}
)


def parse(source: str, hygiene_check: bool = True) -> AstNode:
    """Parse a whole program; returns a Program node."""
    return _Parser(source, hygiene_check).parse_program()


def parse_expression(source: str, hygiene_check: bool = True) -> AstNode:
    """Parse a single expression followed by end of input."""
    p = _Parser(source, hygiene_check)
    expr = p.expression()
    p.expect_eof()
    return expr


class _Parser:
    def __init__(self, source: str, hygiene_check: bool):
        self.tokens = tokenize(source)
        self.pos = 0
        self.hygiene_check = hygiene_check

    # -- token plumbing -------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.category in ("punct", "keyword") and tok.text == text

    def at_category(self, category: str) -> bool:
        return self.peek().category == category

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.category != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            tok = self.peek()
            shown = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.line)
        return self.advance()

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.category != "eof":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line)

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.peek().line)

    def span_from(self, tok: Token) -> SourceSpan:
        prev = self.tokens[max(self.pos - 1, 0)]
        end_line, end_col = prev.line, prev.col + len(prev.text)
        if (end_line, end_col) < (tok.line, tok.col):
            end_line, end_col = tok.line, tok.col + len(tok.text)
        return SourceSpan(tok.line, tok.col, end_line, end_col)

    def check_name(self, tok: Token, name: str) -> str:
        if self.hygiene_check:
            if _RESERVED_NAME.search(name):
                raise ParseError(
                    f"identifier {name!r} uses the reserved hygiene suffix", tok.line
                )
            if name.startswith("__meta"):
                raise ParseError(
                    f"identifier {name!r} uses the reserved staging prefix", tok.line
                )
        return name

    # -- statements -----------------------------------------------------

    def parse_program(self) -> AstNode:
        first = self.peek()
        stmts = []
        while not self.at_category("eof"):
            stmts.append(self.statement())
        return make_node(NodeKind.PROGRAM, stmts, span=self.span_from(first))

    def statement(self) -> AstNode:
        tok = self.peek()
        if self.at("var"):
            return self.var_statement()
        if self.at("function") and not (
            self.peek(1).category == "punct" and self.peek(1).text == "("
        ):
            return self.function_declaration()
        if self.at("return"):
            self.advance()
            children = []
            if not self.at(";"):
                children.append(self.expression())
            self.expect(";")
            return make_node(NodeKind.RETURN, children, span=self.span_from(tok))
        if self.at("if"):
            return self.if_statement()
        if self.at("while"):
            self.advance()
            self.expect("(")
            test = self.expression()
            self.expect(")")
            body = self.statement()
            return make_node(NodeKind.WHILE, [test, body], span=self.span_from(tok))
        if self.at("for"):
            return self.for_statement()
        if self.at("{"):
            return self.block()
        if self.at(";"):
            self.advance()
            return make_node(NodeKind.EMPTY_STMT, span=self.span_from(tok))
        if self.at("debugger"):
            self.advance()
            self.expect(";")
            return make_node(NodeKind.DEBUGGER_STMT, span=self.span_from(tok))
        if self.at(".&"):
            self.advance()
            inner = self.statement()
            return make_node(NodeKind.EXECUTE, [inner], span=self.span_from(tok))
        expr = self.expression()
        self.expect(";")
        return make_node(NodeKind.EXPR_STMT, [expr], span=self.span_from(tok))

    def var_statement(self) -> AstNode:
        tok = self.expect("var")
        decl = self.var_declarator()
        self.expect(";")
        decl.span = self.span_from(tok)
        return decl

    def var_declarator(self) -> AstNode:
        ident = self.id_slot("variable name")
        children = [ident]
        if self.at("="):
            self.advance()
            children.append(self.expression())
        return make_node(NodeKind.VAR_DECL, children)

    def id_slot(self, what: str) -> AstNode:
        """A binding-name position: identifier, $name, or a tag form."""
        tok = self.peek()
        if tok.category == "ident":
            self.advance()
            return make_node(
                NodeKind.IDENTIFIER,
                payload=self.check_name(tok, tok.text),
                span=self.span_from(tok),
            )
        if tok.category == "unique":
            self.advance()
            return make_node(
                NodeKind.UNIQUE_IDENT,
                payload=self.check_name(tok, str(tok.value)),
                span=self.span_from(tok),
            )
        if self.at(".~") or self.at(".!"):
            kind = NodeKind.ESCAPE if tok.text == ".~" else NodeKind.INLINE
            self.advance()
            if self.at("("):
                self.advance()
                operand = self.expression()
                self.expect(")")
            elif self.peek().category == "ident":
                name_tok = self.advance()
                operand = make_node(
                    NodeKind.IDENTIFIER,
                    payload=self.check_name(name_tok, name_tok.text),
                    span=self.span_from(name_tok),
                )
            else:
                raise self.error(f"expected a name after {tok.text!r}")
            return make_node(kind, [operand], span=self.span_from(tok))
        raise self.error(f"expected {what}")

    def function_declaration(self) -> AstNode:
        tok = self.expect("function")
        ident = self.id_slot("function name")
        params = self.param_list()
        body = self.block()
        return make_node(
            NodeKind.FUNCTION_DECL, [ident, *params, body], span=self.span_from(tok)
        )

    def param_list(self) -> list[AstNode]:
        self.expect("(")
        params: list[AstNode] = []
        while not self.at(")"):
            if params:
                self.expect(",")
            param = self.expression()
            if param.kind not in _ID_SLOT_KINDS:
                raise self.error("parameters must be names, $names, or tag forms")
            params.append(param)
        self.expect(")")
        return params

    def block(self) -> AstNode:
        tok = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.at_category("eof"):
                raise self.error("unterminated block")
            stmts.append(self.statement())
        self.expect("}")
        return make_node(NodeKind.BLOCK, stmts, span=self.span_from(tok))

    def if_statement(self) -> AstNode:
        tok = self.expect("if")
        self.expect("(")
        test = self.expression()
        self.expect(")")
        consequent = self.statement()
        children = [test, consequent]
        if self.at("else"):
            self.advance()
            children.append(self.statement())
        return make_node(NodeKind.IF, children, span=self.span_from(tok))

    def for_statement(self) -> AstNode:
        tok = self.expect("for")
        self.expect("(")
        if self.at("var"):
            self.advance()
            decl = self.var_declarator()
            if self.at("in"):
                if len(decl.children) != 1:
                    raise self.error("for-in declaration cannot take an initializer")
                self.advance()
                return self.finish_for_in(tok, decl)
            self.expect(";")
            init: AstNode = decl
        elif self.at(";"):
            self.advance()
            init = make_node(NodeKind.EMPTY_STMT)
        else:
            expr = self.expression()
            if self.at("in"):
                if expr.kind is not NodeKind.IDENTIFIER:
                    raise self.error("for-in target must be a plain name")
                self.advance()
                return self.finish_for_in(tok, expr)
            self.expect(";")
            init = make_node(NodeKind.EXPR_STMT, [expr])
        test = self.expression()
        self.expect(";")
        update = self.expression()
        self.expect(")")
        body = self.statement()
        return make_node(
            NodeKind.FOR_CLASSIC, [init, test, update, body], span=self.span_from(tok)
        )

    def finish_for_in(self, tok: Token, target: AstNode) -> AstNode:
        subject = self.expression()
        self.expect(")")
        body = self.statement()
        return make_node(
            NodeKind.FOR_IN, [target, subject, body], span=self.span_from(tok)
        )

    # -- expressions ----------------------------------------------------

    def expression(self) -> AstNode:
        return self.assignment()

    def assignment(self) -> AstNode:
        tok = self.peek()
        left = self.conditional()
        if self.at("="):
            if left.kind not in _ASSIGN_TARGETS:
                raise self.error("invalid assignment target")
            self.advance()
            right = self.assignment()
            return make_node(NodeKind.ASSIGN, [left, right], span=self.span_from(tok))
        return left

    def conditional(self) -> AstNode:
        tok = self.peek()
        test = self.binary(0)
        if self.at("?"):
            self.advance()
            consequent = self.assignment()
            self.expect(":")
            alternate = self.assignment()
            return make_node(
                NodeKind.CONDITIONAL,
                [test, consequent, alternate],
                span=self.span_from(tok),
            )
        return test

    _BINARY_LEVELS = (("||",), ("&&",), ("==", "!="), ("<", "<=", ">", ">="),
                      ("+", "-"), ("*", "/", "%"))

    def binary(self, level: int) -> AstNode:
        if level >= len(self._BINARY_LEVELS):
            return self.unary()
        tok = self.peek()
        left = self.binary(level + 1)
        ops = self._BINARY_LEVELS[level]
        while self.peek().category == "punct" and self.peek().text in ops:
            op = self.advance().text
            right = self.binary(level + 1)
            left = make_node(
                NodeKind.BINARY, [left, right], payload=op, span=self.span_from(tok)
            )
        return left

    def unary(self) -> AstNode:
        tok = self.peek()
        if self.at("!") or self.at("-") or self.at("typeof"):
            op = self.advance().text
            operand = self.unary()
            return make_node(
                NodeKind.UNARY, [operand], payload=op, span=self.span_from(tok)
            )
        if self.at(".~") or self.at(".!"):
            return self.tag_expression()
        return self.postfix(self.primary())

    def tag_expression(self) -> AstNode:
        """`.~`/`.!` with the callee rule described in the module docstring."""
        tok = self.advance()
        kind = NodeKind.ESCAPE if tok.text == ".~" else NodeKind.INLINE
        if self.at("("):
            self.advance()
            operand = self.expression()
            self.expect(")")
            tag = make_node(kind, [operand], span=self.span_from(tok))
            return self.postfix(tag)
        operand = self.tag_operand()
        tag = make_node(kind, [operand], span=self.span_from(tok))
        if self.at("("):
            return self.postfix(tag)
        return tag

    def tag_operand(self) -> AstNode:
        """A name plus member/index selectors; call arguments stay outside."""
        tok = self.peek()
        if tok.category == "ident":
            self.advance()
            node = make_node(
                NodeKind.IDENTIFIER,
                payload=self.check_name(tok, tok.text),
                span=self.span_from(tok),
            )
        elif tok.category == "unique":
            self.advance()
            node = make_node(
                NodeKind.UNIQUE_IDENT,
                payload=self.check_name(tok, str(tok.value)),
                span=self.span_from(tok),
            )
        else:
            raise self.error("expected a name or parenthesized operand after tag")
        while True:
            if self.at("."):
                self.advance()
                name_tok = self.peek()
                if name_tok.category != "ident":
                    raise self.error("expected a property name after '.'")
                self.advance()
                node = make_node(
                    NodeKind.MEMBER,
                    [node],
                    payload=name_tok.text,
                    span=self.span_from(tok),
                )
            elif self.at("["):
                self.advance()
                index = self.expression()
                self.expect("]")
                node = make_node(NodeKind.INDEX, [node, index], span=self.span_from(tok))
            else:
                return node

    def postfix(self, node: AstNode) -> AstNode:
        while True:
            if self.at("("):
                tok = self.advance()
                args = []
                while not self.at(")"):
                    if args:
                        self.expect(",")
                    args.append(self.expression())
                self.expect(")")
                node = make_node(
                    NodeKind.CALL, [node, *args], span=self.span_from(tok)
                )
            elif self.at("."):
                self.advance()
                name_tok = self.peek()
                if name_tok.category != "ident":
                    raise self.error("expected a property name after '.'")
                self.advance()
                node = make_node(
                    NodeKind.MEMBER,
                    [node],
                    payload=name_tok.text,
                    span=self.span_from(name_tok),
                )
            elif self.at("["):
                tok = self.advance()
                index = self.expression()
                self.expect("]")
                node = make_node(
                    NodeKind.INDEX, [node, index], span=self.span_from(tok)
                )
            else:
                return node

    def primary(self) -> AstNode:
        tok = self.peek()
        if tok.category == "number":
            self.advance()
            return make_node(
                NodeKind.NUMBER_LIT, payload=float(tok.value), span=self.span_from(tok)
            )
        if tok.category == "string":
            self.advance()
            return make_node(
                NodeKind.STRING_LIT, payload=str(tok.value), span=self.span_from(tok)
            )
        if self.at("true") or self.at("false"):
            self.advance()
            return make_node(
                NodeKind.BOOL_LIT, payload=(tok.text == "true"), span=self.span_from(tok)
            )
        if self.at("null"):
            self.advance()
            return make_node(NodeKind.NULL_LIT, span=self.span_from(tok))
        if self.at("undefined"):
            self.advance()
            return make_node(NodeKind.UNDEFINED_LIT, span=self.span_from(tok))
        if tok.category == "ident":
            self.advance()
            return make_node(
                NodeKind.IDENTIFIER,
                payload=self.check_name(tok, tok.text),
                span=self.span_from(tok),
            )
        if tok.category == "unique":
            self.advance()
            return make_node(
                NodeKind.UNIQUE_IDENT,
                payload=self.check_name(tok, str(tok.value)),
                span=self.span_from(tok),
            )
        if self.at("("):
            self.advance()
            expr = self.expression()
            self.expect(")")
            return expr
        if self.at("{"):
            return self.object_literal()
        if self.at("["):
            self.advance()
            elements = []
            while not self.at("]"):
                if elements:
                    self.expect(",")
                elements.append(self.expression())
            self.expect("]")
            return make_node(NodeKind.ARRAY_LIT, elements, span=self.span_from(tok))
        if self.at("function"):
            self.advance()
            if not self.at("("):
                raise self.error("function expressions are anonymous in this dialect")
            params = self.param_list()
            body = self.block()
            return make_node(
                NodeKind.FUNCTION_EXPR, [*params, body], span=self.span_from(tok)
            )
        if self.at("new"):
            return self.new_expression()
        if self.at(".<"):
            return self.quasi_quote()
        shown = tok.text or "end of input"
        raise self.error(f"unexpected {shown!r}")

    def object_literal(self) -> AstNode:
        tok = self.expect("{")
        props = []
        while not self.at("}"):
            if props:
                self.expect(",")
            key_tok = self.peek()
            if key_tok.category == "ident":
                key = key_tok.text
            elif key_tok.category == "string":
                key = str(key_tok.value)
            else:
                raise self.error("object keys must be names or string literals")
            self.advance()
            self.expect(":")
            value = self.expression()
            props.append(
                make_node(
                    NodeKind.PROPERTY, [value], payload=key, span=self.span_from(key_tok)
                )
            )
        self.expect("}")
        return make_node(NodeKind.OBJECT_LIT, props, span=self.span_from(tok))

    def new_expression(self) -> AstNode:
        tok = self.expect("new")
        if self.at(".~") or self.at(".!"):
            tag_tok = self.advance()
            kind = NodeKind.ESCAPE if tag_tok.text == ".~" else NodeKind.INLINE
            if self.at("("):
                self.advance()
                operand = self.expression()
                self.expect(")")
            else:
                operand = self.tag_operand()
            callee: AstNode = make_node(kind, [operand], span=self.span_from(tag_tok))
        elif self.at("("):
            self.advance()
            callee = self.expression()
            self.expect(")")
        else:
            callee = self.tag_operand()
        self.expect("(")
        args = []
        while not self.at(")"):
            if args:
                self.expect(",")
            args.append(self.expression())
        self.expect(")")
        node = make_node(NodeKind.NEW, [callee, *args], span=self.span_from(tok))
        return self.postfix(node)

    def quasi_quote(self) -> AstNode:
        tok = self.expect(".<")
        if self.at(">."):
            self.advance()
            body = make_node(NodeKind.PROGRAM, [])
            return make_node(
                NodeKind.QUASI_QUOTE, [body], payload="stmts", span=self.span_from(tok)
            )
        if self.quote_body_is_statements():
            stmts = []
            while not self.at(">."):
                if self.at_category("eof"):
                    raise self.error("unterminated quasi-quote")
                stmts.append(self.statement())
            self.advance()
            body = make_node(NodeKind.PROGRAM, stmts)
            return make_node(
                NodeKind.QUASI_QUOTE, [body], payload="stmts", span=self.span_from(tok)
            )
        expr = self.expression()
        if self.at(">."):
            self.advance()
            return make_node(
                NodeKind.QUASI_QUOTE, [expr], payload="expr", span=self.span_from(tok)
            )
        if self.at(","):
            # Comma list: sugar for a statement list of expression statements,
            # so `.< x, y >.` splices as two elements.
            exprs = [expr]
            while self.at(","):
                self.advance()
                exprs.append(self.expression())
            self.expect(">.")
            stmts = [make_node(NodeKind.EXPR_STMT, [e]) for e in exprs]
            body = make_node(NodeKind.PROGRAM, stmts)
            return make_node(
                NodeKind.QUASI_QUOTE, [body], payload="stmts", span=self.span_from(tok)
            )
        if self.at(";"):
            self.advance()
            stmts = [make_node(NodeKind.EXPR_STMT, [expr])]
            while not self.at(">."):
                if self.at_category("eof"):
                    raise self.error("unterminated quasi-quote")
                stmts.append(self.statement())
            self.advance()
            body = make_node(NodeKind.PROGRAM, stmts)
            return make_node(
                NodeKind.QUASI_QUOTE, [body], payload="stmts", span=self.span_from(tok)
            )
        raise self.error("expected '>.', ',' or ';' in quasi-quote")

    def quote_body_is_statements(self) -> bool:
        tok = self.peek()
        if tok.category == "keyword" and tok.text == "function":
            nxt = self.peek(1)
            return not (nxt.category == "punct" and nxt.text == "(")
        if tok.category == "keyword":
            return tok.text in ("var", "return", "if", "while", "for", "debugger")
        return tok.category == "punct" and tok.text in ("{", ";", ".&")
