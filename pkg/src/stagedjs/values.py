"""Runtime value singletons shared by the interpreter and reflection layer.

MiniJS distinguishes `null` and `undefined`; neither maps cleanly onto
Python's None (which would conflate them), so each gets a dedicated
singleton with value semantics by identity.
"""

from __future__ import annotations


class _JsNull:
    __slots__ = ()

    def __repr__(self) -> str:
        return "null"

    def __bool__(self) -> bool:
        return False


class _JsUndefined:
    __slots__ = ()

    def __repr__(self) -> str:
        return "undefined"

    def __bool__(self) -> bool:
        return False


JS_NULL = _JsNull()
JS_UNDEFINED = _JsUndefined()
