"""Regenerate docs/reflection_schema.md from the library's own schema table.

    python3 tools/regen_docs.py

A test compares the checked-in file against this generator's output, so
edit the table in stagedjs.reflect and re-run rather than editing the
markdown by hand.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent.parent / "src"))

from stagedjs.reflect import schema_table  # noqa: E402

HEADER = """\
# Reflection schema

<!-- Generated by tools/regen_docs.py; do not edit by hand. -->

When a stage program manipulates code, it holds plain object-language
values: dictionaries with a `type` field, lists, numbers, strings,
booleans, `null` and `undefined`. This page lists every node type the
reflection layer produces (`ast_to_reflection`) and accepts
(`reflection_to_ast`).

Conventions:

- `[X]` is an array of `X`; `field?` may be absent entirely.
- `NameSlot` is an `Identifier` or, inside quoted code, a
  `UniqueIdentifier` (the `$name` form, renamed at splice time).
- `Target` (assignable positions) is an `Identifier`, `UniqueIdentifier`,
  or `MemberExpression` (computed or not).
- Numbers are always floats; `Literal` carries `null` directly, while
  `undefined` gets its own valueless node type so the two stay distinct.
- `BinaryOp` is one of `|| && == != < <= > >= + - * / %`; `UnaryOp` is
  `!`, `-` or `typeof`.

| Type | Fields |
| ---- | ------ |
"""

FOOTER = """\

Structural rules enforced on rebuild:

- Unknown `type` names, missing fields, and extra fields are rejected
  with the JSON path of the offending value.
- Expression fields reject statement nodes and vice versa.
- `AssignmentExpression.operator` must be `"="` and `left` must be a
  legal target.
- `VariableDeclaration` carries exactly one declarator: the source
  language has no comma-separated declarations.

Example: `.!gen(1);` reflects as

```json
{
  "type": "ExpressionStatement",
  "expression": {
    "type": "CallExpression",
    "callee": {
      "type": "InlineDirective",
      "argument": { "type": "Identifier", "name": "gen" },
      "position": "expr"
    },
    "arguments": [ { "type": "Literal", "value": 1.0 } ]
  }
}
```
"""


def render() -> str:
    rows = []
    for name, fields in schema_table():
        rows.append(f"| `{name}` | {fields or '(no fields)'} |")
    return HEADER + "\n".join(rows) + "\n" + FOOTER


def main() -> None:
    out = pathlib.Path(__file__).parent.parent / "docs" / "reflection_schema.md"
    out.parent.mkdir(exist_ok=True)
    out.write_text(render(), encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
