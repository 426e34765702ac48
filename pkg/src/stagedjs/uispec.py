"""Widget-spec files: the input format consumed by the loadSpecs builtin.

Line-based, two directives:

    elem <Class> <id>     start a widget record
    set <key> <value...>  attach an attribute to the latest widget

Blank lines and lines starting with `#` are ignored. `<value...>` is
the rest of the line, kept verbatim as a string. Widget classes are a
fixed vocabulary so generators can dispatch on them.
"""

from __future__ import annotations

from .errors import StagedError


class SpecFormatError(StagedError):
    pass


class IoError(StagedError):
    pass


ELEM_CLASSES = frozenset({"Button", "StaticText", "Choice", "Frame", "TextCtrl"})


def load_specs(path: str) -> list:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read widget spec {path}: {exc.strerror}") from exc
    return parse_specs(text, path)


def parse_specs(text: str, path: str = "<spec>") -> list:
    widgets: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        directive = parts[0]
        if directive == "elem":
            if len(parts) != 3:
                raise SpecFormatError(
                    f"{path}:{lineno}: elem needs a class and an id"
                )
            elem_class, elem_id = parts[1], parts[2]
            if elem_class not in ELEM_CLASSES:
                raise SpecFormatError(
                    f"{path}:{lineno}: unknown widget class {elem_class!r}"
                )
            widgets.append({"elemClass": elem_class, "id": elem_id, "attrs": {}})
        elif directive == "set":
            if len(parts) != 3:
                raise SpecFormatError(
                    f"{path}:{lineno}: set needs a key and a value"
                )
            if not widgets:
                raise SpecFormatError(
                    f"{path}:{lineno}: set before any elem directive"
                )
            widgets[-1]["attrs"][parts[1]] = parts[2]
        else:
            raise SpecFormatError(
                f"{path}:{lineno}: unknown directive {directive!r}"
            )
    return widgets
