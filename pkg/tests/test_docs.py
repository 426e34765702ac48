"""The checked-in schema reference must match its generator."""

import importlib.util
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]


def _load_regen_docs():
    path = ROOT / "tools" / "regen_docs.py"
    spec = importlib.util.spec_from_file_location("regen_docs", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_reflection_schema_doc_is_current():
    doc = ROOT / "docs" / "reflection_schema.md"
    if not doc.exists():
        pytest.fail("docs/reflection_schema.md is missing; run tools/regen_docs.py")
    expected = _load_regen_docs().render()
    actual = doc.read_text(encoding="utf-8")
    assert actual == expected, (
        "docs/reflection_schema.md is stale; regenerate with tools/regen_docs.py"
    )


def test_every_node_type_is_documented():
    from stagedjs.reflect import schema_table

    text = (ROOT / "docs" / "reflection_schema.md").read_text(encoding="utf-8")
    for name, _fields in schema_table():
        assert f"`{name}`" in text
