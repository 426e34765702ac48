"""Widget-spec file parsing."""

import pytest

from stagedjs import IoError, load_specs
from stagedjs.uispec import ELEM_CLASSES, SpecFormatError, parse_specs


GOOD = """\
# a comment
elem Button ok
set label Click me now
set order 1

elem Frame main
set title Demo
"""


def test_parse_records_elements_in_order():
    specs = parse_specs(GOOD, "demo.uispec")
    assert [s["elemClass"] for s in specs] == ["Button", "Frame"]
    assert specs[0]["id"] == "ok"
    assert specs[1]["attrs"] == {"title": "Demo"}


def test_set_values_keep_internal_spaces():
    specs = parse_specs(GOOD, "demo.uispec")
    assert specs[0]["attrs"]["label"] == "Click me now"
    assert specs[0]["attrs"]["order"] == "1"


def test_blank_lines_and_comments_skipped():
    specs = parse_specs("\n# only noise\n\n", "x.uispec")
    assert specs == []


def test_known_element_classes():
    assert ELEM_CLASSES == {"Button", "StaticText", "Choice", "Frame", "TextCtrl"}
    for cls in sorted(ELEM_CLASSES):
        specs = parse_specs(f"elem {cls} a1\n", "x.uispec")
        assert specs[0]["elemClass"] == cls


def test_unknown_class_rejected_with_position():
    with pytest.raises(SpecFormatError) as exc:
        parse_specs("elem Slider s1\n", "bad.uispec")
    assert "bad.uispec:1" in str(exc.value)


def test_set_before_any_elem_rejected():
    with pytest.raises(SpecFormatError) as exc:
        parse_specs("set label x\n", "bad.uispec")
    assert "bad.uispec:1" in str(exc.value)


def test_malformed_lines_rejected():
    for line in ["elem Button", "set label", "frobnicate x y"]:
        with pytest.raises(SpecFormatError):
            parse_specs(line + "\n", "bad.uispec")


def test_load_specs_reads_files(tmp_path):
    path = tmp_path / "w.uispec"
    path.write_text(GOOD)
    specs = load_specs(str(path))
    assert len(specs) == 2


def test_load_specs_missing_file_is_io_error(tmp_path):
    with pytest.raises(IoError):
        load_specs(str(tmp_path / "absent.uispec"))


def test_corpus_spec_files_parse(corpus_dir):
    for name, count in [
        ("widgets_1.uispec", 1),
        ("widgets_5.uispec", 5),
        ("widgets_20.uispec", 20),
    ]:
        specs = load_specs(str(corpus_dir / name))
        assert len(specs) == count, name
