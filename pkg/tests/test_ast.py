"""Tree plumbing: construction rules, traversal, surgery, equality, cloning."""

import pytest

from stagedjs import NodeKind, parse
from stagedjs.ast import (
    ArityViolation,
    ListIntoFixedSlot,
    TargetNotFound,
    clone,
    contains_staging,
    dfs,
    is_statement,
    locate,
    make_node,
    replace_in_parent,
    structural_equals,
)


def ident(name):
    return make_node(NodeKind.IDENTIFIER, [], name)


def test_make_node_enforces_child_counts():
    with pytest.raises(ArityViolation):
        make_node(NodeKind.BINARY, [ident("a")], "+")
    with pytest.raises(ArityViolation):
        make_node(NodeKind.IF, [ident("a")])


def test_make_node_assigns_fresh_uids():
    a, b = ident("x"), ident("x")
    assert a.uid != b.uid


def test_dfs_is_preorder():
    prog = parse("var a = 1;\nvar b = 2;\n")
    kinds = [n.kind for n in dfs(prog)]
    assert kinds[0] is NodeKind.PROGRAM
    assert kinds[1] is NodeKind.VAR_DECL
    assert NodeKind.NUMBER_LIT in kinds


def test_locate_finds_node_parent_and_index():
    prog = parse("var a = 1;\nprint(a);\n")
    call = prog.children[1].children[0]
    found, parent, index = locate(prog, call.uid)
    assert found is call
    assert parent is prog.children[1]
    assert index == 0


def test_locate_missing_uid_raises():
    prog = parse("var a = 1;\n")
    with pytest.raises(TargetNotFound):
        locate(prog, -1)


def test_replace_in_parent_single_slot():
    prog = parse("print(a);\n")
    call = prog.children[0].children[0]
    replace_in_parent(prog, call.uid, ident("b"))
    assert prog.children[0].children[0].payload == "b"


def test_replace_in_parent_splices_lists_only_into_list_slots():
    prog = parse("a;\nb;\n")
    second = parse("x;\ny;\n")
    replace_in_parent(prog, prog.children[1].uid, list(second.children))
    assert [s.children[0].payload for s in prog.children] == ["a", "x", "y"]

    prog2 = parse("print(a);\n")
    arg = prog2.children[0].children[0].children[1]
    with pytest.raises(ListIntoFixedSlot):
        replace_in_parent(prog2, arg.uid, [ident("x"), ident("y")])


def test_replace_root_requires_single_node():
    prog = parse("a;\n")
    with pytest.raises(ListIntoFixedSlot):
        replace_in_parent(prog, prog.uid, [ident("x")])
    swapped = replace_in_parent(prog, prog.uid, ident("x"))
    assert swapped.payload == "x"


def test_structural_equals_ignores_spans_and_uids():
    a = parse("var x = (1 + 2);\n")
    b = parse("\n\nvar x = (1 + 2);\n")
    assert structural_equals(a, b)


def test_structural_equals_catches_payload_and_shape_changes():
    a = parse("var x = 1;\n")
    assert not structural_equals(a, parse("var y = 1;\n"))
    assert not structural_equals(a, parse("var x = 2;\n"))
    assert not structural_equals(a, parse("var x = 1;\nvar z = 2;\n"))


def test_clone_is_deep_with_fresh_uids():
    original = parse("function f(a) { return (a + 1); }\n")
    copy = clone(original)
    assert structural_equals(original, copy)
    assert {n.uid for n in dfs(original)}.isdisjoint({n.uid for n in dfs(copy)})
    copy.children[0].children[1].payload = "zzz"
    assert original.children[0].children[1].payload == "a"


def test_is_statement_classification():
    prog = parse("var a = 1;\nif (a) { ; }\n")
    assert is_statement(prog.children[0])
    assert is_statement(prog.children[1])
    assert not is_statement(prog.children[0].children[1])


def test_contains_staging_spots_each_tag():
    assert not contains_staging(parse("var a = 1;\n"))
    for source in [
        "var q = .< x >.;\n",
        "var q = .< .~y >.;\n",
        ".!gen();\n",
        ".& var a = 1;\n",
    ]:
        assert contains_staging(parse(source)), source


def test_contains_staging_counts_unique_idents_only_via_quotes():
    prog = parse("var q = .< var $t = 1; >.;\n")
    assert contains_staging(prog)
