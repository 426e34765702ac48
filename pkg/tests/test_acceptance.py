"""Acceptance gate: one test per shipping criterion.

Run `pytest tests/test_acceptance.py -v` for a one-line pass/fail verdict
per criterion.
"""

import json
import pathlib
import time

import pytest

from stagedjs import (
    DriverConfig,
    NodeKind,
    ast_to_reflection,
    compile_config,
    parse,
    reflection_to_ast,
    run_program,
    staging_loop,
    unparse,
)
from stagedjs.ast import STAGING_KINDS, dfs, structural_equals

from test_debugsvc import DebugClient
from test_reflect import ALL_KINDS_SOURCE
from treegen import random_program


GOLDEN = pathlib.Path(__file__).parent / "golden"


def compile_corpus(workdir, name, **kwargs):
    config = DriverConfig(input_path=str(workdir / name), **kwargs)
    root = parse((workdir / name).read_text())
    return staging_loop(root, config, output=lambda line: None)


def interpret(source, **kwargs):
    lines = []
    env = run_program(parse(source, hygiene_check=False), output=lines.append, **kwargs)
    return lines, env


CTOR_FINAL_LISTING = """\
function Point2d(x, y) {
  this.x = x;
  this.y = y;
}
var pt2d = new Point2d(10, 20);
function Point3d(x, y, z) {
  this.x = x;
  this.y = y;
  this.z = z;
}
var pt3d = new Point3d(10, 20, 30);
"""


def test_accept_01_constructor_generator_end_to_end(workdir):
    started = time.monotonic()
    residual, report = compile_corpus(workdir, "ctor_points.sjs")
    elapsed = time.monotonic() - started
    expected = parse(CTOR_FINAL_LISTING)
    assert structural_equals(residual, expected), unparse(residual)
    assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_accept_02_power_generator_against_cubing_oracle(workdir):
    residual, _ = compile_corpus(workdir, "power.sjs")
    text = unparse(residual)
    factors = [n for n in dfs(residual) if n.payload == "y"]
    assert len(factors) == 3, text  # unrolled once per pass plus the seed
    for y in range(1, 6):
        _, env = interpret(f"var y = {y};\n" + text)
        assert env.lookup("r") == float(y**3), (y, text)


def test_accept_03_residuals_are_tag_free(workdir):
    compiling = [
        "power.sjs",
        "ctor_points.sjs",
        "hygiene.sjs",
        "meta_inline.sjs",
        "ui_gen.sjs",
    ]
    for name in compiling:
        residual, _ = compile_corpus(workdir, name)
        leftovers = [
            n.kind
            for n in dfs(residual)
            if n.kind in STAGING_KINDS or n.kind is NodeKind.UNIQUE_IDENT
        ]
        assert not leftovers, (name, leftovers)
        assert "__meta" not in unparse(residual), name


def test_accept_04_round_trip_properties():
    for seed in range(1000):
        tree = random_program(seed)
        assert structural_equals(tree, parse(unparse(tree), hygiene_check=False)), (
            f"parse/unparse seed {seed}"
        )
    tree = parse(ALL_KINDS_SOURCE)
    assert set(NodeKind) == {n.kind for n in dfs(tree)}
    assert structural_equals(tree, reflection_to_ast(ast_to_reflection(tree)))


def test_accept_05_hygiene_against_capture_free_oracle(workdir):
    residual, _ = compile_corpus(workdir, "hygiene.sjs")
    text = unparse(residual)
    generated = sorted(
        {n.payload for n in dfs(residual) if str(n.payload or "").startswith("t__g")}
    )
    assert len(generated) == 2, text  # one fresh name per inlining
    assert "tmp" not in generated
    oracle = (
        "var acc = 0;\n"
        "var tmp = 100;\n"
        "var t1 = tmp;\n"
        "acc = ((acc + t1) + tmp);\n"
        "var t2 = 3;\n"
        "acc = ((acc + t2) + tmp);\n"
    )
    _, oracle_env = interpret(oracle)
    printed, env = interpret(text)
    assert env.lookup("acc") == oracle_env.lookup("acc") == 303.0
    assert env.lookup("tmp") == oracle_env.lookup("tmp") == 100.0
    assert printed == ["303", "100"]


def test_accept_06_stage_limit_guard_on_self_reproducer(workdir):
    config = DriverConfig(
        input_path=str(workdir / "self_reproducer.sjs"), max_stages=10
    )
    code = compile_config(config, stdout=lambda line: None)
    assert code == 4
    saved = sorted(
        p.name for p in workdir.iterdir() if ".stage" in p.name
    )
    assert saved == sorted(
        f"self_reproducer.stage{i}.mjs.txt" for i in range(1, 11)
    )


def test_accept_07_meta_generator_runs_exactly_two_stages(workdir):
    _, report = compile_corpus(workdir, "meta_inline.sjs")
    assert report.stages_run == 2


def test_accept_08_widget_generator_scales_with_spec_size(workdir):
    template = (workdir / "ui_gen.sjs").read_text()
    assert 'widgets_5.uispec' in template
    counts = {}
    statements = {}
    for k in (1, 5, 20):
        name = f"ui_gen_{k}.sjs"
        (workdir / name).write_text(
            template.replace("widgets_5.uispec", f"widgets_{k}.uispec")
        )
        residual, _ = compile_corpus(workdir, name)
        statements[k] = len(residual.children)
        printed, env = interpret(
            unparse(residual), base_dir=str(workdir)
        )
        assert printed[-1] == str(k), (k, printed)
        assert len(env.lookup("widgets")) == k
        counts[k] = len(env.lookup("widgets"))
    assert statements[1] < statements[5] < statements[20], statements
    assert counts == {1: 1, 5: 5, 20: 20}


def test_accept_09_debug_transcript_matches_golden_bytes(workdir):
    rows = json.loads((GOLDEN / "power_debug_transcript.json").read_text())
    client = DebugClient(workdir, "power.sjs")
    try:
        replies = []
        for row in rows:
            client.send_raw(row["send"])
            reply = client.reader.readline().rstrip("\n")
            replies.append(reply)
            assert reply == row["recv"], row["send"]
    finally:
        client.close()
    stage_events = [json.loads(r) for r in replies if '"stage"' in r]
    stage_events = [e for e in stage_events if e.get("event") == "stage"]
    for event in stage_events:
        if event["stage"] != 0:
            assert event["source"].split("\n")[0] == "debugger;"
    assert stage_events[-1]["stage"] == 0
