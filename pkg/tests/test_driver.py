"""Batch pipeline: stage loop, artifacts on disk, exit codes, residual purity."""

import os

import pytest

from stagedjs import (
    DriverConfig,
    ResidualImpure,
    compile_config,
    parse,
    staging_loop,
)
from stagedjs.driver import finish_residual


def config_for(workdir, name, **kwargs):
    return DriverConfig(input_path=str(workdir / name), **kwargs)


def compile_collect(config):
    lines = []
    code = compile_config(config, stdout=lines.append)
    return code, lines


def read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


# -- the loop on real corpora ---------------------------------------------------


def test_power_corpus_runs_one_stage(workdir):
    config = config_for(workdir, "power.sjs")
    root = parse(read(config.input_path))
    residual, report = staging_loop(root, config, output=lambda s: None)
    assert report.stages_run == 1
    assert len(report.stage_paths) == 1
    assert report.stage_paths[0].endswith("power.stage1.mjs.txt")
    from stagedjs import unparse

    assert unparse(residual) == "var r = ((y * y) * y);\n"


def test_meta_generator_runs_two_stages(workdir):
    config = config_for(workdir, "meta_inline.sjs")
    root = parse(read(config.input_path))
    residual, report = staging_loop(root, config, output=lambda s: None)
    assert report.stages_run == 2
    from stagedjs import unparse

    assert unparse(residual) == "var done = 1;\n"


def test_stage_files_land_in_save_dir(workdir, tmp_path):
    save = tmp_path / "stages"
    config = config_for(workdir, "power.sjs", save_dir=str(save))
    code, _ = compile_collect(config)
    assert code == 0
    assert sorted(p.name for p in save.iterdir()) == ["power.stage1.mjs.txt"]


def test_save_dir_env_var_is_honored(workdir, tmp_path, monkeypatch):
    env_dir = tmp_path / "via_env"
    monkeypatch.setenv("STAGEDC_SAVE_DIR", str(env_dir))
    code, _ = compile_collect(config_for(workdir, "power.sjs"))
    assert code == 0
    assert (env_dir / "power.stage1.mjs.txt").exists()


def test_explicit_save_dir_beats_env_var(workdir, tmp_path, monkeypatch):
    monkeypatch.setenv("STAGEDC_SAVE_DIR", str(tmp_path / "ignored"))
    save = tmp_path / "explicit"
    code, _ = compile_collect(config_for(workdir, "power.sjs", save_dir=str(save)))
    assert code == 0
    assert (save / "power.stage1.mjs.txt").exists()
    assert not (tmp_path / "ignored").exists()


def test_residual_written_next_to_input_by_default(workdir):
    code, lines = compile_collect(config_for(workdir, "power.sjs"))
    assert code == 0
    out = workdir / "power.mjs.txt"
    assert out.exists()
    assert read(out) == "var r = ((y * y) * y);\n"
    assert any("stages run: 1" in line for line in lines)
    assert any(str(out) in line for line in lines)


def test_output_flag_overrides_destination(workdir, tmp_path):
    dest = tmp_path / "deep" / "residual.mjs.txt"
    code, _ = compile_collect(config_for(workdir, "power.sjs", output_path=str(dest)))
    assert code == 0
    assert dest.exists()


def test_recompiling_is_deterministic(workdir, tmp_path):
    first_dir = tmp_path / "a"
    second_dir = tmp_path / "b"
    for save in (first_dir, second_dir):
        code, _ = compile_collect(config_for(workdir, "ui_gen.sjs", save_dir=str(save)))
        assert code == 0
    first = read(first_dir / "ui_gen.stage1.mjs.txt")
    second = read(second_dir / "ui_gen.stage1.mjs.txt")
    assert first == second


def test_stage_source_is_reparseable_saved_text(workdir, tmp_path):
    save = tmp_path / "stages"
    code, _ = compile_collect(config_for(workdir, "ctor_points.sjs", save_dir=str(save)))
    assert code == 0
    text = read(save / "ctor_points.stage1.mjs.txt")
    parse(text, hygiene_check=False)  # must be a loadable program
    assert "__metaInline" in text


# -- exit codes -------------------------------------------------------------------


def test_missing_input_exits_1(tmp_path):
    code, lines = compile_collect(DriverConfig(input_path=str(tmp_path / "no.sjs")))
    assert code == 1
    assert "cannot read" in lines[0]


def test_parse_error_exits_2(tmp_path):
    bad = tmp_path / "bad.sjs"
    bad.write_text("var = ;\n")
    code, lines = compile_collect(DriverConfig(input_path=str(bad)))
    assert code == 2
    assert "line 1" in lines[0]


def test_analysis_error_exits_2(tmp_path):
    bad = tmp_path / "neg.sjs"
    bad.write_text("var q = .< x >.;\n")
    code, lines = compile_collect(DriverConfig(input_path=str(bad)))
    assert code == 2


def test_stage_runtime_failure_exits_3(tmp_path):
    bad = tmp_path / "boom.sjs"
    bad.write_text(".& explode();\n")
    code, lines = compile_collect(DriverConfig(input_path=str(bad)))
    assert code == 3
    assert any("stage 1" in line for line in lines)


def test_stage_limit_exits_4_after_saving_every_stage(workdir):
    config = config_for(workdir, "self_reproducer.sjs", max_stages=4)
    code, lines = compile_collect(config)
    assert code == 4
    saved = sorted(
        p.name for p in workdir.iterdir() if ".stage" in p.name
    )
    assert saved == [f"self_reproducer.stage{i}.mjs.txt" for i in range(1, 5)]
    assert not (workdir / "self_reproducer.mjs.txt").exists()


def test_reproducer_stages_are_identical(workdir):
    config = config_for(workdir, "self_reproducer.sjs", max_stages=3)
    code, _ = compile_collect(config)
    assert code == 4
    texts = {
        read(workdir / f"self_reproducer.stage{i}.mjs.txt") for i in (1, 2, 3)
    }
    assert len(texts) == 1


def test_run_flag_executes_residual(workdir):
    config = config_for(workdir, "hygiene.sjs", run_residual=True)
    code, lines = compile_collect(config)
    assert code == 0
    assert lines[-2:] == ["303", "100"]


def test_run_flag_reports_residual_runtime_errors(tmp_path):
    src = tmp_path / "late.sjs"
    src.write_text(".& var ok = 1;\nmissing();\n")
    code, lines = compile_collect(DriverConfig(input_path=str(src), run_residual=True))
    assert code == 3
    assert "missing" in lines[-1]


# -- residual purity ----------------------------------------------------------------


def test_spent_generators_are_pruned_from_residual():
    root = parse(
        "function gen() {\n  return .< .!gen() >.;\n}\nprint(1);\n"
    )
    residual = finish_residual(root)
    from stagedjs import unparse

    assert unparse(residual) == "print(1);\n"


def test_surviving_quote_makes_residual_impure():
    root = parse("var q = .< .!x() >.;\n")
    with pytest.raises(ResidualImpure):
        finish_residual(root)


def test_impure_residual_exits_2(tmp_path):
    src = tmp_path / "impure.sjs"
    src.write_text("var q = .< .!x() >.;\n")
    code, lines = compile_collect(DriverConfig(input_path=str(src)))
    assert code == 2
    assert not (tmp_path / "impure.mjs.txt").exists()


def test_every_residual_is_free_of_staging_text(workdir):
    for name in ["power.sjs", "ctor_points.sjs", "hygiene.sjs", "meta_inline.sjs", "ui_gen.sjs"]:
        code, _ = compile_collect(config_for(workdir, name))
        assert code == 0, name
        text = read(workdir / (name.rsplit(".", 1)[0] + ".mjs.txt"))
        for marker in (".<", ">.", ".~", ".!", ".&", "__meta", "$"):
            assert marker not in text, (name, marker)
