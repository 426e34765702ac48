"""Batch compilation: the staging loop, stage-source files, residual output.

A compile iterates: extract the deepest stage, translate it to a pure
program, unparse it, save it as `<input-stem>.stage<k>.mjs.txt`, parse
that saved text back, evaluate it in a fresh interpreter wired to a
stage context over the original tree, then drop the consumed execute
regions — until no stage remains. What is left is the residual program.

Generator functions declared at the program's top level that still
contain staging constructs after the last stage are stage vocabulary,
not runtime code (each stage already received its own clone; calling
one at run time would be an error anyway), so they are dropped from
the residual. After that the residual must be completely pure: no
staging constructs in the tree and no reserved `__meta` names in the
text, or compilation fails.

Stage-save directory resolution: explicit config value, else the
STAGEDC_SAVE_DIR environment variable, else the input file's directory.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .ast import STAGING_KINDS, AstNode, NodeKind, contains_staging, dfs
from .errors import StagedError
from .interp import Observer, run_program
from .parser import parse
from .stagecraft import StageContext, StagingState, get_stage, translate_stage, finalize_stage
from .unparse import unparse


class StageLimitExceeded(StagedError):
    pass


class ResidualImpure(StagedError):
    pass


class StageFailure(StagedError):
    """A stage blew up at evaluation time; carries where and which."""

    def __init__(self, stage_index: int, source_path: Optional[str], cause: StagedError):
        where = f" ({source_path})" if source_path else ""
        super().__init__(f"stage {stage_index}{where}: {cause}", None)
        self.stage_index = stage_index
        self.source_path = source_path
        self.cause = cause


@dataclass
class DriverConfig:
    input_path: str
    output_path: Optional[str] = None
    save_dir: Optional[str] = None
    max_stages: int = 100
    debug: bool = False
    debug_port: Optional[int] = None
    run_residual: bool = False

    def resolved_save_dir(self) -> str:
        if self.save_dir:
            return self.save_dir
        env = os.environ.get("STAGEDC_SAVE_DIR")
        if env:
            return env
        return os.path.dirname(os.path.abspath(self.input_path))

    def stem(self) -> str:
        base = os.path.basename(self.input_path)
        root, _ = os.path.splitext(base)
        return root or base

    def resolved_output_path(self) -> str:
        if self.output_path:
            return self.output_path
        return os.path.join(
            os.path.dirname(os.path.abspath(self.input_path)), self.stem() + ".mjs.txt"
        )


@dataclass
class StagingReport:
    stages_run: int = 0
    stage_paths: list = field(default_factory=list)
    stage_times: list = field(default_factory=list)
    output_path: Optional[str] = None

    def summary_lines(self) -> list:
        lines = []
        for i, (path, secs) in enumerate(zip(self.stage_paths, self.stage_times), start=1):
            lines.append(f"stage {i}: {path} ({secs:.3f} s)")
        lines.append(f"stages run: {self.stages_run}")
        if self.output_path:
            lines.append(f"residual: {self.output_path}")
        return lines


def save_stage_source(save_dir: str, stem: str, stage_index: int, source: str) -> str:
    os.makedirs(save_dir, exist_ok=True)
    path = os.path.join(save_dir, f"{stem}.stage{stage_index}.mjs.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(source)
    return path


def prepare_stage_source(root: AstNode, debug: bool):
    """One stage step's front half: extract, translate, unparse.

    Returns (stage, source) where stage is None when staging is done.
    """
    stage = get_stage(root)
    if stage is None:
        return None, None
    program = translate_stage(stage)
    source = unparse(program)
    if debug:
        source = "debugger;\n" + source
    return stage, source


def evaluate_stage(
    root: AstNode,
    stage,
    source: str,
    state: StagingState,
    *,
    base_dir: Optional[str] = None,
    output: Optional[Callable[[str], None]] = None,
    observer: Optional[Observer] = None,
) -> StageContext:
    """Back half: run the saved stage text against the original tree."""
    program = parse(source, hygiene_check=False)
    ctx = StageContext(root, stage, state)
    run_program(program, output=output, base_dir=base_dir, observer=observer, meta=ctx)
    finalize_stage(root, stage, ctx)
    return ctx


def staging_loop(
    root: AstNode,
    config: DriverConfig,
    *,
    output: Optional[Callable[[str], None]] = None,
) -> "tuple[AstNode, StagingReport]":
    report = StagingReport()
    state = StagingState()
    save_dir = config.resolved_save_dir()
    stem = config.stem()
    base_dir = os.path.dirname(os.path.abspath(config.input_path))
    while True:
        stage, source = prepare_stage_source(root, config.debug)
        if stage is None:
            break
        if report.stages_run >= config.max_stages:
            raise StageLimitExceeded(
                f"stage limit of {config.max_stages} reached with stages remaining"
            )
        index = report.stages_run + 1
        path = save_stage_source(save_dir, stem, index, source)
        started = time.perf_counter()
        try:
            evaluate_stage(root, stage, source, state, base_dir=base_dir, output=output)
        except StagedError as exc:
            raise StageFailure(index, path, exc) from exc
        report.stages_run += 1
        report.stage_paths.append(path)
        report.stage_times.append(time.perf_counter() - started)
    finish_residual(root)
    return root, report


def finish_residual(root: AstNode) -> AstNode:
    """Drop stage-only top-level function declarations, then demand purity."""
    root.children = [
        child
        for child in root.children
        if not (child.kind is NodeKind.FUNCTION_DECL and contains_staging(child))
    ]
    for node in dfs(root):
        if node.kind in STAGING_KINDS or node.kind is NodeKind.UNIQUE_IDENT:
            raise ResidualImpure(
                f"residual program still contains a staging construct ({node.kind.value})",
                node.span.start_line or None,
            )
    return root


def compile_config(config: DriverConfig, *, stdout: Callable[[str], None] = print) -> int:
    """Batch entry point shared by the CLI; returns a process exit code."""
    try:
        with open(config.input_path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        stdout(f"stagedc: cannot read {config.input_path}: {exc.strerror}")
        return 1
    try:
        root = parse(source)
    except StagedError as exc:
        stdout(f"stagedc: {config.input_path}: {exc}")
        return 2
    try:
        residual, report = staging_loop(root, config, output=stdout)
    except StageLimitExceeded as exc:
        stdout(f"stagedc: {config.input_path}: {exc}")
        return 4
    except StageFailure as exc:
        stdout(f"stagedc: {config.input_path}: {exc}")
        return 3
    except StagedError as exc:
        # Pre-stage analysis failures and residual impurity both mean the
        # program as written cannot be staged.
        stdout(f"stagedc: {config.input_path}: {exc}")
        return 2
    text = unparse(residual)
    out_path = config.resolved_output_path()
    out_dir = os.path.dirname(out_path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    report.output_path = out_path
    for line in report.summary_lines():
        stdout(line)
    if config.run_residual:
        try:
            # Interpret the emitted text, not the in-memory tree, so error
            # positions refer to the artifact the user can open. Generated
            # hygiene names are legal here, hence no hygiene check.
            run_program(
                parse(text, hygiene_check=False),
                output=stdout,
                base_dir=os.path.dirname(os.path.abspath(config.input_path)),
            )
        except StagedError as exc:
            stdout(f"stagedc: {out_path}: {exc}")
            return 3
    return 0
