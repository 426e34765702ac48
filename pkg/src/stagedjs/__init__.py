"""stagedjs: a multi-stage metaprogramming toolchain for a small
JavaScript-like language.

Staged source uses four tags — quasi-quote `.< … >.`, escape `.~`,
inline `.!`, execute `.&` — and compiles by repeatedly extracting the
deepest stage, translating it to a pure program, evaluating it against
the original tree, and continuing until only a pure residual program
remains. An interactive TCP debugger can drive the same loop
stage-by-stage.
"""

from .ast import AstNode, NodeKind, SourceSpan, clone, dfs, make_node, structural_equals
from .errors import StagedError
from .lexer import LexError
from .parser import ParseError, parse, parse_expression
from .unparse import MalformedTree, format_number, unparse, unparse_expression
from .reflect import (
    MalformedReflection,
    ast_to_reflection,
    is_ast_value,
    reflection_to_ast,
)
from .stagecraft import (
    EscapeOfIllegalValue,
    EscapeOutsideQuote,
    InlineOfNonAst,
    KindMismatch,
    NegativeLevel,
    RegistryEmpty,
    StageContext,
    StageProgram,
    StagingState,
    UnconsumedInline,
    compute_meta_levels,
    finalize_stage,
    get_stage,
    translate_stage,
)
from .interp import Environment, Interpreter, JsRuntimeError, run_program
from .uispec import IoError, SpecFormatError, load_specs
from .driver import (
    DriverConfig,
    ResidualImpure,
    StageFailure,
    StageLimitExceeded,
    StagingReport,
    compile_config,
    staging_loop,
)

__version__ = "1.0.0"

__all__ = [
    "AstNode",
    "NodeKind",
    "SourceSpan",
    "clone",
    "dfs",
    "make_node",
    "structural_equals",
    "StagedError",
    "LexError",
    "ParseError",
    "parse",
    "parse_expression",
    "MalformedTree",
    "format_number",
    "unparse",
    "unparse_expression",
    "MalformedReflection",
    "ast_to_reflection",
    "is_ast_value",
    "reflection_to_ast",
    "EscapeOfIllegalValue",
    "EscapeOutsideQuote",
    "InlineOfNonAst",
    "KindMismatch",
    "NegativeLevel",
    "RegistryEmpty",
    "StageContext",
    "StageProgram",
    "StagingState",
    "UnconsumedInline",
    "compute_meta_levels",
    "finalize_stage",
    "get_stage",
    "translate_stage",
    "Environment",
    "Interpreter",
    "JsRuntimeError",
    "run_program",
    "IoError",
    "SpecFormatError",
    "load_specs",
    "DriverConfig",
    "ResidualImpure",
    "StageFailure",
    "StageLimitExceeded",
    "StagingReport",
    "compile_config",
    "staging_loop",
    "__version__",
]
