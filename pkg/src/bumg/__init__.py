"""Bottom-up model generation for first-order clause logic with equality."""

from pathlib import Path

from .engine import (
    Branch,
    SolveResult,
    Strategy,
    check_model,
    extract_model,
    hyperresolve,
    saturate,
    split,
)
from .oracle import FiniteInterpretation, evaluate, find_model, find_model_upto
from .terms import Atom, App, Clause, Signature, Var
from .tptp import ModelDocument, Problem, parse, parse_file, print_clauses, print_model
from .transform import (
    PipelineConfig,
    apply_pipeline,
    bl_sd,
    bl_sp,
    bl_ud,
    bl_up,
    bs,
    crr,
    pf,
    rr,
    sh,
)

__version__ = "0.1.0"


def corpus_dir() -> Path:
    """Directory holding the bundled example problems."""
    return Path(__file__).parent / "corpus"


def mini_corpus_dir() -> Path:
    """Directory holding the 15-problem benchmark corpus."""
    return corpus_dir() / "mini"
