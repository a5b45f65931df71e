#!/usr/bin/env python3
"""Entrypoint for the PTS checker CLI.

The implementation is split across ``src/core``, ``src/frontend``,
``src/pipelines`` and ``src/orchestration``. This file re-exports the
public API and keeps script usage working:

    python src/pts_check.py check --spec coc --ctx "nat : *, z : nat" --term z
"""

import sys

from core.contexts import Context, Declaration, dependency_order, extend, is_subset
from core.pts_spec import PtsSpec, builtin_instance, builtin_instances, validate_spec
from core.reduction import Fuel, convertible, normalize, whnf
from frontend.printer import print_context, print_term, print_tree
from frontend.spec_files import load_spec, parse_spec
from frontend.syntax import parse_context, parse_term
from orchestration.checks import DerivationSystem, validate_derivation
from pipelines.cli_pipeline import main
from pipelines.curation import curate, theorem_report
from pipelines.elaboration import check_t, elaborate_key_lemma, infer_t, strengthen_judgement
from pipelines.typing_engine import check_tprime, infer_tprime
from pipelines.well_formedness import merge, reorder, wf_check

__all__ = [
    "Context",
    "Declaration",
    "DerivationSystem",
    "Fuel",
    "PtsSpec",
    "builtin_instance",
    "builtin_instances",
    "check_t",
    "check_tprime",
    "convertible",
    "curate",
    "dependency_order",
    "elaborate_key_lemma",
    "extend",
    "infer_t",
    "infer_tprime",
    "is_subset",
    "load_spec",
    "main",
    "merge",
    "normalize",
    "parse_context",
    "parse_spec",
    "parse_term",
    "print_context",
    "print_term",
    "print_tree",
    "reorder",
    "strengthen_judgement",
    "theorem_report",
    "validate_derivation",
    "validate_spec",
    "wf_check",
    "whnf",
]


if __name__ == "__main__":
    sys.exit(main())
