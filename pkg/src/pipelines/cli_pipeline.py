#!/usr/bin/env python3
"""
Command-line interface of the PTS kernel.

Subcommands:
1. check      - type-check or infer a judgement in T or T′, optionally emitting the derivation as JSON
2. curate     - extract a well-formed sub-context and report every claim of the curation theorem
3. wf         - check context well-formedness, optionally after dependency ordering (--reorder)
4. normalize  - beta-normalise a term within the fuel budget
5. merge      - merge two well-formed compatible contexts
6. instances  - list the built-in PTS instances
7. validate   - re-check a derivation JSON file against the rules of T or T′

Exit codes: 0 success, 1 rejected judgement or failed check (report on stdout),
2 usage, parse or spec error, 3 fuel exhausted or conversion undecided.

Contexts are given inline (``"nat : *, z : nat"``) or as a path to a file with
one declaration per line; inline parsing is tried first.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from core.config import non_negative_int, setup_logging
from core.contexts import Context, dependency_order
from core.errors import (
    ContextPreconditionError,
    DuplicateVariableError,
    FuelExhausted,
    IncompatibleContextsError,
    NotWellFormedError,
    ParseError,
    PtsError,
    PtsTypeError,
    SourceSpan,
    SpecValidationError,
    TypeErrorKind,
    UnknownSortError,
)
from core.pts_spec import PtsSpec, builtin_instances
from core.reduction import Fuel, normalize
from core.terms import Term
from frontend.derivation_json import read_derivation, write_derivation
from frontend.printer import print_context, print_judgement, print_term, print_tree
from frontend.spec_files import load_spec
from frontend.syntax import SourceMap, TermPath, parse_context_located, parse_term, parse_term_located
from orchestration.checks import DerivationSystem, validate_derivation
from pipelines.curation import curate_derivation, theorem_report
from pipelines.elaboration import check_t, infer_t
from pipelines.typing_engine import check_tprime, infer_tprime
from pipelines.well_formedness import merge, wf_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3

# Spans of each declared type by term path, per variable.
DeclarationSpans = Dict[str, Dict[TermPath, SourceSpan]]


def parse_cli_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse CLI arguments for all subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--spec',
        default='coc',
        help="Built-in instance name (see `instances`), shipped spec name or path to a .pts file."
    )
    common.add_argument(
        '--fuel',
        type=non_negative_int,
        default=None,
        help="Maximum number of beta-steps per reduction (default: PTS_FUEL or 10000)."
    )
    common.add_argument(
        '-v', '--verbose',
        action='store_true',
        help="Log kernel steps at DEBUG level to stderr."
    )

    parser = argparse.ArgumentParser(
        prog='pts-check',
        description="Type checking for pure type systems with arbitrary contexts, and context curation."
    )
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', parents=[common], help="Check or infer a judgement.")
    check.add_argument('--system', choices=['t', 'tprime'], default='tprime')
    check.add_argument('--ctx', default='', help="Context, inline or as a file path.")
    check.add_argument('--term', required=True)
    check.add_argument('--type', default=None, help="Expected type; inferred when omitted.")
    check.add_argument('--emit-derivation', default=None, help="Write the derivation as JSON here.")
    check.add_argument(
        '--max-depth',
        type=non_negative_int,
        default=None,
        help="Elide derivation premises below this depth in the printed tree."
    )

    curate = commands.add_parser('curate', parents=[common], help="Curate the context of a judgement.")
    curate.add_argument('--ctx', default='')
    curate.add_argument('--term', required=True)
    curate.add_argument('--emit-derivation', default=None, help="Write the T derivation as JSON here.")
    curate.add_argument('--json', action='store_true', help="Print the report as JSON.")

    wf = commands.add_parser('wf', parents=[common], help="Check context well-formedness.")
    wf.add_argument('--ctx', required=True)
    wf.add_argument(
        '--reorder',
        action='store_true',
        help="Sort declarations by dependency first and print the ordered context."
    )

    normalize_cmd = commands.add_parser('normalize', parents=[common], help="Beta-normalise a term.")
    normalize_cmd.add_argument('--term', required=True)

    merge_cmd = commands.add_parser('merge', parents=[common], help="Merge two contexts.")
    merge_cmd.add_argument('--ctx1', required=True)
    merge_cmd.add_argument('--ctx2', required=True)

    commands.add_parser('instances', parents=[common], help="List the built-in instances.")

    validate = commands.add_parser('validate', parents=[common], help="Re-check a derivation file.")
    validate.add_argument('--system', choices=['t', 'tprime'], default='tprime')
    validate.add_argument('--derivation', required=True)

    return parser.parse_args(argv)


def _fuel(args: argparse.Namespace) -> Fuel:
    return Fuel(args.fuel) if args.fuel is not None else Fuel()


def _parse_context_source(source: str, spec: PtsSpec, file: str) -> Tuple[Context, DeclarationSpans]:
    try:
        return parse_context_located(source, spec.sorts, file=file)
    except DuplicateVariableError as exc:
        raise ParseError(exc.detail, exc.span) from exc


def read_context_located(value: str, spec: PtsSpec) -> Tuple[Context, DeclarationSpans]:
    """Parse ``value`` as an inline context, falling back to reading it as a file.

    A variable declared twice in the input is reported as a ParseError.
    """
    try:
        return _parse_context_source(value, spec, "<inline>")
    except ParseError:
        path = Path(value)
        if not path.is_file():
            raise
    return _parse_context_source(path.read_text(encoding="utf-8"), spec, str(path))


def read_context_argument(value: str, spec: PtsSpec) -> Context:
    return read_context_located(value, spec)[0]


def _term(value: str, spec: PtsSpec) -> Term:
    return parse_term(value, spec.sorts)


def _rejection_exit_code(exc: PtsTypeError) -> int:
    """Exit code for a typing failure, looking through NotWellFormed to its cause."""
    kind = exc.kind
    if isinstance(exc, NotWellFormedError):
        kind = exc.report.error_kind or kind
    if kind is TypeErrorKind.CONVERSION_UNDECIDED:
        return EXIT_UNDECIDED
    return EXIT_REJECTED


def _render_type_error(exc: PtsTypeError) -> str:
    where = f"{exc.span.render()}: " if exc.span is not None else ""
    location = "/".join(exc.location) if exc.location else "<root>"
    return f"rejected: {where}[{exc.kind.value}] at {location}: {exc.detail}"


def run_check(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    fuel = _fuel(args)
    ctx, declaration_spans = read_context_located(args.ctx, spec)
    term, term_spans = parse_term_located(args.term, spec.sorts)
    source = SourceMap(term_spans, declaration_spans)
    try:
        if args.type is not None:
            expected, source.type_ = parse_term_located(args.type, spec.sorts, file="<type>")
            checker = check_t if args.system == 't' else check_tprime
            tree = checker(spec, ctx, term, expected, fuel)
        else:
            inferrer = infer_t if args.system == 't' else infer_tprime
            _, tree = inferrer(spec, ctx, term, fuel)
    except PtsTypeError as exc:
        source.attach(exc)
        raise
    system = "T" if args.system == 't' else "T'"
    print(f"accepted in {system}: {print_judgement(tree)}")
    print(print_tree(tree, max_depth=args.max_depth))
    if args.emit_derivation:
        write_derivation(args.emit_derivation, tree)
    return EXIT_OK


def run_curate(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    fuel = _fuel(args)
    ctx, declaration_spans = read_context_located(args.ctx, spec)
    term, term_spans = parse_term_located(args.term, spec.sorts)
    report = theorem_report(spec, ctx, term, fuel)
    if isinstance(report.error, PtsTypeError):
        SourceMap(term_spans, declaration_spans).attach(report.error)

    if args.json:
        print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    else:
        if report.delta is not None:
            print(print_context(report.delta) or "(empty)")
        summary = report.to_dict()
        for name, ok in summary["checks"].items():
            print(f"{name}: {'pass' if ok else 'FAIL'}")
        if report.error is not None:
            error = report.error
            print(_render_type_error(error) if isinstance(error, PtsTypeError) else f"rejected: {error}")
        for violation in report.violations:
            print(f"violation: {violation}")

    if args.emit_derivation and report.passed:
        # Re-run on the same inputs; results are deterministic.
        _, deriv = infer_tprime(spec, ctx, term, fuel)
        write_derivation(args.emit_derivation, curate_derivation(spec, deriv, fuel).t_deriv)

    if report.passed:
        return EXIT_OK
    if isinstance(report.error, PtsTypeError):
        return _rejection_exit_code(report.error)
    return EXIT_REJECTED


def run_wf(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    ctx, declaration_spans = read_context_located(args.ctx, spec)
    if args.reorder:
        try:
            ctx = dependency_order(ctx)
        except PtsTypeError as exc:
            SourceMap(declarations=declaration_spans).attach(exc)
            raise
        print(print_context(ctx) or "(empty)")
    report = wf_check(spec, ctx, _fuel(args))
    print(report.describe())
    if report.well_formed:
        return EXIT_OK
    if report.error_kind is TypeErrorKind.CONVERSION_UNDECIDED:
        return EXIT_UNDECIDED
    return EXIT_REJECTED


def run_normalize(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    term = _term(args.term, spec)
    print(print_term(normalize(term, _fuel(args))))
    return EXIT_OK


def run_merge(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    g1 = read_context_argument(args.ctx1, spec)
    g2 = read_context_argument(args.ctx2, spec)
    print(print_context(merge(spec, g1, g2, _fuel(args))) or "(empty)")
    return EXIT_OK


def run_instances(args: argparse.Namespace) -> int:
    for spec in builtin_instances().values():
        print(spec.summary())
    return EXIT_OK


def run_validate(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    tree = read_derivation(args.derivation, spec.sorts)
    system = DerivationSystem(args.system)
    violations = validate_derivation(spec, tree, system, _fuel(args))
    if not violations:
        print(f"valid: {tree.size()} nodes in system {system.value}")
        return EXIT_OK
    for violation in violations:
        print(f"violation: {violation.describe()}")
    return EXIT_REJECTED


RUNNERS: Dict[str, Callable[[argparse.Namespace], int]] = {
    'check': run_check,
    'curate': run_curate,
    'wf': run_wf,
    'normalize': run_normalize,
    'merge': run_merge,
    'instances': run_instances,
    'validate': run_validate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """CLI orchestration layer: run one subcommand and map failures to exit codes."""
    try:
        args = parse_cli_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    setup_logging(__name__, args.verbose)

    try:
        return RUNNERS[args.command](args)
    except (ParseError, SpecValidationError, UnknownSortError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FuelExhausted as exc:
        print(f"undecided: {exc}; last reduct: {print_term(exc.last)}")
        return EXIT_UNDECIDED
    except PtsTypeError as exc:
        print(_render_type_error(exc))
        return _rejection_exit_code(exc)
    except (IncompatibleContextsError, ContextPreconditionError) as exc:
        print(f"rejected: {exc}")
        return EXIT_REJECTED
    except PtsError as exc:
        logger.error(f"Kernel failure: {exc}")
        print(f"error: {exc}")
        return EXIT_REJECTED


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
