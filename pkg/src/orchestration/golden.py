"""Golden corpus of worked judgements and snapshots of their verdicts.

Each corpus case names an operation (check, curate, wf, merge, normalize),
a spec and its inputs in surface syntax, plus the expected verdict. A
snapshot records the verdict the kernel actually produces for every case;
comparing two snapshots lists every case whose verdict changed.
"""

from __future__ import annotations

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from core.config import metadata_dir
from core.errors import FuelExhausted, IncompatibleContextsError, PtsTypeError
from core.pts_spec import PtsSpec
from core.reduction import Fuel, normalize
from frontend.printer import print_context, print_term
from frontend.spec_files import load_spec
from frontend.syntax import parse_context, parse_term
from pipelines.curation import theorem_report
from pipelines.elaboration import check_t, infer_t
from pipelines.typing_engine import check_tprime, infer_tprime
from pipelines.well_formedness import merge, wf_check

logger = logging.getLogger(__name__)

Case = Dict[str, Any]
Verdict = Dict[str, Any]


def default_corpus_path() -> Path:
    return metadata_dir() / "golden" / "corpus.json"


def default_baseline_path() -> Path:
    return metadata_dir() / "golden" / "baseline.json"


def load_corpus(path: Optional[Path] = None) -> List[Case]:
    data = json.loads((path or default_corpus_path()).read_text(encoding="utf-8"))
    return data["cases"]


def _rejected(exc: PtsTypeError) -> Verdict:
    return {"verdict": "rejected", "kind": exc.kind.value}


def _run_check(case: Case, spec: PtsSpec, fuel: Fuel) -> Verdict:
    ctx = parse_context(case.get("ctx", ""), spec.sorts)
    term = parse_term(case["term"], spec.sorts)
    in_t = case.get("system", "tprime") == "t"
    try:
        if case.get("type") is not None:
            expected = parse_term(case["type"], spec.sorts)
            tree = (check_t if in_t else check_tprime)(spec, ctx, term, expected, fuel)
            type_ = tree.conclusion.type_
        else:
            type_, _ = (infer_t if in_t else infer_tprime)(spec, ctx, term, fuel)
    except PtsTypeError as exc:
        return _rejected(exc)
    return {"verdict": "accepted", "type": print_term(type_)}


def _run_curate(case: Case, spec: PtsSpec, fuel: Fuel) -> Verdict:
    ctx = parse_context(case.get("ctx", ""), spec.sorts)
    report = theorem_report(spec, ctx, parse_term(case["term"], spec.sorts), fuel)
    verdict: Verdict = {
        "verdict": "passed" if report.passed else "failed",
        "delta": print_context(report.delta) if report.delta is not None else None,
    }
    if isinstance(report.error, PtsTypeError):
        verdict["kind"] = report.error.kind.value
    return verdict


def _run_wf(case: Case, spec: PtsSpec, fuel: Fuel) -> Verdict:
    report = wf_check(spec, parse_context(case["ctx"], spec.sorts), fuel)
    if report.well_formed:
        return {"verdict": "well-formed"}
    return {
        "verdict": "not-well-formed",
        "failing_index": report.failing_index,
        "failing_variable": report.failing_variable,
        "kind": report.error_kind.value,
    }


def _run_merge(case: Case, spec: PtsSpec, fuel: Fuel) -> Verdict:
    g1 = parse_context(case["ctx1"], spec.sorts)
    g2 = parse_context(case["ctx2"], spec.sorts)
    try:
        return {"verdict": "merged", "result": print_context(merge(spec, g1, g2, fuel))}
    except PtsTypeError as exc:
        return _rejected(exc)
    except IncompatibleContextsError:
        return {"verdict": "incompatible"}


def _run_normalize(case: Case, spec: PtsSpec, fuel: Fuel) -> Verdict:
    try:
        return {"verdict": "normal", "result": print_term(normalize(parse_term(case["term"], spec.sorts), fuel))}
    except FuelExhausted:
        return {"verdict": "undecided"}


RUNNERS: Dict[str, Callable[[Case, PtsSpec, Fuel], Verdict]] = {
    "check": _run_check,
    "curate": _run_curate,
    "wf": _run_wf,
    "merge": _run_merge,
    "normalize": _run_normalize,
}


def run_case(case: Case, fuel: Optional[Fuel] = None) -> Verdict:
    """Run one corpus case through the kernel and return its verdict."""
    spec = load_spec(case.get("spec", "coc"))
    return RUNNERS[case["op"]](case, spec, fuel or Fuel())


def verdict_matches(expected: Verdict, actual: Verdict) -> bool:
    """True when every key the corpus pins down has the same value in ``actual``."""
    return all(actual.get(key) == value for key, value in expected.items())


def take_snapshot(cases: List[Case], fuel: Optional[Fuel] = None) -> Dict[str, Any]:
    verdicts = {case["id"]: run_case(case, fuel) for case in cases}
    return {
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "cases": len(cases),
        "verdicts": verdicts,
    }


def compare_snapshots(baseline: Dict[str, Any], current: Dict[str, Any]) -> List[str]:
    """List of differences between two snapshots (empty means identical verdicts)."""
    diffs = []
    base_verdicts, cur_verdicts = baseline.get("verdicts", {}), current.get("verdicts", {})
    for case_id in sorted(set(base_verdicts) | set(cur_verdicts)):
        before, after = base_verdicts.get(case_id), cur_verdicts.get(case_id)
        if before is None:
            diffs.append(f"{case_id}: new case -> {after!r}")
        elif after is None:
            diffs.append(f"{case_id}: case removed (was {before!r})")
        elif before != after:
            diffs.append(f"{case_id}: baseline={before!r} -> current={after!r}")
    return diffs


def mismatches_with_corpus(cases: List[Case], snapshot: Dict[str, Any]) -> List[str]:
    """Cases whose snapshot verdict disagrees with the verdict pinned in the corpus."""
    problems = []
    for case in cases:
        actual = snapshot["verdicts"].get(case["id"], {})
        if not verdict_matches(case["expect"], actual):
            problems.append(f"{case['id']}: expected {case['expect']!r}, got {actual!r}")
    return problems


__all__ = [
    "compare_snapshots",
    "default_baseline_path",
    "default_corpus_path",
    "load_corpus",
    "mismatches_with_corpus",
    "run_case",
    "take_snapshot",
    "verdict_matches",
]
