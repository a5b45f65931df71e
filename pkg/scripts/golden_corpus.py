# -*- coding: utf-8 -*-
"""Golden snapshot вердиктов ядра на корпусе разобранных суждений.

Корпус metadata/golden/corpus.json содержит суждения из разобранных
примеров (check / curate / wf / merge / normalize) с ожидаемыми
вердиктами. snapshot прогоняет корпус через ядро и сохраняет вердикты
в JSON; compare сверяет текущие вердикты с baseline; verify сверяет
их с вердиктами, зафиксированными в самом корпусе.

Используется как страховка при рефакторинге ядра: снять baseline до
правок, после правок прогнать compare: любое расхождение означает, что
изменилось поведение проверки типов.

Использование:
    python scripts/golden_corpus.py snapshot [--corpus FILE] [--out FILE] [--fuel N]
    python scripts/golden_corpus.py compare  [--corpus FILE] [--baseline FILE] [--fuel N]
    python scripts/golden_corpus.py verify   [--corpus FILE] [--fuel N]

compare и verify завершаются с кодом 1 при любом расхождении.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT / "src"))

from core.config import non_negative_int, setup_logging  # noqa: E402
from core.reduction import Fuel  # noqa: E402
from orchestration.golden import (  # noqa: E402
    compare_snapshots,
    default_baseline_path,
    default_corpus_path,
    load_corpus,
    mismatches_with_corpus,
    take_snapshot,
)


def print_summary(snap: dict) -> None:
    counts = {}
    for verdict in snap["verdicts"].values():
        counts[verdict["verdict"]] = counts.get(verdict["verdict"], 0) + 1
    print(f"Кейсов: {snap['cases']}")
    for name in sorted(counts):
        print(f"  {name}: {counts[name]}")


def main(argv: Optional[List[str]] = None) -> int:
    # Консоль Windows по умолчанию cp1252, на λ и ′ вывод падает
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8", errors="replace")

    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command", required=True)

    snap_parser = subparsers.add_parser("snapshot", help="снять вердикты и сохранить в JSON")
    snap_parser.add_argument("--out", type=Path, default=default_baseline_path())

    cmp_parser = subparsers.add_parser("compare", help="сверить текущие вердикты с baseline")
    cmp_parser.add_argument("--baseline", type=Path, default=default_baseline_path())

    subparsers.add_parser("verify", help="сверить текущие вердикты с ожиданиями корпуса")

    for sub in subparsers.choices.values():
        sub.add_argument("--corpus", type=Path, default=default_corpus_path())
        sub.add_argument("--fuel", type=non_negative_int, default=None)

    args = parser.parse_args(argv)
    setup_logging("golden_corpus")

    if not args.corpus.exists():
        print(f"Корпус не найден: {args.corpus}")
        return 1
    cases = load_corpus(args.corpus)
    fuel = Fuel(args.fuel) if args.fuel is not None else None
    current = take_snapshot(cases, fuel)

    if args.command == "snapshot":
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(
            json.dumps(current, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        print_summary(current)
        print(f"Snapshot сохранён: {args.out}")
        return 0

    if args.command == "verify":
        problems = mismatches_with_corpus(cases, current)
        if problems:
            print(f"РАСХОЖДЕНИЯ с корпусом ({args.corpus.name}):")
            for problem in problems:
                print(f"  - {problem}")
            return 1
        print(f"OK: все {len(cases)} вердиктов совпадают с корпусом.")
        return 0

    if not args.baseline.exists():
        print(f"Baseline не найден: {args.baseline} (сначала запустите snapshot)")
        return 1
    baseline = json.loads(args.baseline.read_text(encoding="utf-8"))
    diffs = compare_snapshots(baseline, current)
    if diffs:
        print(f"РАСХОЖДЕНИЯ с baseline ({args.baseline.name}, снят {baseline['created_at']}):")
        for diff in diffs:
            print(f"  - {diff}")
        return 1
    print(f"OK: вердикты совпадают с baseline ({args.baseline.name}, "
          f"снят {baseline['created_at']}).")
    print_summary(current)
    return 0


if __name__ == "__main__":
    sys.exit(main())
