"""Study toolkit CLI.

Subcommands: select-words, score, stats, survey. All input and output is
UTF-8 TSV. Exit code 0 on success; on failure a machine-readable
``error<TAB>message`` line goes to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..assistant import read_query_log
from ..errors import StoryloomError
from .scoring import (
    apply_consensus,
    format_worksheet,
    merge_raters,
    parse_consensus_file,
    parse_rater_file,
)
from .stats import UndefinedStatisticError, descriptive_stats
from .survey import construct_summary, format_summary, parse_survey_rows
from .words import select_test_words, word_band


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_select_words(args) -> int:
    records = read_query_log(args.log)
    result = select_test_words(records, n=args.n)
    lines = ["rank\tword\tcount\tband"]
    for rank, word in enumerate(result.words, start=1):
        lines.append(f"{rank}\t{word}\t{result.counts[word]}\t{word_band(word)}")
    _write("\n".join(lines) + "\n", args.out)
    if result.shortfall:
        print(
            f"warning\tonly {len(result.words)} distinct candidate words for n={result.requested}",
            file=sys.stderr,
        )
    return 0


def _cmd_score(args) -> int:
    tests = merge_raters(
        parse_rater_file(Path(args.rater1).read_text(encoding="utf-8")),
        parse_rater_file(Path(args.rater2).read_text(encoding="utf-8")),
    )
    if args.consensus:
        apply_consensus(tests, parse_consensus_file(Path(args.consensus).read_text(encoding="utf-8")))

    unresolved = sum(len(t.unresolved()) for t in tests)
    if unresolved:
        worksheet = format_worksheet(tests)
        if args.worksheet:
            Path(args.worksheet).write_text(worksheet, encoding="utf-8")
            where = args.worksheet
        else:
            sys.stdout.write(worksheet)
            where = "stdout"
        print(
            f"error\t{unresolved} items need rater consensus; worksheet written to {where}",
            file=sys.stderr,
        )
        return 1

    lines = ["participant\tscore"]
    totals = []
    for test in tests:
        total = test.total()
        totals.append(total)
        lines.append(f"{test.participant_id}\t{total:g}")
    if len(totals) >= 2:
        mean, sd = descriptive_stats(totals)
        lines.append(f"mean\t{mean:.2f}")
        lines.append(f"sd\t{sd:.2f}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_stats(args) -> int:
    lines = [line for line in Path(args.values).read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines:
        print("error\tempty input file", file=sys.stderr)
        return 1
    header = lines[0].split("\t")
    if args.column not in header:
        print(f"error\tno column {args.column!r} in header {header}", file=sys.stderr)
        return 1
    index = header.index(args.column)
    try:
        values = [float(line.split("\t")[index]) for line in lines[1:]]
        mean, sd = descriptive_stats(values)
    except (ValueError, IndexError):
        print("error\tnon-numeric or missing values in column", file=sys.stderr)
        return 1
    _write(f"n\t{len(values)}\nmean\t{mean:.6f}\nsd\t{sd:.6f}\n", args.out)
    return 0


def _cmd_survey(args) -> int:
    responses = parse_survey_rows(Path(args.responses).read_text(encoding="utf-8"))
    _write(format_summary(construct_summary(responses)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storyloom-study",
        description="Vocabulary-test construction, dual-rater scoring, and survey statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select-words", help="rank target words from a query-log export")
    p.add_argument("log", help="query log TSV (assistant export format)")
    p.add_argument("-n", type=int, default=20, help="number of words (default 20)")
    p.add_argument("-o", "--out", help="output TSV path (default stdout)")
    p.set_defaults(func=_cmd_select_words)

    p = sub.add_parser("score", help="merge two rater files and total per participant")
    p.add_argument("rater1")
    p.add_argument("rater2")
    p.add_argument("--consensus", help="filled consensus worksheet TSV")
    p.add_argument("--worksheet", help="where to write the disagreement worksheet")
    p.add_argument("-o", "--out", help="totals TSV path (default stdout)")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("stats", help="mean and sample SD of a TSV column")
    p.add_argument("values")
    p.add_argument("--column", default="score")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("survey", help="per-item and per-construct Likert statistics")
    p.add_argument("responses")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_survey)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (StoryloomError, UndefinedStatisticError, OSError, ValueError) as exc:
        print(f"error\t{exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
