"""Command-line interface: the ``srprio`` entry point.

Subcommands: validate, rank, explain, diagram, whatif. Payload goes to
stdout, diagnostics to stderr. Exit codes: 0 success (no validation
errors), 1 model or computation errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .dsl import parse_model
from .model import Model, Strategy
from .prioritize import (
    Override,
    OverrideError,
    Score,
    UnknownRequirementError,
    apply_overrides,
    diff_rankings,
    explain,
    rank_cifs,
    rank_requirements,
)
from .report import export_dot, export_structured, format_exact, render_table
from .validation import validate

_STRATEGIES = {"max": Strategy.MAX, "avg": Strategy.AVERAGE}


def _load_model(path: str, quiet: bool) -> Model | None:
    """Parse and validate a model file, reporting diagnostics on stderr.

    Returns None (after printing why) when the file is unreadable, fails to
    parse, or has validation errors. Warnings are printed unless ``quiet``.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        return None
    result = parse_model(text)
    for diagnostic in result.diagnostics:
        if quiet and diagnostic.severity == "warning":
            continue
        position = diagnostic.position
        print(
            f"{path}:{position.line}:{position.column}: {diagnostic.severity} "
            f"{diagnostic.code}: {diagnostic.message}",
            file=sys.stderr,
        )
    if not result.ok:
        return None
    errors = False
    for diagnostic in validate(result.model):
        if diagnostic.severity == "error":
            errors = True
        elif quiet:
            continue
        print(
            f"{path}: {diagnostic.severity} {diagnostic.code} "
            f"({diagnostic.subject}): {diagnostic.message}",
            file=sys.stderr,
        )
    return None if errors else result.model


def _emit(payload: str, output: str | None) -> int:
    if output is None:
        sys.stdout.write(payload)
        return 0
    try:
        # newline="" so CSV's CRLF rows survive untranslated
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
    except OSError as exc:
        print(f"error: cannot write {output}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


def _fmt_score(score: Score | None) -> str:
    if score is None:
        return "-"
    if score.value is None:
        return "no-path"
    return f"{score.label} ({format_exact(score.value)})"


def _fmt_position(position: int | None) -> str:
    return f"#{position}" if position is not None else "-"


def _cmd_validate(args: argparse.Namespace) -> int:
    return 0 if _load_model(args.model, args.quiet) is not None else 1


def _cmd_rank(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.quiet)
    if model is None:
        return 1
    strategy = _STRATEGIES[args.strategy]
    if args.subject == "cifs":
        ranking = rank_cifs(model, strategy)
    else:
        ranking = rank_requirements(model, strategy)
    if args.format == "table":
        payload = render_table(ranking, model)
    else:
        payload = export_structured(model, ranking, args.format)
    return _emit(payload, args.output)


def _cmd_explain(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.quiet)
    if model is None:
        return 1
    try:
        explanation = explain(model, args.requirement, _STRATEGIES[args.strategy])
    except UnknownRequirementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    lines = [
        f"requirement: {explanation.requirement}",
        f"strategy: {explanation.strategy.value}",
        f"score: {_fmt_score(explanation.score)}",
        f"paths: {len(explanation.paths)}",
    ]
    for explained in explanation.paths:
        path = explained.path
        lines.append(
            f"  -[{path.hop1_severity}]-> {path.cif} "
            f"-[{path.hop2_severity}]-> {path.vision} => {explained.severity_label}"
        )
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_diagram(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.quiet)
    if model is None:
        return 1
    ranking = rank_requirements(model, Strategy.MAX) if args.ranking else None
    return _emit(export_dot(model, ranking), args.output)


def _cmd_whatif(args: argparse.Namespace) -> int:
    overrides = args.overrides or []
    if not overrides:
        args.parser.error("at least one of --set/--add/--remove is required")
    model = _load_model(args.model, args.quiet)
    if model is None:
        return 1
    strategy = _STRATEGIES[args.strategy]
    before = rank_requirements(model, strategy)
    try:
        changed = apply_overrides(model, overrides)
    except OverrideError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    after = rank_requirements(changed, strategy)
    diff = diff_rankings(before, after)
    lines = [
        f"{move.subject}: {_fmt_position(move.old_position)} -> "
        f"{_fmt_position(move.new_position)}  "
        f"{_fmt_score(move.old_score)} -> {_fmt_score(move.new_score)}"
        for move in diff.moves
    ]
    lines.append(f"unchanged: {diff.unchanged}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


class _OverrideOption(argparse.Action):
    """Collects --set/--add/--remove as Override objects, in command-line
    order, so later edits can build on earlier ones."""

    def __call__(self, parser, namespace, values, option_string=None):
        kind = self.const
        head, sep, severity = values.partition("=")
        if kind == "remove":
            if sep:
                parser.error(f"argument --remove: expected SRC->TGT, got {values!r}")
        elif not sep or not severity:
            parser.error(f"argument --{kind}: expected SRC->TGT=SEV, got {values!r}")
        source, arrow, target = head.partition("->")
        if not arrow or not source or not target:
            parser.error(f"argument --{kind}: expected SRC->TGT, got {values!r}")
        if kind == "set":
            override = Override.set_severity(source, target, severity)
        elif kind == "add":
            override = Override.add_link(source, target, severity)
        else:
            override = Override.remove_link(source, target)
        items = getattr(namespace, self.dest, None)
        if items is None:
            items = []
            setattr(namespace, self.dest, items)
        items.append(override)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srprio",
        description="Prioritize security requirements by their business impact.",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress warnings")

    # SUPPRESS keeps a post-subcommand --quiet from clobbering one given
    # before the subcommand (subparser defaults overwrite parsed values).
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--quiet", action="store_true", default=argparse.SUPPRESS,
        help="suppress warnings",
    )

    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    validate_p = sub.add_parser(
        "validate", parents=[common],
        help="check a model file and print diagnostics",
    )
    validate_p.add_argument("model", help="path to a .srp model file")
    validate_p.set_defaults(func=_cmd_validate)

    rank_p = sub.add_parser(
        "rank", parents=[common],
        help="rank security requirements (or CIFs) by business impact",
        epilog="table columns: POS SUBJECT TITLE PROPERTY IMPACT VALUE PATHS",
    )
    rank_p.add_argument("model", help="path to a .srp model file")
    rank_p.add_argument(
        "--strategy", choices=("max", "avg"), default="max",
        help="how multiple impact paths combine (default: max)",
    )
    rank_p.add_argument(
        "--subject", choices=("requirements", "cifs"), default="requirements",
        help="what to rank (default: requirements)",
    )
    rank_p.add_argument(
        "--format", choices=("table", "json", "csv"), default="table",
        help="output format (default: table)",
    )
    rank_p.add_argument("-o", "--output", metavar="FILE", help="write to FILE instead of stdout")
    rank_p.set_defaults(func=_cmd_rank)

    explain_p = sub.add_parser(
        "explain", parents=[common],
        help="show every impact path behind one requirement's score",
    )
    explain_p.add_argument("model", help="path to a .srp model file")
    explain_p.add_argument("requirement", metavar="requirement-id",
                           help="requirement id, e.g. control_system.availability")
    explain_p.add_argument("--strategy", choices=("max", "avg"), default="max")
    explain_p.set_defaults(func=_cmd_explain)

    diagram_p = sub.add_parser(
        "diagram", parents=[common],
        help="export the impact diagram as DOT",
    )
    diagram_p.add_argument("model", help="path to a .srp model file")
    diagram_p.add_argument(
        "--ranking", action="store_true",
        help="annotate requirement nodes with max-strategy score labels",
    )
    diagram_p.add_argument("-o", "--output", metavar="FILE", help="write to FILE instead of stdout")
    diagram_p.set_defaults(func=_cmd_diagram)

    whatif_p = sub.add_parser(
        "whatif", parents=[common],
        help="edit links hypothetically and show how the ranking moves",
    )
    whatif_p.add_argument("model", help="path to a .srp model file")
    whatif_p.add_argument(
        "--set", dest="overrides", action=_OverrideOption, const="set",
        metavar="SRC->TGT=SEV", help="change an existing link's severity",
    )
    whatif_p.add_argument(
        "--add", dest="overrides", action=_OverrideOption, const="add",
        metavar="SRC->TGT=SEV", help="add a new link",
    )
    whatif_p.add_argument(
        "--remove", dest="overrides", action=_OverrideOption, const="remove",
        metavar="SRC->TGT", help="remove an existing link",
    )
    whatif_p.add_argument("--strategy", choices=("max", "avg"), default="max")
    whatif_p.set_defaults(func=_cmd_whatif, overrides=None, parser=whatif_p)

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse arguments and execute; returns the exit code instead of exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse --help / usage errors
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2


def main() -> None:
    raise SystemExit(run())
