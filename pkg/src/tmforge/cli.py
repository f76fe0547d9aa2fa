"""Command-line front end: validate, analyze, botnet, mitigate, diagram.

Exit codes gate CI pipelines: 0 success, 1 invalid model or catalog,
2 findings present when --fail-on-findings is set, 3 I/O or usage error.
Reports go to standard output (or --out); diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from enum import IntEnum
from importlib import resources
from pathlib import Path

from tmforge import io as tmio
from tmforge.botnet import assess
from tmforge.mitigation import apply_all, recommend, simulate_plan
from tmforge.model import SystemModel
from tmforge.report import (
    frequency,
    render_csv,
    render_dot,
    render_json,
    render_markdown,
)
from tmforge.rules import RuleCatalog

DATA_DIR_ENV = "TMFORGE_DATA_DIR"
DEFAULT_RULE_CATALOGS = ("stride_core.tcatalog", "vast_core.tcatalog")
DEFAULT_MITIGATION_CATALOG = "mitigations_core.tmitig"


class ExitCode(IntEnum):
    OK = 0
    INVALID = 1
    FINDINGS = 2
    USAGE = 3


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract wants 3.
    def error(self, message):
        raise CliUsageError(message)


def default_data_bytes(name: str) -> bytes:
    """Resolve a shipped data file: $TMFORGE_DATA_DIR first, then package data."""
    env_dir = os.environ.get(DATA_DIR_ENV)
    if env_dir:
        candidate = Path(env_dir) / name
        if candidate.exists():
            return candidate.read_bytes()
    return (resources.files("tmforge") / "data" / name).read_bytes()


def _load_model(path: str) -> SystemModel:
    return tmio.load_model(Path(path).read_bytes())


def _load_rule_catalogs(paths: list[str] | None) -> list[RuleCatalog]:
    if paths:
        return [tmio.load_rule_catalog(Path(p).read_bytes()) for p in paths]
    return [tmio.load_rule_catalog(default_data_bytes(name)) for name in DEFAULT_RULE_CATALOGS]


def _write_output(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _stamp(args) -> str | None:
    if getattr(args, "stamp", False):
        return datetime.now(timezone.utc).isoformat(timespec="seconds")
    return None


def _render_figure(freq, figure_path: str) -> None:
    from tmforge import figures

    figures.render_frequency_figure(freq, figure_path)


def cmd_validate(args) -> int:
    try:
        _load_model(args.model)
    except tmio.DocumentError as exc:
        for error in exc.errors:
            print(str(error), file=sys.stderr)
        return ExitCode.INVALID
    return ExitCode.OK


def _report_command(args, with_botnet: bool) -> int:
    model = _load_model(args.model)
    catalogs = _load_rule_catalogs(args.catalog)
    from tmforge.rules import analyze

    findings = analyze(model, catalogs, args.method)
    freq = frequency(findings)
    assessment = assess(model, findings) if with_botnet else None

    element_order = [e.id for e in model.elements]
    if args.format == "json":
        data = render_json(
            findings, assessment, None, freq, stamp=_stamp(args), model_order=element_order
        )
    elif args.format == "md":
        data = render_markdown(findings, assessment, None, freq, stamp=_stamp(args)).encode("utf-8")
    else:
        data = render_csv(findings).encode("utf-8")
    _write_output(data, args.out)
    if args.figure:
        _render_figure(freq, args.figure)
    if findings and args.fail_on_findings:
        return ExitCode.FINDINGS
    return ExitCode.OK


def cmd_analyze(args) -> int:
    return _report_command(args, with_botnet=False)


def cmd_botnet(args) -> int:
    return _report_command(args, with_botnet=True)


def cmd_mitigate(args) -> int:
    model = _load_model(args.model)
    mitigation_catalog = tmio.load_mitigation_catalog(
        Path(args.mitigations).read_bytes()
        if args.mitigations
        else default_data_bytes(DEFAULT_MITIGATION_CATALOG)
    )
    catalogs = _load_rule_catalogs(args.catalog)
    # A mitigation addressing an unknown rule is a typo; a rule whose
    # mitigations are missing from this catalog merely becomes residual.
    cross_errors = tmio.check_addressed_rules(mitigation_catalog, catalogs)
    if cross_errors:
        for error in cross_errors:
            print(str(error), file=sys.stderr)
        return ExitCode.INVALID

    from tmforge.rules import analyze

    findings = analyze(model, catalogs, args.method)
    freq = frequency(findings)
    plan = recommend(findings, mitigation_catalog)
    simulation = simulate_plan(model, plan, catalogs, args.method)

    if args.format == "json":
        data = render_json(findings, None, plan, freq, simulation=simulation, stamp=_stamp(args))
    else:
        data = render_markdown(
            findings, None, plan, freq, simulation=simulation, stamp=_stamp(args)
        ).encode("utf-8")
    sys.stdout.write(data.decode("utf-8"))

    if args.apply:
        if not args.out:
            raise CliUsageError("--apply requires --out PATH for the patched model")
        patched, _notes = apply_all(model, plan.mitigations())
        Path(args.out).write_bytes(tmio.save_model(patched))
    return ExitCode.OK


def cmd_diagram(args) -> int:
    model = _load_model(args.model)
    _write_output(render_dot(model).encode("utf-8"), args.out)
    return ExitCode.OK


def _add_report_flags(parser: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    parser.add_argument(
        "--catalog",
        action="append",
        metavar="PATH",
        help="rule catalog file; repeatable; default: the shipped STRIDE and VAST catalogs",
    )
    parser.add_argument(
        "--method", choices=("stride", "vast", "both"), default="both",
        help="which rule method(s) to evaluate (default: both)",
    )
    parser.add_argument(
        "--format", choices=formats, default="json",
        help="report format (default: json)",
    )
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument(
        "--fail-on-findings", action="store_true",
        help="exit with status 2 when any finding is reported",
    )
    parser.add_argument(
        "--figure", metavar="PATH",
        help="also render a frequency chart (png/svg by extension)",
    )
    parser.add_argument(
        "--stamp", action="store_true",
        help="include a generation timestamp in the report (off by default; "
             "reports are byte-reproducible without it)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tmforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a system model file")
    p_validate.add_argument("model", help="path to a .tmodel file")
    p_validate.set_defaults(func=cmd_validate)

    p_analyze = sub.add_parser("analyze", help="evaluate rule catalogs against a model")
    p_analyze.add_argument("model", help="path to a .tmodel file")
    _add_report_flags(p_analyze, ("json", "md", "csv"))
    p_analyze.set_defaults(func=cmd_analyze)

    p_botnet = sub.add_parser("botnet", help="analyze and assess botnet exposure")
    p_botnet.add_argument("model", help="path to a .tmodel file")
    _add_report_flags(p_botnet, ("json", "md", "csv"))
    p_botnet.set_defaults(func=cmd_botnet)

    p_mitigate = sub.add_parser("mitigate", help="build a mitigation plan, optionally apply it")
    p_mitigate.add_argument("model", help="path to a .tmodel file")
    p_mitigate.add_argument(
        "--mitigations", metavar="PATH",
        help="mitigation catalog file (default: the shipped catalog)",
    )
    p_mitigate.add_argument(
        "--catalog", action="append", metavar="PATH",
        help="rule catalog file; repeatable; default: the shipped pair",
    )
    p_mitigate.add_argument(
        "--method", choices=("stride", "vast", "both"), default="both",
        help="which rule method(s) to evaluate (default: both)",
    )
    p_mitigate.add_argument(
        "--format", choices=("json", "md"), default="json",
        help="plan report format (default: json)",
    )
    p_mitigate.add_argument(
        "--apply", action="store_true",
        help="apply every recommended mitigation and write the patched model to --out",
    )
    p_mitigate.add_argument("--out", metavar="PATH", help="path for the patched model (with --apply)")
    p_mitigate.add_argument("--stamp", action="store_true", help="include a generation timestamp")
    p_mitigate.set_defaults(func=cmd_mitigate)

    p_diagram = sub.add_parser("diagram", help="export the model as a DOT digraph")
    p_diagram.add_argument("model", help="path to a .tmodel file")
    p_diagram.add_argument("--out", metavar="PATH", help="write the DOT file here instead of stdout")
    p_diagram.set_defaults(func=cmd_diagram)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    try:
        return args.func(args)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    except tmio.DocumentError as exc:
        for error in exc.errors:
            print(str(error), file=sys.stderr)
        return ExitCode.INVALID
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return ExitCode.USAGE


if __name__ == "__main__":
    raise SystemExit(main())
