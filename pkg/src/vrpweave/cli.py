"""Command-line front end: validate, list-vps, tailor, diff, report.

Exit codes: 0 success, 1 domain error (parse/link/weave failures), 2 I/O or
usage errors. All output is deterministic for identical inputs. Set
VRPWEAVE_COLOR=1/0 to force colored or plain diagnostics.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

from .errors import VrpError
from .metrics import effort_report
from .model import iter_elements
from .model_io import load_model, serialize_model
from .aspects import parse_aspect_file
from .variability import varpoint_population
from .weaver import WeaveRequest, diff_models, link, weave


def _use_color() -> bool:
    env = os.environ.get("VRPWEAVE_COLOR")
    if env == "1":
        return True
    if env == "0":
        return False
    return sys.stderr.isatty()


def _diag(prefix: str, message: str, color_code: str) -> None:
    if _use_color():
        print(f"\x1b[{color_code}m{prefix}:\x1b[0m {message}", file=sys.stderr)
    else:
        print(f"{prefix}: {message}", file=sys.stderr)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_inputs(args):
    """Parse the model and aspect files, reporting any parse warnings."""

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = load_model(_read(args.model), filename=args.model)
        aspects = []
        for path in args.aspects:
            aspects.extend(parse_aspect_file(_read(path), filename=path))
    _print_warnings(caught)
    return model, tuple(aspects)


def _print_warnings(caught) -> None:
    for item in caught:
        _diag("warning", str(item.message), "33")


def cmd_validate(args) -> int:
    model, aspects = _load_inputs(args)
    link(model, aspects)
    elements = sum(1 for _ in iter_elements(model))
    explicit = len(model.explicit_varpoints)
    print(f"ok: model '{model.name}' with {elements} elements, "
          f"{explicit} explicit varpoints, {len(aspects)} aspects")
    return 0


def cmd_list_vps(args) -> int:
    model, _ = _load_inputs(args)
    sep = "\t" if args.format == "structured" else " "
    for vp in varpoint_population(model):
        if args.explicit and vp.is_implicit:
            continue
        if args.implicit and not vp.is_implicit:
            continue
        flavor = "implicit" if vp.is_implicit else "explicit"
        print(sep.join((vp.name, vp.kind, vp.owner or "<root>", vp.policy, flavor)))
    return 0


def cmd_tailor(args) -> int:
    model, aspects = _load_inputs(args)
    bindings = []
    for raw in args.bind:
        vp_name, eq, variant = raw.partition("=")
        if not eq or not vp_name or not variant:
            raise UsageError(f"--bind expects <varpoint>=<variant>, got '{raw}'")
        bindings.append((vp_name, variant))
    request = WeaveRequest(model=model, aspects=aspects,
                           activations=tuple(args.activate),
                           manual_bindings=tuple(bindings))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        tailored = weave(request)
    _print_warnings(caught)
    Path(args.out).write_text(serialize_model(tailored.result), encoding="utf-8")
    if args.format == "structured":
        for record in tailored.ledger:
            print(f"occupy\t{record.varpoint}\t{record.variant}\t{record.origin}")
        for edge in tailored.realized_edges:
            print(f"realize\t{edge.source}\t{edge.kind}\t{edge.target}")
        print(tailored.report.render_structured())
    else:
        print("ledger:")
        for record in tailored.ledger:
            print(f'  {record.varpoint} <- "{record.variant}" [{record.origin}]')
        if tailored.realized_edges:
            print("realized edges:")
            for edge in tailored.realized_edges:
                print(f'  {edge.source} {edge.kind} "{edge.target}"')
        print("effort:")
        for line in tailored.report.render_text().splitlines():
            print(f"  {line}")
    return 0


def cmd_diff(args) -> int:
    base = load_model(_read(args.base), filename=args.base)
    other = load_model(_read(args.other), filename=args.other)
    sep = "\t" if args.format == "structured" else " "
    for change in diff_models(base, other):
        if args.format == "structured":
            print(sep.join((change.op, change.category, change.detail)))
        else:
            print(str(change))
    return 0


def cmd_report(args) -> int:
    model, aspects = _load_inputs(args)
    link(model, aspects)
    report = effort_report(model, aspects)
    if args.format == "structured":
        print(report.render_structured())
    else:
        print(report.render_text())
    return 0


class UsageError(Exception):
    pass


def _add_model_args(sub, aspects: bool = True) -> None:
    sub.add_argument("--model", required=True, help="model document (.vrp)")
    if aspects:
        sub.add_argument("--aspects", nargs="+", action="extend", default=[],
                         metavar="PATH", help="aspect files (.pasp), repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vrpweave",
        description="Weave crosscutting and on-point variations over a "
                    "variant-rich process model.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="parse and statically check inputs")
    _add_model_args(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_list = sub.add_parser("list-vps", help="list the variation-point population")
    _add_model_args(p_list, aspects=False)
    p_list.add_argument("--aspects", nargs="+", action="extend", default=[],
                        metavar="PATH", help=argparse.SUPPRESS)
    flavor = p_list.add_mutually_exclusive_group()
    flavor.add_argument("--implicit", action="store_true", help="only derived VPs")
    flavor.add_argument("--explicit", action="store_true", help="only authored VPs")
    p_list.add_argument("--format", choices=("text", "structured"), default="text")
    p_list.set_defaults(func=cmd_list_vps)

    p_tailor = sub.add_parser("tailor", help="weave activations/bindings into a model")
    _add_model_args(p_tailor)
    p_tailor.add_argument("--activate", nargs="+", action="extend", default=[],
                          metavar="ASPECT", help="aspect names to activate, in order")
    p_tailor.add_argument("--bind", nargs="+", action="extend", default=[],
                          metavar="VP=VARIANT", help="manual on-point bindings")
    p_tailor.add_argument("--out", required=True, help="path for the tailored model")
    p_tailor.add_argument("--format", choices=("text", "structured"), default="text")
    p_tailor.set_defaults(func=cmd_tailor)

    p_diff = sub.add_parser("diff", help="structural diff between two models")
    p_diff.add_argument("base", help="base model document")
    p_diff.add_argument("other", help="model document to compare against the base")
    p_diff.add_argument("--format", choices=("text", "structured"), default="text")
    p_diff.set_defaults(func=cmd_diff)

    p_report = sub.add_parser("report", help="tailoring-effort report")
    _add_model_args(p_report)
    p_report.add_argument("--format", choices=("text", "structured"), default="text")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VrpError as exc:
        _diag("error", str(exc), "31")
        return 1
    except UsageError as exc:
        _diag("usage error", str(exc), "31")
        return 2
    except OSError as exc:
        _diag("io error", str(exc), "31")
        return 2


if __name__ == "__main__":
    sys.exit(main())
