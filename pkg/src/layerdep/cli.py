"""Command-line driver.

Exit codes: 0 success, 1 invalid model, 2 analysis infeasible, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .errors import LayerdepError
from .model import load_model, validate_model
from .pipeline import ModelValidationError, casestudy_path, run_pipeline
from .reliability import deviation_curve
from .render import render


def _common(fmt_choices: tuple[str, ...], default_fmt: str = "text", model: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    if model:
        p.add_argument("--model", required=True,
                       help=f"model document (JSON); the case study ships at {casestudy_path()}")
    p.add_argument("--format", choices=fmt_choices, default=default_fmt)
    p.add_argument("--ascii", action="store_true", help="use & and | instead of ∧ and ∨")
    p.add_argument("--quiet", action="store_true", help="omit the header line in text output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layerdep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[_common(("text", "json"))], help="check model consistency")
    sub.add_parser("flows", parents=[_common(("text", "json", "csv"))], help="requirement coverage flows")
    p = sub.add_parser("analyze", parents=[_common(("text", "json", "csv"))],
                       help="success-tree expressions and characteristic sets")
    p.add_argument("--section", default=None,
                   choices=("expressions", "sets", "all"), help="default: expressions and sets")

    p = sub.add_parser("reliability", parents=[_common(("text", "json", "csv"))], help="reliability of a layer")
    p.add_argument("--layer", type=int, default=1)
    p.add_argument("--mode", choices=("exact", "closed", "limited"), default="exact")
    p.add_argument("--k", type=int, choices=(1, 2), default=1)
    p.add_argument("--table", action="store_true", help="emit the truth table")

    p = sub.add_parser("plan", parents=[_common(("text", "json"))], help="fault-injection test plan")
    p.add_argument("--tolerance", type=int, choices=(1, 2), default=1)

    p = sub.add_parser("curve", parents=[_common(("csv", "json", "text"), "csv", model=False)],
                       help="deviation of single-failure coverage against component reliability")
    p.add_argument("--l", type=int, required=True, help="number of groups")
    p.add_argument("--r", type=int, required=True, help="members per group")
    p.add_argument("--from", dest="p_from", type=float, default=0.6)
    p.add_argument("--to", dest="p_to", type=float, default=0.99)
    p.add_argument("--step", type=float, default=0.01)
    return parser


def _curve(args) -> str:
    points = deviation_curve(args.l, args.r, args.p_from, args.p_to, args.step)
    if args.format == "json":
        return json.dumps([{"p": p, "deviation_percent": d} for p, d in points], indent=2)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "deviation_percent"])
        w.writerows([p, repr(d)] for p, d in points)
        return buf.getvalue().rstrip("\n")
    lines = [] if args.quiet else [f"# deviation curve, l={args.l}, r={args.r}"]
    lines += [f"{p:.4f}  {d:.6f} %" for p, d in points]
    return "\n".join(lines)


def _validate(args) -> tuple[str, int]:
    violations = validate_model(load_model(args.model))
    if args.format == "json":
        return json.dumps([{"kind": v.kind, "message": v.message, "layer": v.layer, "component": v.component}
                           for v in violations], indent=2), 1 if violations else 0
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        return "", 1
    return "model is valid", 0


def _reliability(args, bundle) -> str:
    if args.format != "text":
        section = "truth-table" if args.table and args.format == "csv" else "reliability"
        return render(bundle, section, args.format, layer=args.layer)
    r = bundle.reliability[args.layer]
    if args.mode == "exact":
        head = f"exact reliability, layer {args.layer}: {r.exact:.10f}" if r.exact is not None \
            else f"exact reliability, layer {args.layer}: unavailable ({r.m} variables)"
    elif args.mode == "closed":
        head = f"closed-form reliability, layer {args.layer}: " + (
            f"{r.closed_form:.10f}" if r.closed_form is not None else "inapplicable")
    else:
        head = f"limited-coverage reliability (k={args.k}), layer {args.layer}: {r.limited[args.k]:.10f}"
        if args.k in r.deviation:
            head += f"\ndeviation: {r.deviation[args.k]:.6f} %"
    parts = [head, render(bundle, "reliability", "text", layer=args.layer, header=not args.quiet)]
    if args.table:
        parts.append(render(bundle, "truth-table", "text", layer=args.layer, header=False))
    return "\n\n".join(parts)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "curve":
            out = _curve(args)
        elif args.command == "validate":
            out, code = _validate(args)
            if out:
                print(out)
            return code
        else:
            bundle = run_pipeline(args.model, tolerance=getattr(args, "tolerance", 1))
            header = not args.quiet
            if args.command == "flows":
                out = render(bundle, "flows", args.format, args.ascii, header=header)
            elif args.command == "analyze":
                if args.section:
                    out = render(bundle, args.section, args.format, args.ascii, header=header)
                elif args.format == "text":
                    out = "\n\n".join([render(bundle, "expressions", "text", args.ascii, header=header),
                                       render(bundle, "sets", "text", args.ascii, header=False)])
                else:
                    out = render(bundle, "sets", args.format, args.ascii)
            elif args.command == "reliability":
                if args.layer not in bundle.reliability:
                    print(f"layer {args.layer} was not analyzed", file=sys.stderr)
                    return 2
                out = _reliability(args, bundle)
            else:
                out = render(bundle, "plan", args.format, args.ascii, header=header)
    except ModelValidationError as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        return exc.exit_code
    except LayerdepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
