"""Command-line interface.

Exit codes: 0 success, 1 I/O or parse error, 2 validation failure,
3 cost mismatch between relevant-marking methods.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench
from .alignment import AlignConfig, align, validate_alignment
from .auxiliary import Method, auxiliary_to_dot, baseline_markings, build_auxiliary_net
from .errors import FragalignError
from .nets import AcceptingPetriNet, validate_workflow_net
from .pnml import read_pnml, to_dot
from .traces import TraceKind, as_trace, load_log
from .tree import read_ptml, read_tree_text
from .tree_net import TreeNetBinding, to_wfnet

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3

log = logging.getLogger("fragalign")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def load_model(path, fmt=None):
    """Load a Petri net (``pnml``) or a process tree (``ptree`` text or ``ptml``)."""
    path = Path(path)
    fmt = fmt or {".pnml": "pnml", ".ptml": "ptml"}.get(path.suffix.lower(), "ptree")
    if fmt == "pnml":
        return read_pnml(path)
    tree = read_ptml(path) if fmt == "ptml" else read_tree_text(path)
    return to_wfnet(tree, name=path.stem)


def _net(model) -> AcceptingPetriNet:
    return model.net if isinstance(model, TreeNetBinding) else model


def _read_trace(args):
    if args.trace_file:
        data = json.loads(Path(args.trace_file).read_text(encoding="utf-8"))
        return data["activities"] if isinstance(data, dict) else data
    if args.trace is None:
        raise ValueError("either --trace or --trace-file is required")
    return [a.strip() for a in args.trace.split(",") if a.strip()]


def _method(args, model):
    if args.method != "auto":
        return Method(args.method)
    return Method.ADVANCED if isinstance(model, TreeNetBinding) else Method.FILTERED


def cmd_align(args) -> int:
    model = load_model(args.model, args.format)
    report = validate_workflow_net(_net(model))
    if not report.ok:
        print(f"model is not a sound workflow net:\n{report}", file=sys.stderr)
        return EXIT_INVALID
    trace = _read_trace(args)
    alignment = align(model, trace, args.kind, _method(args, model), AlignConfig())
    check = validate_alignment(alignment, None, trace)
    if args.output == "json":
        print(json.dumps(alignment.to_json(), indent=2))
    else:
        method = f", method {alignment.method}" if alignment.method else ""
        print(f"{alignment.kind} alignment of <{','.join(trace)}>{method}: cost {alignment.cost}")
        print(alignment.pretty())
        print(f"start marking {alignment.start_marking!r}, end marking {alignment.end_marking!r}")
    if not check.ok:
        print(f"alignment failed validation:\n{check}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_bench(args) -> int:
    model = load_model(args.model, args.format)
    log_ = load_log(args.log)
    kind = TraceKind(args.kind)
    if kind not in (TraceKind.INFIX, TraceKind.POSTFIX):
        raise ValueError("benchmarks run infix or postfix fragments")
    methods = ([Method(m) for m in args.methods.split(",")] if args.methods
               else bench.applicable_methods(model))
    fragments = bench.sample_fragments(log_, kind, args.n, args.min_len, args.max_len, args.seed)
    result = bench.run_benchmark(model, fragments, methods, kind, jobs=args.jobs,
                                 model_name=Path(args.model).stem)
    if args.out:
        bench.write_csv(result.rows, args.out)
    print(f"{len(fragments)} {kind} fragments, seed {args.seed}, lengths {args.min_len}..{args.max_len}")
    print(bench.format_summary(bench.summarize(result.rows)))
    if result.mismatches:
        for (model_name, instance), costs in result.mismatches:
            print(f"cost mismatch on instance {instance}: {costs}", file=sys.stderr)
        return EXIT_MISMATCH
    print("cost mismatches: 0")
    return EXIT_OK


def cmd_validate(args) -> int:
    model = load_model(args.model, args.format)
    report = validate_workflow_net(_net(model))
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_dot(args) -> int:
    model = load_model(args.model, args.format)
    net = _net(model)
    if args.trace is None and args.trace_file is None:
        print(to_dot(net), end="")
        return EXIT_OK
    trace = as_trace(_read_trace(args))
    from .alignment import relevant_markings

    kept, _, kept_net = relevant_markings(model, trace, _method(args, model), TraceKind(args.kind))
    if kept_net is not net:
        print(auxiliary_to_dot(build_auxiliary_net(kept_net, kept)), end="")
    else:
        full = build_auxiliary_net(net, baseline_markings(net))
        print(auxiliary_to_dot(full, kept.markings), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fragalign", description="Optimal complete, infix and postfix alignments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_args(p):
        p.add_argument("--model", required=True, help="model file (.pnml, .ptree text or .ptml)")
        p.add_argument("--format", choices=["pnml", "ptree", "ptml"], help="override format detection")

    def trace_args(p):
        p.add_argument("--trace", help="comma-separated activity labels, e.g. 'd,g'")
        p.add_argument("--trace-file", help="JSON list of labels or object with an 'activities' list")

    methods = ["auto"] + [m.value for m in Method]
    p = sub.add_parser("align", help="align one trace or fragment")
    model_args(p)
    trace_args(p)
    p.add_argument("--kind", choices=[k.value for k in TraceKind], default="complete")
    p.add_argument("--method", choices=methods, default="auto",
                   help="relevant-marking method (auto: advanced for trees, filtered for nets)")
    p.add_argument("--output", choices=["json", "pretty"], default="pretty")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("bench", help="compare methods on sampled fragments")
    model_args(p)
    p.add_argument("--log", required=True, help="event log (.xes, .csv, .jsonl)")
    p.add_argument("-n", type=int, default=200, help="number of fragments")
    p.add_argument("--min-len", type=int, default=1)
    p.add_argument("--max-len", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", help="comma-separated subset of baseline,filtered,advanced")
    p.add_argument("--kind", choices=["infix", "postfix"], default="infix")
    p.add_argument("--out", help="per-instance CSV output path")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="check that a model is a sound workflow net")
    model_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dot", help="Graphviz export of a model or its auxiliary net")
    model_args(p)
    trace_args(p)
    p.add_argument("--kind", choices=["infix", "postfix"], default="infix")
    p.add_argument("--method", choices=methods, default="auto")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FragalignError, OSError, ValueError, KeyError) as exc:
        print(f"fragalign: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
