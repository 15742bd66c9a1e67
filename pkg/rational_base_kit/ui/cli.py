import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from rational_base_kit.core.automata import DEFAULT_FRONTIER_CAP, AutomatonKind, encode
from rational_base_kit.core.base import Base, parse_base
from rational_base_kit.core.checks import SUITES, CheckParams, overall_status, run_suites
from rational_base_kit.core.errors import DepthLimitError, RatbaseError
from rational_base_kit.core.extremal import (
    ExtremalKind,
    bottom_prefix,
    extremal_prefix,
    node_record,
    span_word_prefix,
    witness_min_node_for_bottom_prefix,
    xi_direct,
)
from rational_base_kit.core.spans import (
    DEFAULT_ENCLOSURE_DEPTH,
    box_counting_estimate,
    box_counting_fit,
    hausdorff_upper_bounds,
    refine_intervals,
    refinement_table,
)
from rational_base_kit.core.transducer import psi_table, transduce, transduce_inverse
from rational_base_kit.core.words import (
    EPSILON,
    check_digits,
    eval_value,
    fraction_to_decimal,
    fraction_to_str,
    word_from_str,
    word_to_str,
)
from rational_base_kit.ui.handlers import Report, get_handler
from rational_base_kit.ui.render import Layout, automaton_dot, fractal_png, fractal_svg, transducer_dot

LOG = logging.getLogger(__name__)

ENV_FRONTIER_CAP = "RATBASE_FRONTIER_CAP"
FORMATS = ["text", "json", "csv", "dot", "svg", "png"]
RENDER_FORMATS = {'tree': ["dot"], 'transducer': ["dot"], 'fractal': ["svg", "png"]}

error_console = Console(stderr=True)


def frontier_cap_from_env(environ):
    value = environ.get(ENV_FRONTIER_CAP)
    if value is None:
        return DEFAULT_FRONTIER_CAP
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{ENV_FRONTIER_CAP} must be an integer, got {value!r}") from None


@dataclass
class Config:
    """
    Settings shared by all commands.

    Raises:
        ValueError: If a limit is not positive or the format is unknown
    """
    base: Base
    prefix_len: int = 16
    depth: int = 6
    render_depth_cap: int = 12
    frontier_cap: int = DEFAULT_FRONTIER_CAP
    output_format: str = "text"
    precision: int = 12
    enclosure_depth: int = DEFAULT_ENCLOSURE_DEPTH
    workers: int = 4
    out: Optional[Path] = None
    layout: Layout = field(default_factory=Layout)

    def __post_init__(self):
        for name in ('prefix_len', 'depth', 'enclosure_depth'):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must not be negative, got {getattr(self, name)}")
        for name in ('render_depth_cap', 'frontier_cap', 'precision', 'workers'):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.output_format not in FORMATS:
            raise ValueError(f"Invalid format: {self.output_format}. Valid formats: {', '.join(FORMATS)}")

    @classmethod
    def from_args(cls, args, environ=None):
        environ = os.environ if environ is None else environ
        frontier_cap = args.frontier_cap if args.frontier_cap is not None else frontier_cap_from_env(environ)
        output_format = args.output_format
        if output_format is None:
            output_format = RENDER_FORMATS[args.kind][0] if args.command == "render" else "text"
        return cls(
            base=parse_base(args.base),
            prefix_len=args.prefix_len,
            depth=args.depth,
            render_depth_cap=args.render_depth_cap,
            frontier_cap=frontier_cap,
            output_format=output_format,
            precision=args.precision,
            enclosure_depth=args.enclosure_depth,
            workers=getattr(args, 'workers', 4),
            out=args.out,
            layout=Layout(Fraction(args.x_step), Fraction(args.y_scale), Fraction(args.margin)),
        )


def parse_word(base, text, alphabet=None, name="A_p"):
    word = word_from_str(text)
    return check_digits(word, alphabet if alphabet is not None else base.digits, name)


def value_to_str(value):
    return str(value.numerator) if value.denominator == 1 else fraction_to_str(value)


def cmd_convert(config, args):
    """Representation of an integer, or value of a word."""
    base = config.base
    if args.integer is not None:
        word = encode(base, args.integer)
        return Report(
            title=f"<{args.integer}> in base {base}",
            summary={'base': str(base), 'n': str(args.integer), 'word': word},
            text=word_to_str(word, EPSILON),
        )
    word = parse_word(base, args.word)
    value = eval_value(base, word)
    summary = {'base': str(base), 'word': word, 'value': value_to_str(value)}
    if value.denominator == 1:
        summary['canonical'] = str(encode(base, int(value)) == word).lower()
    return Report(title=f"value of {word_to_str(word, EPSILON)}", summary=summary, text=value_to_str(value))


def cmd_word(config, args):
    """Bottom, top or span word prefix of a node."""
    base, n, k = config.base, args.node, config.prefix_len
    if args.kind == "all":
        record = node_record(base, n, k)
        summary = {'base': str(base), **record}
        summary.update({key: tuple(record[key]) for key in ('bottom_prefix', 'top_prefix', 'span_word_prefix')})
        return Report(title=f"extremal words of {n}", summary=summary)
    if args.kind == "span":
        word = span_word_prefix(base, n, k)
    else:
        word = extremal_prefix(base, n, ExtremalKind(args.kind), k)
    return Report(
        title=f"{args.kind} word of {n}",
        summary={'base': str(base), 'n': str(n), 'kind': args.kind, 'depth': str(k), 'prefix': word},
        text=word_to_str(word, EPSILON),
    )


def _verify_node(base, i, n, k):
    return transduce(base, i, bottom_prefix(base, n, k)) == xi_direct(base, n + i, k)


def cmd_transduce(config, args):
    """Run D_(z,i) on a prefix, optionally checking the result."""
    base, i, k = config.base, args.start, config.prefix_len
    if args.upto is not None:
        failures = [n for n in range(args.upto + 1) if not _verify_node(base, i, n, k)]
        return Report(
            title=f"D_(z,{i}) against the successor function, n <= {args.upto}",
            summary={
                'base': str(base), 'start': str(i), 'depth': str(k),
                'checked': str(args.upto + 1), 'failures': [str(n) for n in failures],
            },
            failed=bool(failures),
        )
    if args.node is not None:
        word = bottom_prefix(base, args.node, k)
    else:
        word = parse_word(base, args.input, base.lower_digits, "B_q")
    if args.inverse:
        output = transduce_inverse(base, i, word)
    else:
        output = transduce(base, i, word)
    summary = {'base': str(base), 'start': str(i), 'input': word, 'output': output}
    failed = False
    if args.verify:
        if args.inverse:
            verified = transduce(base, i, output) == word
        else:
            n = args.node if args.node is not None else witness_min_node_for_bottom_prefix(base, word)
            verified = output == xi_direct(base, n + i, len(word))
        summary['verified'] = str(verified).lower()
        failed = not verified
    return Report(title=f"D_(z,{i})", summary=summary, text=word_to_str(output, EPSILON), failed=failed)


def cmd_psi(config, args):
    """The substitution ψ as a table."""
    table = psi_table(config.base)
    width = max(len(str(d)) for d, _ in table)
    lines = [
        f"ψ({str(d).rjust(width)}) = {{{', '.join(f'({x},{y})' for x, y in pairs)}}}"
        for d, pairs in table
    ]
    return Report(
        title=f"ψ in base {config.base}",
        summary={'base': str(config.base)},
        rows=[{'d': str(d), 'pairs': [[x, y] for x, y in pairs]} for d, pairs in table],
        text="\n".join(lines),
    )


def cmd_refine(config, args):
    """Outer measure of the successive refine steps, or their intervals."""
    base, depth = config.base, config.depth
    if args.intervals:
        rows = []
        for j in range(depth + 1):
            for record in refine_intervals(base, j, config.enclosure_depth, config.frontier_cap):
                hull = record.outer
                rows.append({
                    'j': str(j),
                    'word': record.word,
                    'lo': fraction_to_decimal(hull.lo, config.precision),
                    'hi': fraction_to_decimal(hull.hi, config.precision),
                    'lo_exact': fraction_to_str(hull.lo),
                    'hi_exact': fraction_to_str(hull.hi),
                })
        return Report(title=f"refine intervals, base {base}", summary={'base': str(base)}, rows=rows)
    table = refinement_table(base, depth, config.enclosure_depth, args.contraction, config.frontier_cap)
    rows = []
    for row in table:
        record = row.to_dict()
        record['outer_measure_decimal'] = fraction_to_decimal(row.measure, config.precision)
        if args.contraction:
            record['decays'] = None
            if row.decay_bound is not None:
                record['decays'] = str(row.depth == 0 or row.measure < row.decay_bound).lower()
        else:
            record.pop('decay_bound')
        rows.append(record)
    failed = any(r.get('decays') == "false" for r in rows) or any(
        b.measure > a.measure for a, b in zip(table, table[1:]) if base.is_large
    )
    return Report(title=f"refine, base {base}", summary={'base': str(base)}, rows=rows, failed=failed)


def cmd_dim(config, args):
    """Dimension bounds and the box-counting sequence."""
    base = config.base
    bounds = hausdorff_upper_bounds(base)
    rows = box_counting_estimate(base, config.depth, config.enclosure_depth, config.frontier_cap)
    fit = box_counting_fit(rows)
    summary = {'base': str(base)}
    for bound in bounds.all():
        summary[f"{bound.name} ({bound.provenance})"] = fraction_to_decimal(bound.value, config.precision)
    summary['fitted slope'] = f"{fit:.6f}" if fit is not None else None
    return Report(
        title=f"dimension of the span set closure, base {base}",
        summary=summary,
        rows=[
            {
                'j': str(row.depth),
                'count': str(row.count),
                'radius': fraction_to_decimal(row.radius, config.precision),
                'ratio': fraction_to_decimal(row.ratio, config.precision) if row.ratio is not None else None,
            }
            for row in rows
        ],
    )


def cmd_check(config, args):
    """Run invariant suites and report their health."""
    names = list(SUITES) if args.all or not args.suite else args.suite
    if args.quick:
        params = CheckParams.quick(frontier_cap=config.frontier_cap)
    else:
        params = CheckParams(enclosure_depth=config.enclosure_depth, frontier_cap=config.frontier_cap)
    results = run_suites(config.base, names, params, workers=config.workers)
    overall = overall_status(results)
    return Report(
        title=f"invariant suites, base {config.base}",
        summary={'base': str(config.base), 'overall': overall},
        rows=[
            {
                'suite': result.name,
                'status': result.status,
                'checked': str(result.checked),
                'seconds': f"{result.elapsed:.2f}",
                'issues': "; ".join(result.issues) or result.note,
            }
            for result in results
        ],
        failed=overall == 'red',
    )


def cmd_render(config, args):
    """DOT, SVG or PNG rendering of a depth-limited truncation."""
    base, depth = config.base, config.depth
    if depth > config.render_depth_cap:
        raise DepthLimitError(f"Depth {depth} exceeds the render cap {config.render_depth_cap}")
    if config.output_format not in RENDER_FORMATS[args.kind]:
        raise ValueError(
            f"Invalid format for {args.kind}: {config.output_format}. "
            f"Valid formats: {', '.join(RENDER_FORMATS[args.kind])}"
        )
    if args.kind == "tree":
        kind = AutomatonKind(args.automaton)
        return Report(raw=automaton_dot(base, depth, kind, args.overlay, config.frontier_cap))
    if args.kind == "transducer":
        return Report(raw=transducer_dot(base, depth, config.frontier_cap))
    if config.output_format == "png":
        if config.out is None:
            raise ValueError("PNG output needs --out")
        fractal_png(base, depth, config.out, config.layout, args.overlay, config.frontier_cap)
        return Report(text=f"wrote {config.out}", summary={'out': str(config.out)})
    return Report(raw=fractal_svg(base, depth, config.layout, config.precision, args.overlay, config.frontier_cap))


COMMANDS = {
    'convert': cmd_convert,
    'word': cmd_word,
    'transduce': cmd_transduce,
    'psi': cmd_psi,
    'refine': cmd_refine,
    'dim': cmd_dim,
    'check': cmd_check,
    'render': cmd_render,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", required=True, help="rational base p/q")
    common.add_argument("--format", dest="output_format", choices=FORMATS)
    common.add_argument("--out", type=Path, help="write output to a file")
    common.add_argument("--prefix-len", type=int, default=16, help="length of word prefixes")
    common.add_argument("--depth", type=int, default=6, help="tree or refinement depth")
    common.add_argument("--render-depth-cap", type=int, default=12)
    common.add_argument("--frontier-cap", type=int, help=f"breadth-first frontier limit (env {ENV_FRONTIER_CAP})")
    common.add_argument("--precision", type=int, default=12, help="significant digits of decimal renderings")
    common.add_argument("--enclosure-depth", type=int, default=DEFAULT_ENCLOSURE_DEPTH)
    common.add_argument("--x-step", default="60")
    common.add_argument("--y-scale", default="400")
    common.add_argument("--margin", default="20")
    common.add_argument("--verify", action="store_true", help="cross-check results against a direct computation")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="rbk", description="Rational base numeration toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    convert = commands.add_parser("convert", parents=[common], help="integer to word or word to value")
    target = convert.add_mutually_exclusive_group(required=True)
    target.add_argument("--int", dest="integer", type=int)
    target.add_argument("--word")

    word = commands.add_parser("word", parents=[common], help="bottom, top or span word of a node")
    word.add_argument("--node", type=int, required=True)
    word.add_argument("--kind", choices=["bottom", "top", "span", "all"], default="bottom")

    transducer = commands.add_parser("transduce", parents=[common], help="run the successor transducer")
    transducer.add_argument("--start", type=int, default=0)
    source = transducer.add_mutually_exclusive_group(required=True)
    source.add_argument("--input")
    source.add_argument("--node", type=int)
    source.add_argument("--upto", type=int, help="verify every node up to this value")
    transducer.add_argument("--inverse", action="store_true")

    commands.add_parser("psi", parents=[common], help="label substitution table")

    refine = commands.add_parser("refine", parents=[common], help="interval-deletion measure table")
    refine.add_argument("--contraction", action="store_true", help="compare against the contraction bound")
    refine.add_argument("--intervals", action="store_true", help="export the intervals instead")

    commands.add_parser("dim", parents=[common], help="dimension bounds and box counting")

    check = commands.add_parser("check", parents=[common], help="run invariant suites")
    check.add_argument("--all", action="store_true")
    check.add_argument("--suite", action="append", choices=list(SUITES))
    check.add_argument("--workers", type=int, default=4)
    check.add_argument("--quick", action="store_true", help="reduced sizes")

    render = commands.add_parser("render", parents=[common], help="DOT, SVG or PNG drawings")
    render.add_argument("--kind", choices=list(RENDER_FORMATS), default="fractal")
    render.add_argument("--automaton", choices=[kind.value for kind in AutomatonKind], default="tree")
    render.add_argument("--overlay", action="store_true", help="mark the edges deleted or added by S_z")
    return parser


def configure_logging(verbosity):
    level = logging.WARNING - 10 * min(verbosity, 2)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=error_console, show_path=False)],
        force=True,
    )


def emit(config, report):
    if report.raw is not None:
        if config.out is not None:
            config.out.write_text(report.raw)
        else:
            sys.stdout.write(report.raw)
        return
    handler = get_handler(config.output_format)
    if config.out is not None:
        with open(config.out, "w", encoding="utf-8") as stream:
            handler.write(report, stream)
    else:
        handler.write(report, sys.stdout)


def main(argv=None):
    """Parse arguments, run one command and return the exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = Config.from_args(args)
        report = COMMANDS[args.command](config, args)
        if config.output_format == "png" and args.command == "render":
            get_handler("text").write(report, sys.stdout)
        else:
            emit(config, report)
    except (RatbaseError, ValueError) as e:
        error_console.print(f"[bold red]Error:[/] {escape(str(e))}")
        return 2
    if report.failed:
        LOG.warning("%s found a violation", args.command)
        return 1
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
