"""Command-line front end: every analysis as CSV or JSON.

Subcommands: matrix, distance, faro, simulate, empirical. Exit status is
0 on success, 2 for usage errors and 3 when a size cap is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from math import factorial

from .closed_form import coupling_bound_curve, riffle_distance_closed_form, riffle_k_probability
from .markov import Distribution, distance_curve_exact, evolve, matrix_power, transition_matrix, tv_distance
from .models import (
    FaroIn,
    FaroOut,
    GsrRiffle,
    Mongean,
    deterministic_period,
    faro_trace,
    parse_model,
)
from .montecarlo import MC_MAX_N, SimulationConfig, run_trials, simulate_hands
from .permcore import DeckSizeError, check_cap, format_arrangement, rising_sequences, unrank

EXIT_USAGE = 2
EXIT_CAP = 3

_COMMON = {
    "format": "csv",
    "out": None,
    "rational": False,
    "precision": 12,
    "seed": 0,
    "max_n_override": None,
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def render_decimal(x, precision: int) -> str:
    """``x`` to ``precision`` significant digits."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = precision
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return format(d, f".{precision}g")


def _number(x, args) -> str:
    if args.rational:
        return str(Fraction(x))
    return render_decimal(x, args.precision)


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS, help="write here instead of stdout")
    g.add_argument("--rational", action="store_true", default=argparse.SUPPRESS, help="exact rational cells")
    g.add_argument("--precision", type=int, metavar="DIGITS", default=argparse.SUPPRESS)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="unsigned 64-bit seed")
    g.add_argument("--max-n-override", type=int, metavar="N", default=argparse.SUPPRESS)
    return p


def _model_flags(p: argparse.ArgumentParser, default: str | None = None) -> None:
    p.add_argument("--model", default=default, required=default is None,
                   help="top, gsr, physical, naive, faro-out, faro-in, mongean")
    p.add_argument("--a", type=int, default=None, help="GSR packet count")
    p.add_argument("--cut-spread", type=int, default=None)
    p.add_argument("--max-packet", type=int, default=None)
    p.add_argument("--n", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="deckmix", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("matrix", parents=[common], help="k-hand transition matrix")
    _model_flags(p)
    p.add_argument("--power", type=int, default=1)

    p = sub.add_parser("distance", parents=[common], help="distance to uniform after k hands")
    _model_flags(p, default="gsr")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--method", choices=("exact", "closed-form", "bound"), default="exact")

    p = sub.add_parser("faro", parents=[common], help="perfect-shuffle period and card traces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", choices=("out", "in", "mongean"), default="out")
    p.add_argument("--trace", type=int, metavar="POSITION", default=None)
    p.add_argument("--hands", type=int, default=None, help="trace length (default: the period)")
    p.add_argument("--origin", type=int, choices=(0, 1), default=0,
                   help="0: position = cards above (default); 1: 1-based positions")
    p.add_argument("--period", action="store_true")

    p = sub.add_parser("simulate", parents=[common], help="one deck through successive hands")
    _model_flags(p)
    p.add_argument("--hands", type=int, default=1)

    p = sub.add_parser("empirical", parents=[common], help="Monte-Carlo law of the deck after k hands")
    _model_flags(p)
    p.add_argument("--hands", type=int, default=1)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--compare", choices=("exact", "gsr", "none"), default="none")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _model(args):
    return parse_model(args.model, a=args.a, cut_spread=args.cut_spread, max_packet=args.max_packet)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_matrix(args) -> str:
    check_cap(args.n, args.max_n_override)
    if args.power < 0:
        raise UsageError("--power must be >= 0")
    m = matrix_power(transition_matrix(_model(args), args.n, args.max_n_override), args.power)
    labels = [format_arrangement(unrank(args.n, r)) for r in range(m.size)]
    cells = [[_number(x, args) for x in row] for row in m.rows()]
    if args.format == "json":
        return json.dumps({"n": args.n, "model": args.model, "power": args.power,
                           "labels": labels, "entries": cells}, indent=1) + "\n"
    return _csv([[""] + labels] + [[lab] + row for lab, row in zip(labels, cells)])


def _curve(args):
    if args.kmax < 0:
        raise UsageError("--kmax must be >= 0")
    model = _model(args)
    if args.method == "exact":
        return distance_curve_exact(model, args.n, args.kmax, args.max_n_override)
    if model != GsrRiffle(2):
        raise UsageError(f"--method {args.method} is only defined for the GSR riffle with a=2")
    if args.method == "closed-form":
        return riffle_distance_closed_form(args.n, args.kmax)
    return coupling_bound_curve(args.n, args.kmax)


def cmd_distance(args) -> str:
    curve = _curve(args)
    rows = [(k, str(Fraction(d)), render_decimal(d, args.precision)) for k, d in curve.points]
    if args.format == "json":
        return json.dumps({"n": curve.n, "model": curve.model, "method": curve.method,
                           "points": [{"k": k, "d_rational": r, "d_decimal": d} for k, r, d in rows]},
                          indent=1) + "\n"
    return _csv([("k", "d_rational", "d_decimal")] + rows)


def cmd_faro(args) -> str:
    variant = {"out": FaroOut(), "in": FaroIn(), "mongean": Mongean()}[args.variant]
    if args.trace is None and not args.period:
        raise UsageError("faro needs --trace POSITION and/or --period")
    period = deterministic_period(variant, args.n)
    result = {"n": args.n, "variant": args.variant}
    if args.period:
        result["period"] = period
    if args.trace is not None:
        hands = period if args.hands is None else args.hands
        result["origin"] = args.origin
        result["trace"] = faro_trace(args.n, args.trace, hands, variant, origin=args.origin)
    if args.format == "json":
        return json.dumps(result) + "\n"
    parts = []
    if "trace" in result:
        parts.append(_csv([("hand", "position")] + list(enumerate(result["trace"]))))
    if "period" in result:
        parts.append(_csv([("period",), (period,)]))
    return "\n".join(parts)


def cmd_simulate(args) -> str:
    if args.hands < 0:
        raise UsageError("--hands must be >= 0")
    decks = simulate_hands(_model(args), args.n, args.hands, args.seed)
    rows = [(h, format_arrangement(d)) for h, d in enumerate(decks, start=1)]
    if args.format == "json":
        return json.dumps({"n": args.n, "model": args.model, "seed": args.seed,
                           "hands": [{"hand": h, "arrangement": a} for h, a in rows]}) + "\n"
    return _csv([("hand", "arrangement")] + rows)


def _reference(args, model):
    if args.compare == "exact":
        check_cap(args.n, args.max_n_override)
        m = transition_matrix(model, args.n, args.max_n_override)
        return evolve(Distribution.point_mass(args.n), m, args.hands)
    # k GSR riffles = one 2^k-shuffle; closed form over all arrangements
    if args.n > MC_MAX_N:
        raise DeckSizeError(f"n={args.n} too large for the gsr reference (n <= {MC_MAX_N})")
    entries = tuple(
        riffle_k_probability(args.n, args.hands, rising_sequences(unrank(args.n, r)))
        for r in range(factorial(args.n))
    )
    return Distribution(args.n, entries)


def cmd_empirical(args) -> str:
    model = _model(args)
    cfg = SimulationConfig(model, args.n, args.hands, args.trials, args.seed)
    emp = run_trials(cfg, workers=args.workers)
    counts = {format_arrangement(unrank(args.n, r)): c for r, c in sorted(emp.counts.items())}
    tv = None
    if args.compare != "none":
        ref = _reference(args, model)
        exact_tv = tv_distance(emp.as_distribution(), ref)
        tv = {"reference": args.compare, "value": _number(exact_tv, args)}
    if args.format == "json":
        return json.dumps({"n": args.n, "trials": args.trials, "seed": args.seed,
                           "counts": counts, "tv": tv}, indent=1) + "\n"
    text = _csv([("arrangement", "count")] + list(counts.items()))
    if tv is not None:
        text += "\n" + _csv([("reference", "tv"), (tv["reference"], tv["value"])])
    return text


COMMANDS = {
    "matrix": cmd_matrix,
    "distance": cmd_distance,
    "faro": cmd_faro,
    "simulate": cmd_simulate,
    "empirical": cmd_empirical,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _COMMON.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        if not 0 <= args.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if args.precision < 1:
            raise UsageError("--precision must be >= 1")
        text = COMMANDS[args.command](args)
    except DeckSizeError as exc:
        print(f"deckmix {args.command}: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, TypeError) as exc:
        print(f"deckmix {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
