"""Command-line entry point.

Subcommands::

    arboreal wreath count|enumerate|sample-ratio --index 2,3
    arboreal scan stable --spec const:x^2-2 --nmax 8 --pmax 100000
    arboreal frob hist|compare --spec fmf:3 --level 2 --pmax 10000
    arboreal generic sample|curve --index 2,2 --box 25

Sequence specs: ``const:<poly>``, ``fmf:<p>``, ``file:<path>`` (one
polynomial per line, comma-separated coefficients, constant term first),
``list:<poly>;<poly>;...`` and ``random:<index>:<N>:<seed>``.  Polynomials
are ``x^k`` expressions such as ``x^2-54*x+732`` or coefficient lists
``732,-54,1`` (constant term first).

Exit status: 0 success, 1 invalid configuration, 2 a size limit was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import density, generic, polyseq, wreath
from .wreath import SphericalIndex

DEFAULT_SEED = 20190611

EXIT_OK, EXIT_INVALID, EXIT_LIMIT = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _index(text: str) -> SphericalIndex:
    try:
        return SphericalIndex.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _spec(text: str):
    try:
        return polyseq.parse_spec(text)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad --spec {text!r}: {exc}") from exc


def _positive(name: str, value: int, minimum: int = 1) -> int:
    if value < minimum:
        raise ConfigError(f"--{name} must be >= {minimum}")
    return value


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    if fmt == "csv":
        return _csv(list(record), [list(record.values())])
    return "".join(f"{k}: {v}\n" for k, v in record.items())


def cmd_wreath(args) -> str:
    idx = _index(args.index)
    if args.action == "count":
        order, full = wreath.group_order(idx), wreath.full_cycle_count(idx)
        rec = {
            "index": str(idx),
            "order": order,
            "full_cycles": full,
            "ratio": str(Fraction(full, order)),
            "predicted": str(Fraction(1, idx.leaves)),
        }
        if order <= args.limit:
            elems = list(wreath.enumerate_group(idx, args.limit))
            rec["enumerated_order"] = len(elems)
            rec["enumerated_full_cycles"] = sum(map(wreath.is_full_cycle_orbit, elems))
        return _table(rec, args.format)
    if args.action == "enumerate":
        return "".join(wreath.element_to_json(a) + "\n" for a in wreath.enumerate_group(idx, args.limit))
    rng = np.random.default_rng(args.seed)
    samples = _positive("samples", args.samples)
    ratio, err = wreath.estimate_full_cycle_ratio(idx, samples, rng)
    rec = {
        "index": str(idx),
        "samples": samples,
        "seed": args.seed,
        "ratio": f"{ratio:.6f}",
        "stderr": f"{err:.6f}",
        "predicted": f"{1 / idx.leaves:.6f}",
    }
    return _table(rec, args.format)


def cmd_scan(args) -> str:
    spec = _spec(args.spec)
    report = density.stable_scan(
        spec, _positive("nmax", args.nmax), _positive("pmax", args.pmax, 3), _positive("threads", args.threads)
    )
    print(f"scanned {len(report.primes)} primes, {len(report.skipped)} skipped", file=sys.stderr)
    unverified = [r["n"] for r in report.rows() if r["irreducibility"] != "verified"]
    if unverified:
        print(f"irreducibility unverified at levels {unverified}", file=sys.stderr)
    return report.to_json() + "\n" if args.format == "json" else report.to_csv()


def _reference(idx: SphericalIndex, samples: int, seed: int) -> density.FrobHistogram:
    if wreath.group_order(idx) <= 50_000:
        return density.exact_type_distribution(idx)
    return density.wreath_type_distribution(idx, samples, np.random.default_rng(seed))


def cmd_frob(args) -> str:
    spec = _spec(args.spec)
    level = _positive("level", args.level)
    hist = density.frobenius_histogram(
        spec, level, _positive("pmax", args.pmax, 3), _positive("threads", args.threads)
    )
    if args.action == "hist":
        if args.format == "csv":
            freqs = hist.frequencies()
            return _csv(
                ["type", "count", "frequency"],
                [[" ".join(map(str, k)), v, f"{freqs[k]:.6f}"] for k, v in hist.counts.items()],
            )
        return hist.to_json() + "\n"
    idx = polyseq.spherical_index(spec, level)
    ref = _reference(idx, _positive("samples", args.samples), args.seed)
    score = density.surjectivity_score(hist, ref)
    rec = {
        "spec": str(spec),
        "level": level,
        "X": args.pmax,
        "tv_distance": f"{score.tv_distance:.6f}",
        "full_cycle_frequency": f"{score.full_cycle_frequency:.6f}",
        "reference_full_cycle_frequency": f"{score.reference_full_cycle_frequency:.6f}",
        "predicted": f"{score.predicted_full_cycle_frequency:.6f}",
    }
    return _table(rec, args.format)


def cmd_generic(args) -> str:
    idx = _index(args.index)
    if args.action == "curve":
        try:
            boxes = [int(t) for t in args.boxes.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --boxes {args.boxes!r}") from exc
        for b in boxes:
            _positive("boxes", b)
        try:
            curve = generic.exceptional_growth_curve(boxes, idx)
        except generic.UnsupportedIndexExactMode as exc:
            raise ConfigError(str(exc)) from exc
        return curve.to_csv()
    N = _positive("box", args.box)
    samples = None if args.samples == 0 else _positive("samples", args.samples)
    try:
        report = generic.sample_generic_density(
            idx, N, samples, np.random.default_rng(args.seed), mode=args.mode, prime_bound=args.pmax
        )
    except generic.UnsupportedIndexExactMode as exc:
        raise ConfigError(str(exc)) from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "json":
        rec = {
            "index": str(idx),
            "N": N,
            "samples": report.samples,
            "mode": report.mode,
            "exhaustive": report.exhaustive,
            "level_successes": list(report.level_successes),
            "fraction": report.fraction,
            "stderr": report.stderr,
        }
        return json.dumps(rec, indent=2) + "\n"
    return report.to_csv()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arboreal", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt_default="text", formats=("text", "csv", "json")):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=formats, default=fmt_default)

    w = sub.add_parser("wreath", help="wreath-product counts, enumeration and sampling")
    w.add_argument("action", choices=["count", "enumerate", "sample-ratio"])
    w.add_argument("--index", required=True, help="spherical index, e.g. 2,3,2")
    w.add_argument("--limit", type=int, default=100_000, help="largest group to enumerate")
    w.add_argument("--samples", type=int, default=100_000)
    common(w)
    w.set_defaults(func=cmd_wreath)

    s = sub.add_parser("scan", help="stable-prime scan")
    s.add_argument("action", choices=["stable"])
    s.add_argument("--spec", required=True)
    s.add_argument("--nmax", type=int, default=5)
    s.add_argument("--pmax", type=int, default=10_000)
    common(s, "csv", ("csv", "json"))
    s.set_defaults(func=cmd_scan)

    f = sub.add_parser("frob", help="Frobenius decomposition-type statistics")
    f.add_argument("action", choices=["hist", "compare"])
    f.add_argument("--spec", required=True)
    f.add_argument("--level", type=int, default=1)
    f.add_argument("--pmax", type=int, default=10_000)
    f.add_argument("--samples", type=int, default=100_000, help="Monte Carlo size of a large reference group")
    common(f, "json")
    f.set_defaults(func=cmd_frob)

    g = sub.add_parser("generic", help="box sampling of polynomial sequences")
    g.add_argument("action", choices=["sample", "curve"])
    g.add_argument("--index", default="2,2")
    g.add_argument("--box", type=int, default=25, help="coefficient bound N")
    g.add_argument("--boxes", default="5,10,15,20,25", help="box bounds for the growth curve")
    g.add_argument("--samples", type=int, default=0, help="0 runs the whole box")
    g.add_argument("--pmax", type=int, default=3000, help="prime bound for heuristic mode")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--heuristic", dest="mode", action="store_const", const="heuristic")
    g.set_defaults(mode="auto")
    common(g, "csv", ("csv", "json"))
    g.set_defaults(func=cmd_generic)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except ConfigError as exc:
        print(f"arboreal: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (wreath.OrderExceedsLimit, polyseq.DegreeLimitExceeded) as exc:
        print(f"arboreal: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
