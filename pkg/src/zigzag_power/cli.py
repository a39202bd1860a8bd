"""Command line interface.

Exit codes: 0 success, 1 negative zig-zag classification, 2 invalid input,
3 study finished with failed grid cells, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys

from . import __version__
from .config import OUTPUT_ENV, StudyConfig, load_config, parse_distribution_arg
from .distributions import beta_binomial, classify_zigzag, make_cell_probabilities
from .errors import GofError, InvalidParameter
from .power import (
    DEFAULT_ORACLE_CAP,
    DEFAULT_REPLICATES,
    DEFAULT_SEED,
    ROLE_NULL,
    EmpiricalDistribution,
    SampleStream,
    exact_power_oracle,
    monte_carlo_power,
    run_study,
    simulate_statistics,
)
from .report import write_catalog, write_study
from .statistics import (
    ALL_KINDS,
    TIE_DECIMALS,
    ObservedCounts,
    StatisticKind,
    check_applicable,
    compute,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2
EXIT_PARTIAL = 3
EXIT_IO = 4

def _csv_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise InvalidParameter(f"expected comma-separated numbers, got {text!r}") from None


def _csv_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InvalidParameter(f"expected comma-separated integers, got {text!r}") from None


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def cmd_power(args) -> int:
    try:
        config = load_config(args.config) if args.config else StudyConfig()
    except OSError as exc:
        raise InvalidParameter(f"cannot read config: {exc}") from None
    if args.workers is not None and args.workers < 1:
        raise InvalidParameter(f"workers must be positive, got {args.workers}")
    if args.seed is not None:
        config = dataclasses.replace(config, plan=dataclasses.replace(config.plan, seed=args.seed))
    if args.out is not None:
        config = dataclasses.replace(config, output=args.out)
    if args.workers is not None:
        config = dataclasses.replace(config, workers=args.workers)
    null, alternatives = config.resolve()
    result = run_study(config.plan, null, alternatives, workers=config.workers)
    for path in write_study(result, config.output, config.formats):
        print(path)
    failures = result.failures
    if failures:
        print(f"{len(failures)} of {len(result.records)} grid cells failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_stat(args) -> int:
    if args.replicates < 1:
        raise InvalidParameter(f"replicates must be positive, got {args.replicates}")
    obs = ObservedCounts(_csv_ints(args.counts))
    null = parse_distribution_arg(args.null, "null").resolve()
    if obs.k != null.k:
        raise InvalidParameter(f"{obs.k} counts against a {null.k}-cell null")
    values, usable = {}, []
    for kind in ALL_KINDS:
        try:
            check_applicable(kind, null, obs.n)
            values[kind] = compute(kind, obs, null)
            usable.append(kind)
        except GofError as exc:
            values[kind] = exc
    pvalues = {}
    if usable:
        stream = SampleStream(args.seed, ROLE_NULL, 0)
        sims = simulate_statistics(usable, null, null, obs.n, args.replicates, stream)
        for j, kind in enumerate(usable):
            dist = EmpiricalDistribution.from_values(sims[:, j])
            pvalues[kind] = dist.tail_probability(round(values[kind], TIE_DECIMALS))
    print(f"N = {obs.n}, k = {obs.k}, null = {null.label or 'explicit'}")
    print(f"Monte Carlo p-values from {args.replicates} null replicates (seed {args.seed})")
    print(f"{'statistic':<20} {'value':>16} {'p_value':>10}")
    for kind in ALL_KINDS:
        if kind in pvalues:
            print(f"{kind.value:<20} {values[kind]:>16.10g} {pvalues[kind]:>10.6g}")
        else:
            print(f"{kind.value:<20} {'undefined':>16} {'':>10}  ({values[kind]})")
    return EXIT_OK


def cmd_zigzag(args) -> int:
    cp = make_cell_probabilities(_csv_floats(args.probs))
    report = classify_zigzag(cp)
    print(f"is_zigzag: {str(report.is_zigzag).lower()}")
    print(f"pattern: {report.pattern}")
    if report.first_violation is None:
        print("first_violation: none")
    else:
        i = report.first_violation
        print(f"first_violation: {i} (cells {i}, {i + 1})")
    return EXIT_OK if report.is_zigzag else EXIT_NEGATIVE


def cmd_betabinomial(args) -> int:
    cp = beta_binomial(args.a, args.b, args.k)
    print(f"{'cell':>4} {'probability':>22} {'rounded':>7}")
    for i, p in enumerate(cp.probs, start=1):
        print(f"{i:>4} {p!r:>22} {p:>7.2f}")
    print(f"sum: {math.fsum(cp.probs)!r}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    kind = StatisticKind.parse(args.kind)
    null = parse_distribution_arg(args.null, "null").resolve()
    alt = parse_distribution_arg(args.alt, "alternative").resolve()
    exact = exact_power_oracle(kind, null, alt, args.n, args.alpha, cap=args.cap)
    b = exact.bracket
    print(f"statistic: {kind.value}")
    print(f"exact power: {exact.power!r}")
    print(f"sensitivity: {exact.sensitivity!r}")
    print(f"bracket: x1={b.x1!r} alpha1={b.alpha1!r} x2={b.x2!r} alpha2={b.alpha2!r} exact_hit={str(b.exact_hit).lower()}")
    print(f"power at x1: {exact.power_at_x1!r}, power at x2: {exact.power_at_x2!r}")
    if args.mc:
        mc = monte_carlo_power(kind, null, alt, args.n, args.alpha, args.replicates, args.seed)
        se = math.sqrt(max(mc.power * (1.0 - mc.power), 0.0) / args.replicates)
        print(f"monte carlo power: {mc.power:.6g} (se {se:.2g}, {args.replicates} replicates, seed {args.seed})")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.dump:
        with open(args.dump, "w", newline="", encoding="utf-8") as fh:
            write_catalog(fh)
        print(args.dump)
    else:
        write_catalog(sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zigzag-power",
        description="Discrete goodness-of-fit statistics and simulated power against fully specified nulls.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and cell failures")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power", help="run a power study and write CSV/JSON results")
    p.add_argument("--config", help="YAML study config (defaults reproduce the standard zig-zag study)")
    p.add_argument("--seed", type=_u64)
    p.add_argument("--out", help=f"output directory (default: config, then ${OUTPUT_ENV}, then ./results)")
    p.add_argument("--workers", type=int, help="threads used for sample sets; output does not depend on it")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("stat", help="all six statistics and Monte Carlo p-values for one sample")
    p.add_argument("--counts", required=True, help="comma-separated observed counts")
    p.add_argument("--null", required=True, help="catalog name, uniform:<k>, or comma-separated probabilities")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_stat)

    p = sub.add_parser("zigzag", help="check strict up/down alternation of cell probabilities")
    p.add_argument("--probs", required=True)
    p.set_defaults(func=cmd_zigzag)

    p = sub.add_parser("betabinomial", help="Beta-Binomial BB(a, b) cell probabilities")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_betabinomial)

    p = sub.add_parser("oracle", help="exact interpolated power by enumerating every outcome")
    p.add_argument("--kind", required=True, choices=[k.value for k in ALL_KINDS])
    p.add_argument("--null", required=True)
    p.add_argument("--alt", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help="largest outcome space to enumerate")
    p.add_argument("--mc", action="store_true", help="also print the Monte Carlo estimate")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("catalog", help="raw and resolved catalog distributions as CSV")
    p.add_argument("--dump", help="write to this path instead of stdout")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except GofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
