# Copyright 2025 Jozsef Szalma

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""
Command line surface: `spl <command> [options]`.

Exit codes: 0 success, 2 usage or domain error, 3 verification failure,
4 resource budget exceeded.
"""

# Standard imports
import sys
import csv
import json
import time
import logging
import argparse
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

# 3rd party imports
from dotenv import load_dotenv

# Package imports
from . import __version__
from .analytic_bounds import (
    assemble_bound_report,
    pair_bound,
    s_asymptotic_ratio,
    s_of_z,
    singular_series,
    theorem_bound,
)
from .config import (
    BOUND_REPORT_HEADER,
    CSV_SIGNIFICANT_DIGITS,
    TC_SCAN_HEADER,
    OutputFormat,
    SieveConfig,
)
from .dickman import default_solver
from .exceptions import (
    BudgetError,
    NoRootError,
    PreconditionError,
    ToleranceError,
    VerificationError,
)
from .shifted_stats import Exponent, exponent_grid, prime_pair_count, scan_tc, tprime_via_pairs
from .sieve_core import primes_up_to

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION = 3
EXIT_BUDGET = 4


@dataclass
class RunManifest:
    """Provenance record written next to every data file."""
    command: str
    parameters: Dict[str, Any]
    tool_version: str = __version__
    wall_time_seconds: float = 0.0
    output_paths: List[str] = field(default_factory=list)

    def write(self, data_path: str) -> str:
        path = f"{data_path}.manifest.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def parse_int(text: str) -> int:
    """Read integers written as 1000000, 10^6, 2**40 or 1e6."""
    raw = text.strip().replace("_", "")
    try:
        for sep in ("^", "**"):
            if sep in raw:
                base, exp = raw.split(sep, 1)
                return int(base) ** int(exp)
        if "e" in raw.lower():
            mantissa, exp = raw.lower().split("e", 1)
            value = Fraction(mantissa) * 10 ** int(exp)
            if value.denominator != 1:
                raise ValueError(f"{text} is not an integer")
            return int(value)
        return int(raw)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}: {e}")


def parse_exponent(text: str) -> Exponent:
    try:
        return Exponent.parse(text)
    except PreconditionError as e:
        raise argparse.ArgumentTypeError(str(e))


def format_value(value: Any) -> str:
    """CSV rendering: '.' decimals, no grouping, 12 significant digits for reals."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"
    return str(value)


def _write_csv(fh, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def _parameters(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"handler", "verbose"}
    params = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        if isinstance(value, Exponent):
            value = str(value)
        elif isinstance(value, list):
            value = [str(v) if isinstance(v, Exponent) else v for v in value]
        params[key] = value
    return params


def emit(
    args: argparse.Namespace,
    started: float,
    write: Callable[[Any], None],
) -> None:
    """Send output to --out (with a sibling manifest) or to stdout."""
    if not getattr(args, "out", None):
        write(sys.stdout)
        return
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write(fh)
    manifest = RunManifest(
        command=args.command,
        parameters=_parameters(args),
        wall_time_seconds=round(time.time() - started, 3),
        output_paths=[args.out],
    )
    path = manifest.write(args.out)
    logger.info(f"Wrote {args.out} and {path}")


def _config(args: argparse.Namespace) -> SieveConfig:
    return SieveConfig.from_env(
        workers=getattr(args, "threads", None),
        segment_size=getattr(args, "segment_size", None),
        allow_large=getattr(args, "allow_large", False),
    )


def cmd_primes(args: argparse.Namespace) -> int:
    started = time.time()
    table = primes_up_to(args.n, _config(args))
    if args.out:
        emit(args, started, lambda fh: _write_csv(fh, ("p",), ([int(p)] for p in table.primes)))
    else:
        print(table.count)
    return EXIT_OK


def _solver_for(grid: Sequence[Exponent]):
    smallest = min(float(c) for c in grid)
    return default_solver(u_max=max(20.0, float(int(1.0 / smallest) + 1)))


def cmd_tc_scan(args: argparse.Namespace) -> int:
    started = time.time()
    try:
        start, stop, step = args.c_grid.split(":")
    except ValueError:
        raise PreconditionError(f"--c-grid expects start:stop:step, got {args.c_grid!r}")
    grid = exponent_grid(start, stop, step)
    config = _config(args)
    scan = scan_tc(args.x, grid, config)
    solver = _solver_for(grid)

    if args.verify_pairs:
        table = primes_up_to(args.x, config)
        for row in scan.rows:
            if row.c.fraction < Fraction(1, 2):
                continue
            paired = tprime_via_pairs(args.x, row.c, table)
            if paired != row.t_prime_c:
                raise VerificationError(
                    f"T'_c mismatch at x={args.x}, c={row.c}: scan {row.t_prime_c}, pairs {paired}"
                )
            logger.info(f"Pair sum agrees at c={row.c}: {paired}")

    rows = [
        (
            scan.x, row.c.num, row.c.den, row.t_c, row.t_prime_c, row.pi_x,
            row.ratio_t, row.ratio_t_prime, solver.eh_density(float(row.c)),
            theorem_bound(row.c), row.lemma2_gap_normalized,
        )
        for row in scan.rows
    ]
    emit(args, started, lambda fh: _write_csv(fh, TC_SCAN_HEADER, rows))
    return EXIT_OK


def cmd_pairs(args: argparse.Namespace) -> int:
    started = time.time()
    hs = list(range(2, args.h_max + 1, 2)) if args.h_max else [args.h]
    if not hs or hs[0] is None:
        raise PreconditionError("pairs needs --h or --h-max")
    config = _config(args)
    table = primes_up_to(max(hs) * (args.y - 1) + 1, config)
    ss = singular_series(args.cutoff, config=config) if args.y >= 16 else None
    rows = []
    for h in hs:
        count = prime_pair_count(h, args.y, table)
        bound = pair_bound(h, args.y, ss) if ss is not None else None
        rows.append((h, args.y, count, bound))
    emit(args, started, lambda fh: _write_csv(fh, ("h", "y", "pair_count", "pair_bound"), rows))
    return EXIT_OK


def cmd_dickman(args: argparse.Namespace) -> int:
    started = time.time()
    solver = default_solver(u_max=args.u_max, tol=args.tol)
    if args.table:
        rows = solver.table(step=args.table_step)
        emit(args, started, lambda fh: _write_csv(fh, ("u", "rho"), rows))
    elif args.solve_target is not None:
        print(format_value(solver.solve_eh_threshold(args.solve_target)))
    else:
        print(format_value(solver.rho(args.u)))
    return EXIT_OK


def cmd_constants(args: argparse.Namespace) -> int:
    config = _config(args)
    ss = singular_series(args.cutoff, config=config)
    print(f"singular_series={format_value(ss.value)}")
    print(f"cutoff={ss.cutoff}")
    print(f"tail_bound={format_value(ss.tail_bound)}")
    if args.sz is not None:
        print(f"S(z)={format_value(s_of_z(args.sz, config))}")
        if args.sz >= 10:
            print(f"asymptotic_ratio={format_value(s_asymptotic_ratio(args.sz, ss, config))}")
    return EXIT_OK


def cmd_bound_report(args: argparse.Namespace) -> int:
    started = time.time()
    config = _config(args)
    scan = scan_tc(args.x, args.c, config)
    ss = singular_series(args.cutoff, config=config)
    solver = _solver_for(args.c)
    reports = [
        assemble_bound_report(row, args.x, ss, solver, args.with_sieve_rhs, config)
        for row in scan.rows
    ]

    if OutputFormat(args.format) is OutputFormat.JSON:
        payload = {"x": args.x, "reports": [
            {key: report.as_dict()[key] for key in BOUND_REPORT_HEADER} for report in reports
        ]}
        emit(args, started, lambda fh: fh.write(json.dumps(payload, indent=2) + "\n"))
    else:
        rows = [[report.as_dict()[key] for key in BOUND_REPORT_HEADER] for report in reports]
        emit(args, started, lambda fh: _write_csv(fh, BOUND_REPORT_HEADER, rows))

    if args.strict:
        for report in reports:
            if report.informative and report.empirical_ratio > report.theorem_bound:
                raise VerificationError(
                    f"empirical ratio {report.empirical_ratio:.6f} exceeds bound "
                    f"{report.theorem_bound:.6f} at c={report.c}"
                )
    return EXIT_OK


def _add_run_options(parser: argparse.ArgumentParser, out: bool = True) -> None:
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: machine parallelism)")
    parser.add_argument("--segment-size", type=parse_int, default=None,
                        help="integers per sieve segment (default 2^22)")
    if out:
        parser.add_argument("--out", default=None, help="write data here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spl",
        description="Shifted primes with large prime factors: counts, bounds and predictions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", help="count (and optionally list) primes up to n")
    p.add_argument("--n", type=parse_int, required=True)
    _add_run_options(p)
    p.set_defaults(handler=cmd_primes)

    p = sub.add_parser("tc-scan", help="T_c(x) and T'_c(x) over an exponent grid")
    p.add_argument("--x", type=parse_int, required=True)
    p.add_argument("--c-grid", required=True, help="start:stop:step, decimals")
    p.add_argument("--verify-pairs", action="store_true",
                   help="cross-check T'_c against the pair sum for c >= 1/2")
    p.add_argument("--allow-large", action="store_true", help="lift the x cap")
    _add_run_options(p)
    p.set_defaults(handler=cmd_tc_scan)

    p = sub.add_parser("pairs", help="prime pairs (q, qh + 1) against the sieve main term")
    p.add_argument("--h", type=parse_int, default=None)
    p.add_argument("--h-max", type=parse_int, default=None, help="all even h up to this value")
    p.add_argument("--y", type=parse_int, required=True)
    p.add_argument("--cutoff", type=parse_int, default=10 ** 6, help="singular series cutoff")
    _add_run_options(p)
    p.set_defaults(handler=cmd_pairs)

    p = sub.add_parser("dickman", help="Dickman rho and the density threshold solver")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--u", type=float)
    mode.add_argument("--solve-target", type=float)
    mode.add_argument("--table", action="store_true", help="u,rho(u) grid as CSV")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--u-max", type=float, default=20.0)
    p.add_argument("--table-step", type=float, default=0.05)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_dickman)

    p = sub.add_parser("constants", help="singular series and S(z)")
    p.add_argument("--cutoff", type=parse_int, default=10 ** 6)
    p.add_argument("--sz", type=float, default=None)
    _add_run_options(p, out=False)
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser("bound-report", help="empirical ratio against every analytic quantity")
    p.add_argument("--x", type=parse_int, required=True)
    p.add_argument("--c", type=parse_exponent, action="append", required=True)
    p.add_argument("--with-sieve-rhs", action="store_true")
    p.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value)
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when an informative bound is exceeded")
    p.add_argument("--cutoff", type=parse_int, default=10 ** 6, help="singular series cutoff")
    p.add_argument("--allow-large", action="store_true", help="lift the x cap")
    _add_run_options(p)
    p.set_defaults(handler=cmd_bound_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )
    try:
        return args.handler(args)
    except (PreconditionError, NoRootError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except (VerificationError, ToleranceError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_VERIFICATION
    except BudgetError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_BUDGET
    except ValueError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
