"""Command-line front end: machine-readable tables on stdout, progress on stderr.

Exit codes: 0 success, 1 usage error, 2 degraded rows, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import asymptotics as asy
from .eigen import eigen_derivatives, solve_eigenvalue
from .errors import AccuracyError, DomainError, ResolutionError
from .field import AlgebraicNumber
from .lattice import secular_eigenvalue, truncated_green
from .series import ts_binomial
from .spectral import Region, resolvent_closed

log = logging.getLogger("bilaplacian")

EXIT_OK, EXIT_USAGE, EXIT_DEGRADED, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt_float(x: Optional[float]) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


@dataclass(frozen=True)
class SweepConfig:
    mu_values: tuple
    tol: float = 1e-12
    output: Optional[str] = None
    format: str = "csv"
    order: Optional[int] = None
    N: Optional[int] = None

    def __post_init__(self):
        if not self.mu_values:
            raise UsageError("no coupling values given")
        if any(m == 0 for m in self.mu_values):
            raise UsageError("mu = 0 has no eigenvalue outside the band")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")


@dataclass
class OutputRecord:
    mu: float
    e: Optional[float]
    residual: Optional[float]
    e_prime: Optional[float]
    e_double_prime: Optional[float]
    asymp_estimate: Optional[float] = None
    lattice_estimate: Optional[float] = None
    # not a CSV column; degraded rows are reported on stderr
    status: str = dataclasses.field(default="ok", compare=False)

    COLUMNS = ("mu", "e", "residual", "e_prime", "e_double_prime", "asymp_estimate", "lattice_estimate")

    def cells(self) -> List[str]:
        return [fmt_float(getattr(self, c)) for c in self.COLUMNS]


def parse_mu_range(text: str) -> List[float]:
    """``start:stop:count:side`` -> geometric magnitudes on side neg, pos or both."""
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"--mu-range expects start:stop:count:side, got {text!r}")
    try:
        start, stop, count = abs(float(parts[0])), abs(float(parts[1])), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad --mu-range {text!r}: {exc}") from None
    side = parts[3].strip().lower()
    if count < 1:
        raise UsageError("--mu-range count must be >= 1")
    if start == 0 or stop == 0:
        raise UsageError("--mu-range endpoints must be nonzero")
    if count == 1:
        mags = [start]
    else:
        ratio = (stop / start) ** (1.0 / (count - 1))
        mags = [start * ratio**k for k in range(count)]
    signs = {"neg": [-1.0], "-": [-1.0], "pos": [1.0], "+": [1.0], "both": [-1.0, 1.0]}
    if side not in signs:
        raise UsageError(f"--mu-range side must be neg, pos or both, got {side!r}")
    return [s * m for s in signs[side] for m in mags]


def _collect_mu(args) -> List[float]:
    values: List[float] = []
    for item in args.mu or []:
        for tok in str(item).split(","):
            tok = tok.strip()
            if tok:
                try:
                    values.append(float(tok))
                except ValueError:
                    raise UsageError(f"bad --mu value {tok!r}") from None
    for rng in args.mu_range or []:
        values.extend(parse_mu_range(rng))
    return values


def _emit_table(columns: Sequence[str], rows: Sequence[Sequence[str]], fmt: str, out):
    if fmt == "json":
        for row in rows:
            out.write(json.dumps({k: (v if v != "" else None) for k, v in zip(columns, row)}) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)


def _open_output(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def sweep_record(mu: float, tol: float, order: Optional[int], N: Optional[int]) -> OutputRecord:
    try:
        res = solve_eigenvalue(mu, tol)
    except AccuracyError as exc:
        # best is the gap of the closest iterate
        region = Region.BELOW if mu > 0 else Region.ABOVE
        e_best = region.energy(exc.best) if exc.best is not None else None
        return OutputRecord(mu, e_best, exc.error_estimate, None, None, status="degraded")
    d1, d2 = eigen_derivatives(mu, result=res)
    rec = OutputRecord(mu, res.e, res.residual, d1, d2)
    if order is not None:
        regime = asy.Regime.NEGATIVE if mu < 0 else asy.Regime.POSITIVE
        rec.asymp_estimate = asy.evaluate_expansion(asy.expand(regime, order), mu)
    if N is not None:
        try:
            rec.lattice_estimate = secular_eigenvalue(N, mu, tol)
        except ResolutionError:
            rec.status = "unresolved"
        except AccuracyError:
            rec.status = "degraded"
    return rec


def cmd_sweep(config: SweepConfig, out) -> int:
    rows, degraded = [], False
    for i, mu in enumerate(config.mu_values):
        log.info("sweep %d/%d mu=%g", i + 1, len(config.mu_values), mu)
        rec = sweep_record(mu, config.tol, config.order, config.N)
        if rec.status != "ok":
            degraded = True
            log.warning("row %d (mu=%r): %s", i, mu, rec.status)
        rows.append(rec.cells())
    _emit_table(OutputRecord.COLUMNS, rows, config.format, out)
    return EXIT_DEGRADED if degraded else EXIT_OK


def cmd_asymp(regime: str, order: int, mu_grid: Sequence[float], fmt: str, out) -> int:
    if order < 1:
        raise UsageError("--order must be >= 1")
    reg = asy.Regime(regime)
    wrong = [m for m in mu_grid if (m >= 0 if reg is asy.Regime.NEGATIVE else m <= 0)]
    if wrong:
        raise UsageError(f"mu values {wrong} are on the wrong side for the {regime} regime")
    exp = asy.expand(reg, order)
    status = EXIT_OK
    n_fit = min(len(exp.derived_coeffs), 6)
    try:
        fit = asy.fit_coefficients_oracle(reg, n_fit)
    except AccuracyError as exc:
        log.warning("numeric fit degraded: %s", exc)
        fit = None
        status = EXIT_DEGRADED
    rows = asy.coefficient_report(exp, fit)
    comparison_cols = ["mu", "e_solver", "e_expansion", "abs_error", "gap_rel_error"]
    comparison = []
    for mu in mu_grid:
        res = solve_eigenvalue(mu)
        e_exp = asy.evaluate_expansion(exp, mu)
        g_exp = asy.evaluate_gap(exp, mu)
        comparison.append(
            [fmt_float(mu), fmt_float(res.e), fmt_float(e_exp), fmt_float(abs(e_exp - res.e)),
             fmt_float(abs(g_exp - res.gap) / res.gap)]
        )
    if fmt == "json":
        payload = {
            "coefficients": [dict(zip(asy.REPORT_COLUMNS, r.as_strings())) for r in rows],
            "comparison": [dict(zip(comparison_cols, r)) for r in comparison],
        }
        out.write(json.dumps(payload, indent=1) + "\n")
    else:
        out.write(asy.report_csv(rows))
        if comparison:
            out.write("\n")
            _emit_table(comparison_cols, comparison, "csv", out)
    return status


def cmd_oracle(N_list: Sequence[int], mu: float, z_list: Sequence[float], fmt: str, out) -> int:
    if not N_list:
        raise UsageError("--N needs at least one value")
    if mu == 0:
        raise UsageError("mu = 0 has no eigenvalue outside the band")
    e_ref = solve_eigenvalue(mu).e
    columns = ["N", "mu", "e_N", "e_error", "z", "g00", "g00_error", "status"]
    rows, status = [], EXIT_OK
    for N in N_list:
        log.info("oracle N=%d", N)
        try:
            e_n = secular_eigenvalue(N, mu)
            e_err, flag = abs(e_n - e_ref), "ok"
        except ResolutionError:
            e_n, e_err, flag = None, None, "resolution"
            status = EXIT_DEGRADED
        except AccuracyError as exc:
            # conditioning of the banded solve near the edge limits |Delta_N|
            region = Region.BELOW if mu > 0 else Region.ABOVE
            e_n = region.energy(exc.best)
            e_err, flag = abs(e_n - e_ref), "degraded"
            status = EXIT_DEGRADED
        for z in z_list or [None]:
            if z is None:
                g = g_err = None
            else:
                g = truncated_green(N, z)
                g_err = abs(g - resolvent_closed(z).value / (2 * math.pi))
            rows.append(
                [str(N), fmt_float(mu), fmt_float(e_n), fmt_float(e_err),
                 fmt_float(z), fmt_float(g), fmt_float(g_err), flag]
            )
    _emit_table(columns, rows, fmt, out)
    return status


def _series_rows(coeffs, printed=None):
    rows = []
    for n, c in enumerate(coeffs):
        exact = AlgebraicNumber((c,)) if not isinstance(c, AlgebraicNumber) else c
        p = "" if printed is None or n not in printed else str(printed[n])
        rows.append([str(n), str(exact), str(exact.to_decimal(30)), p])
    return rows


def cmd_series(expression: Sequence[str], fmt: str, out) -> int:
    if not expression:
        raise UsageError("series needs an expression")
    name, args = expression[0], expression[1:]
    try:
        if name == "binomial" and len(args) == 2:
            rows = _series_rows(ts_binomial(Fraction(args[0]), int(args[1])).coeffs)
        elif name == "secular-negative" and len(args) == 1:
            s = asy.secular_negative_series(int(args[0]))
            rows = _series_rows(s.coeffs, asy.PRINTED[asy.Regime.NEGATIVE]["secular"])
        elif name == "secular-positive" and len(args) == 1:
            s = asy.secular_positive_series(int(args[0]))
            rows = _series_rows(s.coeffs, asy.PRINTED[asy.Regime.POSITIVE]["secular"])
        else:
            raise UsageError(
                f"unknown expression {' '.join(expression)!r}; expected "
                "'binomial p/q K', 'secular-negative K' or 'secular-positive K'"
            )
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    _emit_table(["n", "exact", "float", "paper_value"], rows, fmt, out)
    return EXIT_OK


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bilaplacian", description=__doc__.splitlines()[0])
    p.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--output", default=None, help="file path (default stdout)")

    sp = sub.add_parser("sweep", help="eigenvalue sweep over couplings")
    sp.add_argument("--mu", action="append", help="coupling(s), comma separated; repeatable")
    sp.add_argument("--mu-range", action="append", help="start:stop:count:side")
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--order", type=int, default=None, help="add the asymptotic estimate")
    sp.add_argument("--N", type=int, default=None, help="add the lattice estimate")
    common(sp)

    sp = sub.add_parser("asymp", help="coefficient report and expansion-vs-solver table")
    sp.add_argument("--regime", choices=["negative", "positive"], required=True)
    sp.add_argument("--order", type=int, default=4)
    sp.add_argument("--mu", action="append")
    sp.add_argument("--mu-range", action="append")
    common(sp)

    sp = sub.add_parser("oracle", help="finite-lattice convergence table")
    sp.add_argument("--N", type=_int_list, required=True, help="comma-separated half-widths")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--z", type=_float_list, default=[-4.0, 8.0], help="energies for g00")
    common(sp)

    sp = sub.add_parser("series", help="print an exact series from the catalog")
    sp.add_argument("expression", nargs="+")
    common(sp)
    return p


_VALUED = ("--mu", "--mu-range", "--z")


def _glue_negative_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--mu -2,-1`` as ``--mu=-2,-1`` so argparse does not read it as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUED:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2] in set("0123456789."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.handlers = [handler]
    log.propagate = False
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    try:
        out = _open_output(args.output)
    except OSError as exc:
        print(f"bilaplacian: cannot open output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "sweep":
            config = SweepConfig(
                tuple(_collect_mu(args)), args.tol, args.output, args.format, args.order, args.N
            )
            return cmd_sweep(config, out)
        if args.command == "asymp":
            return cmd_asymp(args.regime, args.order, _collect_mu(args), args.format, out)
        if args.command == "oracle":
            return cmd_oracle(args.N, args.mu, args.z, args.format, out)
        return cmd_series(args.expression, args.format, out)
    except UsageError as exc:
        print(f"bilaplacian: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"bilaplacian: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
