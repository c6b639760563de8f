"""Exact small-coupling expansions of the bound state, and a numeric check.

Negative coupling (e above the band). With alpha = sqrt(e - 4), the
secular equation reads

    alpha = t * G(alpha),   t = -mu / 2**(3/2),

G(alpha) = (sqrt(1 + alpha**2/4) + alpha/2)**(1/2) * (1 + alpha**2/4)**(-3/4).
Writing alpha = t (1 + u) gives F(u, mu) = (1 + u) - G(t (1 + u)) = 0.

Positive coupling (e below the band). With e = -alpha**4 and
mu = lambda**3 the equation is 2 alpha**3 = lambda**3 H(alpha**2),

H(w) = (1 + w/2 + sqrt(1 + w**2/4) - 1)**(1/2) * (1 + w**2/4)**(-1/2).
Writing alpha = lambda (2**(-1/3) + u), m = lambda**2 gives
F(u, m) = (2 (c + u)**3 - H(m (c + u)**2)) / 3 with c = 2**(-1/3).

G and H are expanded straight from the closed-form resolvent, with no
intermediate expansions copied in by hand.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from .errors import AccuracyError, DomainError
from .field import ONE, ZERO, AlgebraicNumber, CBRT2, SQRT2, parse
from .series import (
    BivariateSeries,
    ImplicitProblem,
    TruncatedSeries,
    ts_binomial,
    ts_compose,
    ts_implicit_solve,
)


class Regime(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"


# -mu / 2**(3/2) = NEG_SCALE * mu
NEG_SCALE = -SQRT2 / 4
# 2**(-1/3)
POS_CENTER = CBRT2 * CBRT2 / 2

# Values as printed in the source derivation, keyed by regime.
# series[n] is the coefficient of the n-th term of the final displayed expansion,
# u[n] the implicit-function coefficient a_n, secular[n] the intermediate right-hand side.
PRINTED = {
    Regime.NEGATIVE: {
        "series": {1: -SQRT2 / 4, 2: AlgebraicNumber((Fraction(-1, 256),)), 3: SQRT2 * Fraction(-27, 18384)},
        "u": {1: SQRT2 / 64, 2: AlgebraicNumber((Fraction(27, 4096),))},
        "secular": {0: ONE, 1: AlgebraicNumber((Fraction(-1, 16),)), 2: AlgebraicNumber((Fraction(13, 512),))},
    },
    Regime.POSITIVE: {
        "series": {0: POS_CENTER, 1: AlgebraicNumber((Fraction(1, 24),)), 2: -CBRT2 / 288},
        "u": {1: AlgebraicNumber((Fraction(1, 24),)), 2: -CBRT2 / 288},
        "secular": {0: ONE, 1: AlgebraicNumber((Fraction(1, 4),)), 2: AlgebraicNumber((Fraction(-1, 32),))},
    },
}


def _lift(s: TruncatedSeries) -> TruncatedSeries:
    return s.map(lambda c: AlgebraicNumber((c,)))


def secular_negative_series(order: int) -> TruncatedSeries:
    """G(alpha) through alpha**order, rational coefficients."""
    x = TruncatedSeries.variable(order)
    quarter_sq = x * x * Fraction(1, 4)
    sqrt_part = ts_compose(ts_binomial(Fraction(1, 2), order), quarter_sq)
    inner = x * Fraction(1, 2) + (sqrt_part - 1)
    outer = ts_compose(ts_binomial(Fraction(1, 2), order), inner)
    damping = ts_compose(ts_binomial(Fraction(-3, 4), order), quarter_sq)
    return (outer * damping).truncate(order)


def secular_positive_series(order: int) -> TruncatedSeries:
    """H(w) through w**order, w = alpha**2, rational coefficients."""
    w = TruncatedSeries.variable(order)
    quarter_sq = w * w * Fraction(1, 4)
    sqrt_part = ts_compose(ts_binomial(Fraction(1, 2), order), quarter_sq)
    inner = w * Fraction(1, 2) + (sqrt_part - 1)
    outer = ts_compose(ts_binomial(Fraction(1, 2), order), inner)
    damping = ts_compose(ts_binomial(Fraction(-1, 2), order), quarter_sq)
    return (outer * damping).truncate(order)


def implicit_problem(regime: Regime, order: int) -> ImplicitProblem:
    one = TruncatedSeries.variable(order, ONE)
    U = BivariateSeries.from_u(one, order)
    M = BivariateSeries.from_m(one, order)
    if regime is Regime.NEGATIVE:
        G = _lift(secular_negative_series(order))
        arg = M * (U + ONE) * NEG_SCALE
        F = (U + ONE) - arg.compose_into(G)
    else:
        H = _lift(secular_positive_series(order))
        shifted = U + POS_CENTER
        arg = M * shifted * shifted
        F = (shifted * shifted * shifted * 2 - arg.compose_into(H)) * Fraction(1, 3)
    return ImplicitProblem(F)


@dataclass(frozen=True)
class AsymptoticExpansion:
    """Exact small-|mu| expansion of the regime variable.

    negative: sqrt(e - 4) = sum_{n>=1} derived[n-1] * mu**n
    positive: (-e)**(1/4) = sum_{n>=0} derived[n] * mu**((2n+1)/3)
    """

    regime: Regime
    order: int
    u_coeffs: tuple  # a_1 .. a_K
    derived_coeffs: tuple

    @property
    def transform(self) -> str:
        if self.regime is Regime.NEGATIVE:
            return "alpha = sqrt(e - 4); alpha = -mu 2^(-3/2) (1 + u(mu))"
        return "lambda = mu^(1/3); e = -alpha^4; alpha = lambda (2^(-1/3) + u(lambda^2))"

    def exponents(self) -> List[Fraction]:
        if self.regime is Regime.NEGATIVE:
            return [Fraction(n + 1) for n in range(len(self.derived_coeffs))]
        return [Fraction(2 * n + 1, 3) for n in range(len(self.derived_coeffs))]

    def first_index(self) -> int:
        return 1 if self.regime is Regime.NEGATIVE else 0

    def u_series(self) -> TruncatedSeries:
        return TruncatedSeries((ZERO,) + tuple(self.u_coeffs), self.order)

    def recompute_derived(self) -> tuple:
        return _derive(self.regime, self.u_coeffs)

    def float_coeffs(self, digits: int = 30) -> List[float]:
        return [float(c.to_decimal(digits)) for c in self.derived_coeffs]


def _derive(regime: Regime, u_coeffs: Sequence[AlgebraicNumber]) -> tuple:
    if regime is Regime.NEGATIVE:
        return (NEG_SCALE,) + tuple(NEG_SCALE * a for a in u_coeffs)
    return (POS_CENTER,) + tuple(u_coeffs)


def _expand(regime: Regime, order: int) -> AsymptoticExpansion:
    if order < 1:
        raise ValueError("order must be >= 1")
    u = ts_implicit_solve(implicit_problem(regime, order), order)
    a = tuple(u.coeffs[1:])
    return AsymptoticExpansion(regime, order, a, _derive(regime, a))


def expand_negative(order: int) -> AsymptoticExpansion:
    return _expand(Regime.NEGATIVE, order)


def expand_positive(order: int) -> AsymptoticExpansion:
    return _expand(Regime.POSITIVE, order)


def expand(regime: Regime | str, order: int) -> AsymptoticExpansion:
    return _expand(Regime(regime), order)


def secular_residual(exp: AsymptoticExpansion) -> TruncatedSeries:
    """Plug the solved series back into the exact secular relation.

    negative: alpha(mu) - t G(alpha(mu)) as a series in mu (order K+1);
    positive: 2 (c + u)**3 - H(m (c + u)**2) as a series in m (order K).
    Both must vanish identically.
    """
    k = exp.order
    if exp.regime is Regime.NEGATIVE:
        alpha = TruncatedSeries((ZERO,) + tuple(exp.derived_coeffs), k + 1)
        G = _lift(secular_negative_series(k + 1))
        t = TruncatedSeries.variable(k + 1, ONE) * NEG_SCALE
        return alpha - t * ts_compose(G, alpha)
    H = _lift(secular_positive_series(k))
    shifted = exp.u_series() + POS_CENTER
    m = TruncatedSeries.variable(k, ONE)
    return shifted * shifted * shifted * 2 - ts_compose(H, m * shifted * shifted)


def evaluate_regime_variable(exp: AsymptoticExpansion, mu: float) -> float:
    """Truncated sqrt(e - 4) (negative) or (-e)**(1/4) (positive) at ``mu``."""
    if exp.regime is Regime.NEGATIVE and not mu < 0:
        raise DomainError("negative-regime expansion needs mu < 0")
    if exp.regime is Regime.POSITIVE and not mu > 0:
        raise DomainError("positive-regime expansion needs mu > 0")
    coeffs = exp.float_coeffs()
    if exp.regime is Regime.NEGATIVE:
        return math.fsum(c * mu ** (n + 1) for n, c in enumerate(coeffs))
    lam = mu ** (1.0 / 3.0)
    return math.fsum(c * lam ** (2 * n + 1) for n, c in enumerate(coeffs))


def evaluate_gap(exp: AsymptoticExpansion, mu: float) -> float:
    """Distance from e(mu) to the nearest band edge, from the truncated series."""
    y = evaluate_regime_variable(exp, mu)
    return y * y if exp.regime is Regime.NEGATIVE else y**4


def evaluate_expansion(exp: AsymptoticExpansion, mu: float) -> float:
    """Energy estimate e(mu) from the truncated expansion."""
    g = evaluate_gap(exp, mu)
    return 4.0 + g if exp.regime is Regime.NEGATIVE else -g


# numeric oracle


def _mp_resolvent_above(d):
    return -mpmath.sqrt(2) * mpmath.pi * mpmath.sqrt(mpmath.sqrt(d) + mpmath.sqrt(d + 4)) / (
        (d + 4) ** mpmath.mpf(0.75) * mpmath.sqrt(d)
    )


def _mp_resolvent_below(d):
    return mpmath.sqrt(2) * mpmath.pi * mpmath.sqrt(mpmath.sqrt(d + 4) + mpmath.sqrt(d)) / (
        d ** mpmath.mpf(0.75) * mpmath.sqrt(d + 4)
    )


def _mp_regime_variable(regime: Regime, mu) -> "mpmath.mpf":
    """sqrt(e - 4) or (-e)**(1/4) at coupling ``mu`` by high-precision root finding."""
    mu = mpmath.mpf(mu)
    if regime is Regime.NEGATIVE:
        f = lambda a: 1 - mu * _mp_resolvent_above(a * a) / (2 * mpmath.pi)
        guess = -mu / (2 * mpmath.sqrt(2))
    else:
        f = lambda a: 1 - mu * _mp_resolvent_below(a**4) / (2 * mpmath.pi)
        guess = mpmath.cbrt(mu / 2)
    lo, hi = guess / 2, guess * 2
    while f(lo) * f(hi) > 0:
        lo, hi = lo / 2, hi * 2
    root = mpmath.findroot(f, (lo, hi), solver="anderson")
    return mpmath.findroot(f, root)


def _neville_at_zero(xs, ys):
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
    return p[0]


@dataclass
class CoefficientFit:
    regime: Regime
    fitted: List[float]
    uncertainty: List[float]
    mu_grid: List[float] = field(repr=False)

    @property
    def first_index(self) -> int:
        return 1 if self.regime is Regime.NEGATIVE else 0


def default_mu_grid(regime: Regime | str, points: int = 10, scale: float = 1.0) -> List[float]:
    """Geometric grid whose regime variable (|mu| or mu**(2/3)) halves each step.

    With the defaults the smallest coupling stays above 1e-6 in both regimes.
    """
    regime = Regime(regime)
    if regime is Regime.NEGATIVE:
        return [-0.05 * scale * 0.5**k for k in range(points)]
    return [(0.08 * scale * 0.5**k) ** 1.5 for k in range(points)]


def fit_coefficients_oracle(
    regime: Regime | str,
    orders: int,
    mu_grid: Optional[Sequence[float]] = None,
    dps: int = 60,
    max_relative_uncertainty: float = 1e-3,
) -> CoefficientFit:
    """Extract expansion coefficients numerically from high-precision solutions.

    The regime variable y is tabulated on the grid; successive coefficients
    come from polynomial (Richardson/Neville) extrapolation to zero of
    (y/x - known terms) / x**j, x = -mu (negative) or mu**(2/3) (positive).
    The uncertainty of each coefficient is the change when the coarsest grid
    point is dropped. Coefficients are reported in powers of mu for the
    negative regime (sign (-1)**n restored).
    """
    regime = Regime(regime)
    grid = list(mu_grid) if mu_grid is not None else default_mu_grid(regime)
    if any(abs(m) < 1e-6 for m in grid):
        raise DomainError("grid points must satisfy |mu| >= 1e-6")
    if regime is Regime.NEGATIVE and any(m >= 0 for m in grid):
        raise DomainError("negative regime needs mu < 0 on the whole grid")
    if regime is Regime.POSITIVE and any(m <= 0 for m in grid):
        raise DomainError("positive regime needs mu > 0 on the whole grid")
    if len(grid) < orders + 2:
        raise ValueError("grid too short for the requested number of coefficients")
    with mpmath.workdps(dps):
        xs, vals = [], []
        for mu in grid:
            y = _mp_regime_variable(regime, mu)
            if regime is Regime.NEGATIVE:
                x = -mpmath.mpf(mu)
                vals.append(y / x)
            else:
                lam = mpmath.cbrt(mpmath.mpf(mu))
                x = lam * lam
                vals.append(y / lam)
            xs.append(x)
        # coarsest points first so that dropping index 0 removes the largest x
        order_idx = sorted(range(len(xs)), key=lambda i: -xs[i])
        xs = [xs[i] for i in order_idx]
        vals = [vals[i] for i in order_idx]
        fitted, unc = [], []
        scale = max(abs(v) for v in vals)
        for j in range(orders):
            c_all = _neville_at_zero(xs, vals)
            c_less = _neville_at_zero(xs[1:], vals[1:])
            # working-precision floor: rounding in y is amplified by 1/x**j and by Neville
            floor = mpmath.mpf(10) ** (3 - dps) * scale / xs[-1] ** j * 2 ** len(xs)
            err = max(abs(c_all - c_less), floor)
            sign = (-1) ** (j + 1) if regime is Regime.NEGATIVE else 1
            fitted.append(float(sign * c_all))
            unc.append(float(err))
            if err > max_relative_uncertainty * max(abs(c_all), mpmath.mpf(10) ** (-dps // 2)):
                raise AccuracyError(
                    f"coefficient {j} not resolved (uncertainty {float(err):.3g}); "
                    f"trustworthy prefix: {fitted[:-1]}",
                    best=fitted[:-1],
                )
            vals = [(v - c_all) / x for v, x in zip(vals, xs)]
    return CoefficientFit(regime, fitted, unc, list(grid))


# three-way report

REPORT_COLUMNS = [
    "regime",
    "quantity",
    "n",
    "paper_value",
    "engine_value_exact",
    "engine_value_float",
    "fit_value",
    "fit_uncertainty",
    "paper_agrees",
    "fit_agrees",
]


@dataclass
class ReportRow:
    regime: str
    quantity: str
    n: int
    paper_value: Optional[AlgebraicNumber]
    engine_value: AlgebraicNumber
    fit_value: Optional[float] = None
    fit_uncertainty: Optional[float] = None

    @property
    def paper_agrees(self) -> Optional[bool]:
        return None if self.paper_value is None else self.paper_value == self.engine_value

    def fit_agrees(self, rtol: float = 1e-6) -> Optional[bool]:
        if self.fit_value is None:
            return None
        ev = float(self.engine_value)
        bound = max(rtol * abs(ev), 2 * (self.fit_uncertainty or 0.0), 1e-300)
        return abs(self.fit_value - ev) <= bound

    def as_strings(self) -> List[str]:
        fmt = lambda b: "" if b is None else ("yes" if b else "no")
        return [
            self.regime,
            self.quantity,
            str(self.n),
            "" if self.paper_value is None else str(self.paper_value),
            str(self.engine_value),
            str(self.engine_value.to_decimal(30)),
            "" if self.fit_value is None else f"{self.fit_value:.17g}",
            "" if self.fit_uncertainty is None else f"{self.fit_uncertainty:.3g}",
            fmt(self.paper_agrees),
            fmt(self.fit_agrees()),
        ]


def coefficient_report(exp: AsymptoticExpansion, fit: Optional[CoefficientFit] = None) -> List[ReportRow]:
    printed = PRINTED[exp.regime]
    rows = []
    start = exp.first_index()
    for i, c in enumerate(exp.derived_coeffs):
        n = start + i
        row = ReportRow(exp.regime.value, "series", n, printed["series"].get(n), c)
        if fit is not None and i < len(fit.fitted):
            row.fit_value, row.fit_uncertainty = fit.fitted[i], fit.uncertainty[i]
        rows.append(row)
    for i, c in enumerate(exp.u_coeffs):
        rows.append(ReportRow(exp.regime.value, "u", i + 1, printed["u"].get(i + 1), c))
    return rows


def report_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow(r.as_strings())
    return buf.getvalue()


def parse_report_value(text: str) -> AlgebraicNumber:
    return parse(text)
