"""The bound state e(mu): secular-equation solver, derivatives, eigenfunction.

For mu > 0 the eigenvalue sits below the band, for mu < 0 above it. The
solver works on the distance to the band edge so that energies like
4 + 1e-13 keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import integrate
from .rootfind import newton_bisect
from .spectral import (
    BAND_MAX,
    BAND_MIN,
    Region,
    _log_derivatives,
    dispersion,
    moment_quadrature_gap,
    resolvent_gap,
    resolvent_moments_gap,
)

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    def contains(self, z: float) -> bool:
        return self.lo <= z <= self.hi


@dataclass(frozen=True)
class EigenResult:
    mu: float
    e: float
    residual: float
    bracket_used: Bracket
    iterations: int
    gap: float
    error_estimate: float

    @property
    def region(self) -> Region:
        return Region.BELOW if self.mu > 0 else Region.ABOVE


def _region(mu: float) -> Region:
    if mu == 0 or not math.isfinite(mu):
        raise DomainError("no eigenvalue outside the band for mu = 0")
    return Region.BELOW if mu > 0 else Region.ABOVE


def _delta_and_slope(mu: float, region: Region, d: float):
    """Delta and dDelta/dgap; Delta increases with the gap on both sides."""
    i1 = resolvent_gap(region, d)
    ell, _ = _log_derivatives(region, d)
    c = mu / (2.0 * math.pi)
    return 1.0 - c * i1, -c * i1 * ell


def _gap_bracket(mu: float):
    """Gap interval holding the root.

    Since 2 pi/(4+d) <= |I| <= 2 pi/d on either side of the band, the root
    gap lies in [|mu| - 4, |mu|]; the lower end is floored at eps and pushed
    toward the edge until Delta changes sign.
    """
    region = _region(mu)
    m = abs(mu)
    eps = 1e-12 * max(1.0, m)
    hi = m
    lo = max(eps, m - 4.0)
    while _delta_and_slope(mu, region, lo)[0] >= 0.0:
        lo *= 0.1
        if lo < 1e-300:
            raise AccuracyError(f"could not bracket the eigenvalue for mu={mu}")
    return region, lo, hi


def bracket_eigenvalue(mu: float) -> Bracket:
    region, lo, hi = _gap_bracket(mu)
    if region is Region.BELOW:
        return Bracket(-hi, -lo)
    return Bracket(BAND_MAX + lo, BAND_MAX + hi)


def solve_eigenvalue(mu: float, tol: float = DEFAULT_TOL) -> EigenResult:
    """Unique root of Delta(mu; .) outside [0, 4] with |Delta| < tol."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    region, lo, hi = _gap_bracket(mu)
    root = newton_bisect(lambda d: _delta_and_slope(mu, region, d), lo, hi, tol)
    d = root.x
    delta, slope = _delta_and_slope(mu, region, d)
    bracket = (
        Bracket(-hi, -lo) if region is Region.BELOW else Bracket(BAND_MAX + lo, BAND_MAX + hi)
    )
    return EigenResult(
        mu=mu,
        e=region.energy(d),
        residual=abs(delta),
        bracket_used=bracket,
        iterations=root.iterations,
        gap=d,
        error_estimate=abs(delta / slope) if slope else math.inf,
    )


def eigenvalue(mu: float, tol: float = DEFAULT_TOL) -> float:
    return solve_eigenvalue(mu, tol).e


def _moments(region: Region, gap: float, method: str):
    if method == "closed":
        return resolvent_moments_gap(region, gap)
    if method == "quadrature":
        return tuple(moment_quadrature_gap(region, gap, k)[0] for k in (1, 2, 3))
    raise ValueError(f"unknown method {method!r}")


def eigen_derivatives(mu: float, method: str = "closed", result: EigenResult | None = None):
    """(e'(mu), e''(mu)).

    With J_k the k-th resolvent moment at e(mu), differentiating
    mu * J1(e(mu)) = 2 pi gives e' = -J1 / (mu J2) and, once more,
    e'' = -(2 e'/mu) * (1 + mu e' J3 / J2).
    """
    res = result if result is not None else solve_eigenvalue(mu)
    j1, j2, j3 = _moments(res.region, res.gap, method)
    d1 = -j1 / (mu * j2)
    d2 = -(2.0 * d1 / mu) * (1.0 + mu * d1 * j3 / j2)
    return d1, d2


def _check_outside_band(e: float):
    if BAND_MIN <= e <= BAND_MAX:
        raise DomainError(f"energy {e} lies inside the band [0, 4]")


def eigenfunction_momentum(mu: float, e: float, q):
    """f(q) = 1 / (dispersion(q) - e); unnormalized."""
    _check_outside_band(e)
    out = 1.0 / (np.asarray(dispersion(q)) - e)
    return float(out) if np.ndim(out) == 0 else out


def pole_decay_rate(e: float) -> float:
    """-log|xi| for the root xi of (xi-1)**4 - 4 e xi**2 nearest the unit circle inside it.

    e^{iq} = xi solves dispersion(q) = e; this is the distance from the real
    axis to the nearest complex pole of the momentum eigenfunction.
    """
    _check_outside_band(e)
    roots = np.roots([1.0, -4.0, 6.0 - 4.0 * e, -4.0, 1.0])
    inside = [abs(r) for r in roots if abs(r) < 1.0]
    return -math.log(max(inside))


def _complex_dispersion(q):
    s = np.sin(0.5 * q)
    return 4.0 * s**4


def eigenfunction_position(mu: float, e: float, x: int, tol: float = 1e-10) -> float:
    """Inverse Fourier transform (1/2 pi) * integral of e^{-ixq} / (dispersion(q) - e) dq.

    The integrand is periodic and analytic in the strip |Im q| < eta*, so the
    contour is shifted to Im q = -eta (x > 0), which makes the exponentially
    small result come out of an integral that is no longer dominated by
    cancellation. The shift is pulled toward the pole as |x| grows, and the
    panel count grows with |x|.
    """
    _check_outside_band(e)
    x = abs(int(x))
    if x == 0:
        g = e if e < BAND_MIN else e - BAND_MAX
        region = Region.BELOW if e < BAND_MIN else Region.ABOVE
        val, _ = moment_quadrature_gap(region, abs(g), 1, tol)
        return val / (2.0 * math.pi)
    eta_star = pole_decay_rate(e)
    eta = eta_star * (1.0 - min(0.5, 4.0 / x))

    def f(q):
        w = q - 1j * eta
        return np.exp(-1j * x * q) / (_complex_dispersion(w) - e)

    panels = np.linspace(-math.pi, math.pi, 2 * (x + 8) + 1)
    val, _ = integrate(f, panels, rtol=tol)
    return float((math.exp(-x * eta) * val / (2.0 * math.pi)).real)


def decay_rate_fit(mu: float, e: float, xs) -> float:
    """Least-squares slope of log|f(x)| against x."""
    xs = np.asarray(list(xs), dtype=float)
    ys = np.array([math.log(abs(eigenfunction_position(mu, e, int(x)))) for x in xs])
    return float(np.polyfit(xs, ys, 1)[0])


def momentum_residual(mu: float, e: float, n: int = 2048) -> float:
    """sup_q |(dispersion(q) - e) f(q) - (mu/2 pi) * integral f|, relative to sup|(dispersion - e) f|.

    The integral of f is computed by adaptive quadrature, independently of
    the closed form used by the solver.
    """
    q = np.linspace(-math.pi, math.pi, n)
    f = eigenfunction_momentum(mu, e, q)
    region = Region.BELOW if e < BAND_MIN else Region.ABOVE
    gap = -e if e < BAND_MIN else e - BAND_MAX
    integral, _ = moment_quadrature_gap(region, gap, 1, 1e-13)
    kinetic = (np.asarray(dispersion(q)) - e) * f
    res = kinetic - mu * integral / (2.0 * math.pi)
    return float(np.max(np.abs(res)) / np.max(np.abs(kinetic)))
