"""Momentum-space model: dispersion, resolvent integral and secular determinant.

The free operator acts by multiplication with ``(1 - cos q)**2`` on the
torus, whose range is the band [0, 4]. For real energies outside the band

    I(z) = integral over [-pi, pi] of dq / ((1 - cos q)**2 - z)

has a closed form, and the coupling-``mu`` determinant is
``1 - mu * I(z) / (2 pi)``.

Energies close to a band edge lose digits when written as ``z``; the
``*_gap`` functions take the region and the distance ``gap > 0`` to the
nearest edge instead, and the ``z`` entry points delegate to them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import integrate

BAND_MIN = 0.0
BAND_MAX = 4.0
# queries closer than this to the band are rejected
EDGE_GUARD = 1e-14

SQRT2PI = math.sqrt(2.0) * math.pi


class Region(enum.Enum):
    BELOW = "below"
    ABOVE = "above"

    def energy(self, gap: float) -> float:
        return -gap if self is Region.BELOW else BAND_MAX + gap


@dataclass(frozen=True)
class ModelParameters:
    mu: float
    band_min: float = BAND_MIN
    band_max: float = BAND_MAX
    dispersion: str = "(1 - cos q)^2"


@dataclass(frozen=True)
class SpectralPoint:
    """A real energy outside the band [0, 4]."""

    z: float

    def __post_init__(self):
        z = float(self.z)
        if not math.isfinite(z):
            raise DomainError(f"energy must be finite, got {z}")
        if BAND_MIN - EDGE_GUARD < z < BAND_MAX + EDGE_GUARD:
            raise DomainError(f"energy {z} lies in or within {EDGE_GUARD} of the band [0, 4]")

    @property
    def region(self) -> Region:
        return Region.BELOW if self.z < BAND_MIN else Region.ABOVE

    @property
    def gap(self) -> float:
        return -self.z if self.z < BAND_MIN else self.z - BAND_MAX


@dataclass(frozen=True)
class ResolventValue:
    value: float
    method: str
    error: float = 0.0


@dataclass(frozen=True)
class SecularValue:
    delta: float
    ddz: float


@dataclass(frozen=True)
class ResidueData:
    """Pole data of the contour-integral evaluation of I(z) for z = -alpha**4."""

    alpha: float
    A: float
    xi0: complex

    @property
    def integral(self) -> float:
        """I(z) rebuilt from the residues, 2 A pi / (alpha**3 sqrt(4 + alpha**4))."""
        a = self.alpha
        return 2.0 * self.A * math.pi / (a**3 * math.sqrt(4.0 + a**4))

    @property
    def quartic_residual(self) -> float:
        x = self.xi0
        return abs((x - 1.0) ** 4 + 4.0 * self.alpha**4 * x * x)


def _as_point(z) -> SpectralPoint:
    return z if isinstance(z, SpectralPoint) else SpectralPoint(z)


def dispersion(q):
    """(1 - cos q)**2, written as 4 sin(q/2)**4 to keep digits near q = 0."""
    s = np.sin(0.5 * np.asarray(q, dtype=float))
    out = 4.0 * s**4
    return float(out) if np.ndim(out) == 0 else out


def _distance_to_energy(q, region: Region, gap: float):
    """|dispersion(q) - z| without cancellation, for z in ``region`` at ``gap``."""
    half = 0.5 * q
    if region is Region.BELOW:
        return 4.0 * np.sin(half) ** 4 + gap
    # 4 - e(q) = (1 + cos q)(3 - cos q) = 2 cos(q/2)**2 * (2 + 2 sin(q/2)**2)
    c2 = np.cos(half) ** 2
    return 4.0 * c2 * (1.0 + np.sin(half) ** 2) + gap


def _log_derivatives(region: Region, d: float):
    """(l, dl/dd) where l = d log|I| / d gap."""
    root = math.sqrt(d * (d + 4.0))
    common = 1.0 / (4.0 * root)
    dcommon = -(2.0 * d + 4.0) / (8.0 * root**3)
    if region is Region.BELOW:
        ell = common - 0.75 / d - 0.5 / (d + 4.0)
        dell = dcommon + 0.75 / d**2 + 0.5 / (d + 4.0) ** 2
    else:
        ell = common - 0.75 / (d + 4.0) - 0.5 / d
        dell = dcommon + 0.75 / (d + 4.0) ** 2 + 0.5 / d**2
    return ell, dell


def resolvent_gap(region: Region, gap: float) -> float:
    """Closed-form I(z) for z = -gap (BELOW) or z = 4 + gap (ABOVE)."""
    d = float(gap)
    if not d > 0.0:
        raise DomainError(f"gap must be positive, got {d}")
    if region is Region.BELOW:
        return SQRT2PI * math.sqrt(math.sqrt(d + 4.0) + math.sqrt(d)) / (d**0.75 * math.sqrt(d + 4.0))
    return -SQRT2PI * math.sqrt(math.sqrt(d) + math.sqrt(d + 4.0)) / ((d + 4.0) ** 0.75 * math.sqrt(d))


def resolvent_moments_gap(region: Region, gap: float):
    """(J1, J2, J3) with J_k = integral of dq / (dispersion(q) - z)**k, closed form.

    J2 = I'(z) and J3 = I''(z) / 2, obtained by differentiating the closed
    form in the gap variable (z = -gap below the band, 4 + gap above).
    """
    i1 = resolvent_gap(region, gap)
    ell, dell = _log_derivatives(region, float(gap))
    # dz/dgap is -1 below the band and +1 above
    sgn = -1.0 if region is Region.BELOW else 1.0
    j2 = sgn * i1 * ell
    j3 = 0.5 * i1 * (ell * ell + dell)
    return i1, j2, j3


def resolvent_closed(z) -> ResolventValue:
    """I(z) = -sign(z) sqrt(2) pi sqrt(sqrt|z-4| + sqrt|z|) / (|z|**(3/4) sqrt|z-4|)."""
    p = _as_point(z)
    return ResolventValue(resolvent_gap(p.region, p.gap), "closed-form")


def _edge_breakpoints(region: Region, gap: float, scale: float):
    """Breakpoints on [0, pi] graded toward the edge where the integrand peaks."""
    w = min(scale, 0.5)
    pts = [0.0]
    x = w / 64.0
    while x < math.pi / 2:
        pts.append(x)
        x *= 2.0
    pts.append(math.pi)
    pts = np.array(pts)
    if region is Region.ABOVE:
        pts = np.sort(math.pi - pts)
    return pts


def moment_quadrature_gap(region: Region, gap: float, power: int = 1, tol: float = 1e-12):
    """J_power by adaptive quadrature over [0, pi] (doubled by evenness)."""
    d = float(gap)
    sgn = 1.0 if region is Region.BELOW else -1.0
    # peak width in q: gap**(1/4) at the quartic bottom, gap**(1/2) at the top
    width = d**0.25 if region is Region.BELOW else math.sqrt(d)

    def f(q):
        return (sgn / _distance_to_energy(q, region, d)) ** power

    val, err = integrate(f, _edge_breakpoints(region, d, width), rtol=0.25 * tol)
    return 2.0 * val, 2.0 * err


def resolvent_quadrature(z, tol: float = 1e-12, power: int = 1) -> ResolventValue:
    """Independent quadrature evaluation of I(z) (or of J_power)."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    p = _as_point(z)
    val, err = moment_quadrature_gap(p.region, p.gap, power, tol)
    return ResolventValue(val, "quadrature", err)


def residue_data(z: float) -> ResidueData:
    """Roots inside the unit disk of (xi - 1)**4 + 4 alpha**4 xi**2, z = -alpha**4."""
    z = float(z)
    if not z < 0.0:
        raise DomainError(f"residue data is defined for z < 0, got {z}")
    return residue_data_gap(-z)


def residue_data_gap(gap: float) -> ResidueData:
    a = gap**0.25
    big_a = math.sqrt(0.5 * (math.sqrt(4.0 + a**4) + a * a))
    xi0 = complex(1.0 - a / big_a, big_a * a - a * a)
    return ResidueData(a, big_a, xi0)


def determinant_gap(mu: float, region: Region, gap: float) -> float:
    return 1.0 - mu * resolvent_gap(region, gap) / (2.0 * math.pi)


def determinant(mu: float, z) -> float:
    """Delta(mu; z) = 1 - mu/(2 pi) * I(z)."""
    p = _as_point(z)
    return determinant_gap(mu, p.region, p.gap)


def ddz_determinant(mu: float, z) -> float:
    """dDelta/dz = -mu/(2 pi) * integral of dq / (dispersion - z)**2."""
    p = _as_point(z)
    _, j2, _ = resolvent_moments_gap(p.region, p.gap)
    return -mu * j2 / (2.0 * math.pi)


def secular_value(mu: float, z) -> SecularValue:
    return SecularValue(determinant(mu, z), ddz_determinant(mu, z))
