import math

import numpy as np
import pytest

from bilaplacian.errors import DomainError
from bilaplacian.spectral import (
    Region,
    SpectralPoint,
    ddz_determinant,
    determinant,
    dispersion,
    residue_data,
    resolvent_closed,
    resolvent_gap,
    resolvent_moments_gap,
    resolvent_quadrature,
    secular_value,
)

I_MINUS4 = math.sqrt(2) * math.pi * math.sqrt(1 + 2**-0.5) / 2**2.25
# sqrt|z-4| = 2, sqrt|z| = 2 sqrt 2, |z|^(3/4) = 2^(9/4)
I_PLUS8 = -math.sqrt(2) * math.pi * math.sqrt(2 + 2 * math.sqrt(2)) / (2**2.25 * 2)


def test_dispersion_values():
    assert dispersion(0.0) == 0.0
    assert dispersion(math.pi) == pytest.approx(4.0, abs=0)
    assert dispersion(math.pi / 2) == pytest.approx(1.0, rel=1e-15)
    q = np.linspace(-math.pi, math.pi, 1001)
    e = dispersion(q)
    assert e.min() >= 0 and e.max() <= 4


def test_band_points_are_rejected():
    for z in (0.0, 2.0, 4.0, 4 + 1e-15, -1e-15):
        with pytest.raises(DomainError):
            SpectralPoint(z)
        with pytest.raises(DomainError):
            resolvent_closed(z)


def test_resolvent_examples():
    assert resolvent_closed(-4).value == pytest.approx(I_MINUS4, rel=1e-14)
    assert I_MINUS4 == pytest.approx(1.2203, abs=1e-4)
    assert resolvent_closed(-1e6).value == pytest.approx(2 * math.pi * 1e-6, rel=1e-2)
    assert resolvent_closed(8).value == pytest.approx(I_PLUS8, rel=1e-14)
    assert I_PLUS8 == pytest.approx(-1.026172, abs=1e-6)
    q = resolvent_quadrature(-4, tol=1e-12)
    assert q.value == pytest.approx(I_MINUS4, rel=1e-10)
    assert resolvent_quadrature(8).value == pytest.approx(resolvent_closed(8).value, rel=1e-10)


def test_resolvent_blows_up_at_edges():
    assert resolvent_quadrature(4.01).value < -20
    assert resolvent_quadrature(-0.01).value > 20
    assert resolvent_closed(4.0001).value < resolvent_closed(4.01).value
    assert resolvent_closed(-0.0001).value > resolvent_closed(-0.01).value


@pytest.mark.parametrize("z", [-1e-3, -0.5, -3.0, -200.0, 4.001, 4.5, 9.0, 1e4])
def test_closed_vs_quadrature_moments(z):
    p = SpectralPoint(z)
    closed = resolvent_moments_gap(p.region, p.gap)
    for k, ref in zip((1, 2, 3), closed):
        quad = resolvent_quadrature(z, tol=1e-12, power=k).value
        assert quad == pytest.approx(ref, rel=1e-9)


def test_gap_variable_keeps_precision_near_upper_edge():
    # z = 4 + 1e-13 cannot be told apart from 4 + 1.0000000000000003e-13 in z;
    # the gap form keeps full relative precision.
    a = resolvent_gap(Region.ABOVE, 1e-13)
    b = resolvent_gap(Region.ABOVE, 1e-13 * (1 + 1e-12))
    assert a < 0 and abs(b / a - 1) < 1e-11


def test_residue_data_examples():
    r = residue_data(-4.0)
    assert abs(r.xi0) < 1
    assert abs(r.xi0) == pytest.approx(0.216845, abs=1e-6)
    assert r.quartic_residual < 1e-12
    near = residue_data(-1e-12)
    assert abs(near.xi0) > 0.99
    with pytest.raises(DomainError):
        residue_data(0.5)
    with pytest.raises(DomainError):
        residue_data(5.0)


def test_residue_round_trip():
    for z in -np.logspace(-3, 3, 100):
        r = residue_data(z)
        assert r.integral == pytest.approx(resolvent_closed(z).value, rel=1e-12)
        assert r.quartic_residual < 1e-10


def test_determinant_examples():
    assert determinant(0.0, -3.0) == 1.0
    mu = 2 * math.pi / I_MINUS4
    assert mu == pytest.approx(5.1488, abs=1e-4)
    assert abs(determinant(mu, -4.0)) < 1e-12
    for mu in (-7.0, 0.3, 12.0):
        assert abs(determinant(mu, 1e8) - 1) < 1e-6
        assert abs(determinant(mu, -1e8) - 1) < 1e-6


def test_ddz_signs():
    assert ddz_determinant(1.0, -2.0) < 0
    assert ddz_determinant(-1.0, 6.0) > 0
    assert ddz_determinant(2.0, 7.0) < 0
    assert ddz_determinant(-2.0, -7.0) > 0


@pytest.mark.parametrize("mu,z", [(1.0, -4.0), (-2.5, 6.0), (0.7, -0.05), (-3.0, 4.2)])
def test_ddz_matches_finite_difference(mu, z):
    h = 1e-5 * max(1.0, abs(z))
    fd = (determinant(mu, z + h) - determinant(mu, z - h)) / (2 * h)
    assert ddz_determinant(mu, z) == pytest.approx(fd, rel=1e-7)


def test_secular_value_bundle():
    v = secular_value(1.0, -4.0)
    assert v.delta == determinant(1.0, -4.0)
    assert v.ddz == ddz_determinant(1.0, -4.0)


def test_resolvent_sign_pattern_on_grid():
    zs = np.concatenate([-np.logspace(-3, 5, 50), 4 + np.logspace(-3, 5, 50)])
    for z in zs:
        v = resolvent_closed(z).value
        assert (v > 0) == (z < 0)
