"""Mode functions against independent oracles.

Hermite values are checked against numpy's own evaluator and against
hand-expanded low-order polynomials; normalization and orthogonality are
checked with adaptive scipy quadrature, which shares no code with the
Gauss-Hermite machinery used elsewhere in the package.
"""

import math

import numpy as np
import pytest
from numpy.polynomial import hermite as H
from scipy.integrate import quad

from qfield import BeamGeometry, ModeIndex, hermite_poly, hermite_poly_sequence, mode_1d, mode_2d, paraxial_residual

EXACT = 1e-12

# pi**(-1/4) * 2**(1/4): peak of the ground mode at the waist for w0 = 1
PHI0_PEAK = 0.8932438417380023
# sqrt(2/pi): the 2D ground mode at the origin, w0 = 1
U00_PEAK = 0.7978845608028654


def test_hermite_against_numpy(rng):
    x = rng.uniform(-4.0, 4.0, size=40)
    for n in range(13):
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        ref = H.hermval(x, coeffs)
        # rtol alone misfires near polynomial roots; anchor to the scale of H_n
        np.testing.assert_allclose(hermite_poly(n, x), ref, rtol=1e-12, atol=1e-13 * np.max(np.abs(ref)))


def test_hermite_low_orders_exact():
    assert hermite_poly(0, 0.7) == 1.0
    assert hermite_poly(1, 0.7) == pytest.approx(1.4, abs=EXACT)
    assert hermite_poly(2, 0.7) == pytest.approx(4 * 0.49 - 2, abs=EXACT)
    assert hermite_poly(3, 1.0) == pytest.approx(-4.0, abs=EXACT)
    # H4 = 16x^4 - 48x^2 + 12 happens to equal 1 at x = 1/2
    assert hermite_poly(4, 0.5) == pytest.approx(1.0, abs=EXACT)
    assert hermite_poly(5, 0.3) == pytest.approx(31.75776, abs=1e-10)


def test_hermite_complex_argument():
    z = 1.0 + 2.0j
    assert hermite_poly(2, z) == pytest.approx(4 * z * z - 2, abs=EXACT)


def test_hermite_sequence_consistent(rng):
    x = rng.uniform(-3.0, 3.0, size=11)
    seq = hermite_poly_sequence(8, x)
    assert seq.shape == (9, 11)
    for n in range(9):
        np.testing.assert_allclose(seq[n], hermite_poly(n, x), rtol=1e-13)


def test_waist_peak_values(geom):
    assert mode_1d(0, 0.0, 0.0, geom) == pytest.approx(PHI0_PEAK, abs=EXACT)
    assert mode_2d(ModeIndex(0, 0), 0.0, 0.0, 0.0, geom) == pytest.approx(U00_PEAK, abs=EXACT)


def test_x_scale(geom):
    assert geom.x_scale(0.0) == pytest.approx(1 / math.sqrt(2), abs=EXACT)
    assert geom.x_scale(geom.z0) == pytest.approx(geom.w0, abs=EXACT)
    assert geom.x_scale(2 * geom.z0) == pytest.approx(geom.w0 * math.sqrt(2.5), abs=EXACT)
    assert geom.omega == geom.k
    assert geom.z0 == pytest.approx(0.5 * geom.k * geom.w0**2, abs=EXACT)


@pytest.mark.parametrize("n", [0, 3])
@pytest.mark.parametrize("z_frac", [0.0, 0.7])
def test_unit_norm_by_adaptive_quadrature(geom_alt, n, z_frac):
    z = z_frac * geom_alt.z0
    val, err = quad(lambda x: abs(mode_1d(n, x, z, geom_alt)) ** 2, -10, 10, limit=200)
    assert val == pytest.approx(1.0, abs=max(1e-10, 10 * err))


def test_orthogonality_by_adaptive_quadrature(geom):
    z = 0.4 * geom.z0
    re, _ = quad(lambda x: (np.conj(mode_1d(1, x, z, geom)) * mode_1d(3, x, z, geom)).real, -10, 10, limit=200)
    im, _ = quad(lambda x: (np.conj(mode_1d(1, x, z, geom)) * mode_1d(3, x, z, geom)).imag, -10, 10, limit=200)
    assert abs(complex(re, im)) < 1e-10


def test_propagation_phases_carry_no_magnitude(geom):
    """Away from the waist the profile only rescales: |phi_n(x, z)| equals
    sqrt(xs0/xs) |phi_n(x xs0/xs, 0)|.  Gouy and chirp factors must be
    pure phases."""
    xs0 = geom.x_scale(0.0)
    for z in (0.3 * geom.z0, 2.0 * geom.z0):
        xs = geom.x_scale(z)
        x = np.linspace(-3.0, 3.0, 13)
        lhs = np.abs(mode_1d(4, x, z, geom))
        rhs = math.sqrt(xs0 / xs) * np.abs(mode_1d(4, x * xs0 / xs, 0.0, geom))
        np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_reflection_parity(geom):
    pts = np.linspace(-1.9, 1.9, 5)
    for mu in (ModeIndex(0, 0), ModeIndex(2, 3), ModeIndex(1, 4)):
        for x in pts:
            for y in pts:
                flipped = mode_2d(mu, x, -y, 1.2, geom)
                direct = mode_2d(mu, x, y, 1.2, geom)
                assert flipped == pytest.approx(mu.reflection_sign * direct, abs=1e-12)


def test_mode_index_properties():
    mu = ModeIndex(2, 5)
    n, m = mu
    assert (n, m) == (2, 5)
    assert mu.reflection_sign == -1
    assert ModeIndex(2, 4).reflection_sign == 1
    with pytest.raises(ValueError):
        ModeIndex(-1, 0)


@pytest.mark.parametrize("mu", [ModeIndex(0, 0), ModeIndex(1, 1), ModeIndex(3, 2)])
def test_paraxial_residual_second_order(geom, mu):
    """The modes solve the paraxial equation, so the finite-difference
    residual is pure discretization error and must shrink ~4x per halving."""
    pt = (0.4, -0.3, 0.6 * geom.z0)
    res = [abs(paraxial_residual(mu, *pt, geom, h)) for h in (2e-3, 1e-3, 5e-4)]
    assert res[0] < 1e-4
    assert res[0] / res[1] == pytest.approx(4.0, rel=0.15)
    assert res[1] / res[2] == pytest.approx(4.0, rel=0.15)


def test_paraxial_residual_anisotropic_steps(geom):
    iso = paraxial_residual(ModeIndex(1, 0), 0.2, 0.1, 1.0, geom, 1e-3)
    aniso = paraxial_residual(ModeIndex(1, 0), 0.2, 0.1, 1.0, geom, (1e-3, 1e-3, 1e-3))
    assert iso == pytest.approx(aniso, abs=0.0)


def test_invalid_arguments(geom):
    with pytest.raises(ValueError):
        BeamGeometry(w0=0.0, k=30.0)
    with pytest.raises(ValueError):
        BeamGeometry(w0=1.0, k=-1.0)
    with pytest.raises(ValueError):
        BeamGeometry(w0=1.0, k=30.0, c_convention="si")
    with pytest.raises(ValueError):
        paraxial_residual(ModeIndex(0, 0), 0.0, 0.0, 0.0, geom, 0.0)
    with pytest.raises(ValueError):
        paraxial_residual(ModeIndex(0, 0), 0.0, 0.0, 0.0, geom, (1e-3, -1e-3, 1e-3))
