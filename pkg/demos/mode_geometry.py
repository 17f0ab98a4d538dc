"""
Beam geometry and the mode zoo
==============================

A quick tour of the transverse mode family: waist scaling, Gouy phase,
reflection parity, and the orthonormality that everything else rests on.
Run it; it prints, it does not plot.
"""

import numpy as np

from qfield import (
    BeamGeometry,
    ModeBasis,
    ModeIndex,
    QuadratureRule,
    basis_gram,
    mode_1d,
    mode_2d,
)

geom = BeamGeometry(w0=1.0, k=30.0)
print(f"waist w0 = {geom.w0}, wave number k = {geom.k}")
print(f"collimation length z0 = k w0^2 / 2 = {geom.z0}")
print(f"frequency in natural units: omega = k = {geom.omega}")

# The transverse length scale grows away from the focus. At z = z0 the
# beam is wider by sqrt(2)... of the *intensity* scale; the coordinate
# scale used by the modes carries its own sqrt(1/2) convention:
for z in (0.0, geom.z0, 3 * geom.z0):
    print(f"  x_scale(z = {z:5.1f}) = {geom.x_scale(z):.6f}")

# Peak of the ground mode at the origin, a number worth recognizing:
# pi^(-1/4) * 2^(1/4) / sqrt(x_scale) with x_scale(0) = w0/sqrt(2).
print(f"\nphi_0(0, z=0) = {mode_1d(0, 0.0, 0.0, geom):.15f}")

# Gouy phase: mode (n, m) rotates by (n + m + 1) * arctan(z/z0) relative
# to a plane wave. Watch the phase of the (1, 0) mode drift with z.
x, y = 0.4, 0.0
for z in (0.0, 0.5 * geom.z0, geom.z0):
    val = mode_2d(ModeIndex(1, 0), x, y, z, geom)
    print(f"  arg u_10({x}, {y}, z={z:5.2f}) = {np.angle(val):+.6f} rad")

# Reflection parity: flipping y multiplies u_{n,m} by (-1)^m. This is
# the sign the beam splitter hands to every reflected mode.
mu = ModeIndex(2, 3)
flipped = mode_2d(mu, 0.7, -0.3, 0.0, geom)
signed = mu.reflection_sign * mode_2d(mu, 0.7, 0.3, 0.0, geom)
print(f"\nparity check for (n, m) = (2, 3): |flip - sign*orig| = {abs(flipped - signed):.2e}")

# Orthonormality at any plane. The Gram matrix of the basis, computed by
# Gauss-Hermite quadrature, is the identity even far from the waist -
# the chirp and Gouy phases conspire to keep inner products z-invariant.
basis = ModeBasis(geom, 5)
quad = QuadratureRule.gauss_hermite(28)
for z in (0.0, 2.0 * geom.z0):
    G = basis_gram(basis, z, quad)
    err = np.max(np.abs(G - np.eye(basis.size)))
    print(f"Gram deviation from identity at z = {z:4.1f}: {err:.2e}")
