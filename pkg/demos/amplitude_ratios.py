"""
Field-eigenstate amplitude ratios
=================================

The central objects: given a classical field configuration psi, the
relative amplitude <psi, t | state> / <psi, t | vacuum> for number
states, coherent states, and the two-port single-photon state behind a
splitter. Everything reduces to two scalars, A = [psi phi] and
B = [phi phi].
"""

import math

import numpy as np

from qfield import (
    BeamGeometry,
    FieldConfiguration,
    ModeBasis,
    SplitterCoefficients,
    TwoPortFieldConfiguration,
    coherent_state_ratio,
    number_state_ratio,
    reflect_mode_vector,
    two_port_coherent_ratio,
    two_port_single_photon_ratio,
    vacuum_relative_weight,
)

geom = BeamGeometry(w0=1.0, k=30.0)
basis = ModeBasis(geom, 3)

phi = basis.unit_vector(0, 0)
psi = basis.vector({(0, 0): 0.9, (1, 0): -0.3})
cfg = FieldConfiguration(psi)

print(f"vacuum weight e^-(psi,psi) = {vacuum_relative_weight(cfg):.6f}")

# Number-state ratios for N = 0..4. For this real psi and phi = u00,
# A = 0.9 and B = 1, so the first few have friendly closed forms:
# 1, A, (A^2-1)/sqrt(2), A(A^2-3)/sqrt(6), ...
print("\n N   ratio (t = 0)")
for N in range(5):
    r = number_state_ratio(cfg, phi, N)
    print(f" {N}   {r.real:+.10f}  {r.imag:+.2e}j")
A = 0.9
print(f"check N=2: (A^2 - 1)/sqrt(2) = {(A*A - 1)/math.sqrt(2):+.10f}")

# Time only rotates the phase, N units of omega at a time.
r0 = number_state_ratio(cfg, phi, 3, t=0.0)
r1 = number_state_ratio(cfg, phi, 3, t=0.2)
print(f"\n|ratio| at t=0 vs t=0.2: {abs(r0):.12f} vs {abs(r1):.12f}")
print(f"phase advance: {np.angle(r1 / r0):+.6f} (expect -3 omega t = {-3 * geom.omega * 0.2 % (2*math.pi) - 2*math.pi:+.6f})")

# The coherent ratio is the generating function of the number ratios.
alpha = 0.25
lhs = coherent_state_ratio(cfg, phi, alpha)
rhs = math.exp(-alpha * alpha / 2) * sum(
    alpha**N / math.sqrt(math.factorial(N)) * number_state_ratio(cfg, phi, N)
    for N in range(12)
)
print(f"\ncoherent ratio vs its number-state series: |diff| = {abs(lhs - rhs):.2e}")

# Two-port case: one photon meets a balanced splitter, and the ratio
# interferes a transmitted overlap with a reflected one.
psi2 = basis.vector({(0, 1): 0.7})
cfg2 = TwoPortFieldConfiguration(FieldConfiguration(psi), FieldConfiguration(psi2))
bal = SplitterCoefficients.balanced()
two = two_port_single_photon_ratio(cfg2, phi, bal)
print(f"\ntwo-port single photon ratio = {two:+.6f}")

# phi~ reaches port 2; since psi2 has only an m = 1 component and phi is
# even, the reflected term vanishes and only transmission survives:
print(f"  reflected overlap   = {np.vdot(psi2.coeffs, reflect_mode_vector(phi).coeffs):+.3f}")

# For the balanced splitter, the coherent two-port ratio collapses onto
# exp(alpha * single-photon ratio) - the library asserts this identity
# internally every time it evaluates the general formula.
co = two_port_coherent_ratio(cfg2, phi, alpha, bal)
collapsed = math.exp(-alpha * alpha / 2) * np.exp(alpha * two)
print(f"coherent two-port vs collapse: |diff| = {abs(co - collapsed):.2e}")
