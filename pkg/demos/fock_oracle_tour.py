"""
The dense Fock-space oracle
===========================

Everything analytic in this library can be brute-forced on a truncated
Fock space: build ladder matrices, exponentiate the splitter generator,
and compare. This is the machinery the `qfield verify` suites run; here
it is used interactively.
"""

import numpy as np

from qfield import BeamGeometry, ModeBasis, ModeIndex, SplitterCoefficients, reflect_mode_vector
from qfield.fock import (
    FockSpace,
    bs_unitary,
    coherent_state,
    field_operator_matrix,
    number_state,
    projected_ladder,
    total_number_operator,
)

geom = BeamGeometry(w0=1.0, k=30.0)
basis = ModeBasis(geom, 1)

# Two ports, two transverse modes each, at most 3 photons per mode:
# a 256-dimensional playground.
labels = ((1, ModeIndex(0, 0)), (1, ModeIndex(0, 1)), (2, ModeIndex(0, 0)), (2, ModeIndex(0, 1)))
space = FockSpace(mode_labels=labels, cutoff=3)
print(f"modes: {space.n_modes}, dim = {space.dim}")

# A photon in a superposition mode, then the splitter unitary. The
# construction self-checks S^dag a S against the analytic operator
# transformation before returning.
phi = basis.vector({(0, 0): 0.6, (0, 1): 0.8})
s = SplitterCoefficients.balanced()
S = bs_unitary(space, s)
out = S @ number_state(space, phi, 1, 1)

want = s.tau * number_state(space, phi, 1, 1) + s.rho * number_state(
    space, reflect_mode_vector(phi), 2, 1
)
print(f"single-photon output fidelity: {abs(np.vdot(want, out)):.15f}")

# Photon number is conserved by the splitter.
Ntot = total_number_operator(space)
print(f"<N> before: {np.vdot(number_state(space, phi, 1, 1), Ntot @ number_state(space, phi, 1, 1)).real:.12f}")
print(f"<N> after:  {np.vdot(out, Ntot @ out).real:.12f}")

# One photon never fires both counters: the joint number expectation
# vanishes while the singles add up to one.
a1, a1d = projected_ladder(space, phi, 1)
a2, a2d = projected_ladder(space, reflect_mode_vector(phi), 2)
n1 = np.vdot(out, (a1d @ a1) @ out).real
n2 = np.vdot(out, (a2d @ a2) @ out).real
n12 = abs(np.vdot(out, (a1d @ a1) @ (a2d @ a2) @ out))
print(f"\nsingles: n1 = {n1:.6f}, n2 = {n2:.6f}, joint <n1 n2> = {n12:.2e}")

# Coherent states stay coherent (and unentangled) through the splitter.
pair = FockSpace(mode_labels=((1, ModeIndex(0, 0)), (2, ModeIndex(0, 0))), cutoff=6)
alpha = 0.4
co_out = bs_unitary(pair, s) @ coherent_state(pair, basis.unit_vector(0, 0), 1, alpha)
a_1, _ = projected_ladder(pair, basis.unit_vector(0, 0), 1)
resid = np.linalg.norm(a_1 @ co_out - (s.tau * alpha) * co_out)
print(f"\ncoherent output is an eigenvector of a_1: residual {resid:.2e} (truncation tail)")

# The field operator's one-photon matrix element is the mode function
# itself, scaled by 1/sqrt(2 omega).
x, y = 0.3, -0.2
Psi_op = field_operator_matrix(space, geom, x, y, 0.0, port=1)
elem = np.vdot(space.vacuum(), Psi_op @ number_state(space, phi, 1, 1))
print(f"<0|Psi(r)|1[phi]> = {elem:+.8f}")
