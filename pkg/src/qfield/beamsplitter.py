"""Lossless symmetric beam splitter acting on mode-coefficient vectors.

The two ports see mirrored transverse frames: a reflection flips y, which
multiplies the (n, m) mode by (-1)^m.  All transformations below act on
coefficient vectors exactly (no resampling), with the parity sign folded
in per mode.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .modespace import ModeVector, _require_same_basis

__all__ = [
    "SplitterCoefficients",
    "TwoPortModeVectors",
    "SinglePhotonOutput",
    "CoherentOutput",
    "reflect_mode_vector",
    "operator_transform",
    "inverse_transform",
    "single_photon_output",
    "coherent_output",
    "single_photon_output_to_json",
    "coherent_output_to_json",
]

CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class SplitterCoefficients:
    """Reflection/transmission pair of a lossless symmetric splitter.

    Validity requires |rho|^2 + |tau|^2 = 1 and Re(rho* tau) = 0; both are
    enforced at construction to 1e-12.
    """

    rho: complex
    tau: complex

    def __post_init__(self) -> None:
        rho = complex(self.rho)
        tau = complex(self.tau)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "tau", tau)
        unit = abs(rho) ** 2 + abs(tau) ** 2 - 1.0
        if abs(unit) > CONSTRAINT_TOL:
            raise ValueError(f"|rho|^2 + |tau|^2 deviates from 1 by {unit:.3e}")
        cross = (rho.conjugate() * tau + rho * tau.conjugate()).real
        if abs(cross) > CONSTRAINT_TOL:
            raise ValueError(f"rho* tau + rho tau* = {cross:.3e}, must vanish")

    @classmethod
    def balanced(cls) -> "SplitterCoefficients":
        """Canonical 50:50 convention: tau = 1/sqrt(2), rho = i/sqrt(2)."""
        return cls(rho=1j / math.sqrt(2.0), tau=1.0 / math.sqrt(2.0))

    @classmethod
    def from_transmission(cls, tau_abs: float, phase: float = 0.0) -> "SplitterCoefficients":
        """Exactly-valid coefficients from |tau| in [0, 1]: tau = |tau| e^{i phase},
        rho = i sqrt(1 - |tau|^2) e^{i phase}."""
        if not 0.0 <= tau_abs <= 1.0:
            raise ValueError(f"|tau| must lie in [0, 1], got {tau_abs}")
        carrier = cmath.exp(1j * phase)
        return cls(rho=1j * math.sqrt(1.0 - tau_abs * tau_abs) * carrier, tau=tau_abs * carrier)

    @property
    def conjugated(self) -> "SplitterCoefficients":
        """(rho*, tau*): the coefficients of the inverse transformation."""
        return SplitterCoefficients(rho=self.rho.conjugate(), tau=self.tau.conjugate())

    def is_balanced(self, tol: float = CONSTRAINT_TOL) -> bool:
        return abs(abs(self.rho) ** 2 - 0.5) <= tol and abs(abs(self.tau) ** 2 - 0.5) <= tol


@dataclass(frozen=True)
class TwoPortModeVectors:
    """Coefficient vectors seen by the two ports, on a shared basis."""

    port1: ModeVector
    port2: ModeVector

    def __post_init__(self) -> None:
        _require_same_basis(self.port1, self.port2)

    @property
    def combined_norm_sq(self) -> float:
        return self.port1.norm_sq + self.port2.norm_sq


@dataclass(frozen=True)
class SinglePhotonOutput:
    """tau |1[phi]>_1 |0>_2 + rho |0>_1 |1[phi~]>_2, componentwise."""

    amp1: complex
    mode1: ModeVector
    amp2: complex
    mode2: ModeVector


@dataclass(frozen=True)
class CoherentOutput:
    """Product of coherent states |alpha1, [mode1]>_1 |alpha2, [mode2]>_2."""

    alpha1: complex
    mode1: ModeVector
    alpha2: complex
    mode2: ModeVector


def reflect_mode_vector(v: ModeVector) -> ModeVector:
    """Image of the y-inversion: coefficient (n, m) picks up (-1)^m."""
    return ModeVector(v.basis, v.coeffs * v.basis.reflection_signs())


def operator_transform(a: TwoPortModeVectors, s: SplitterCoefficients) -> TwoPortModeVectors:
    """Map input-port vectors to output-port vectors.

    Per mode: b1 = tau a1 + rho (-1)^m a2 and b2 = rho (-1)^m a1 + tau a2.
    The per-mode block is unitary, so the combined norm is preserved.
    """
    signs = a.port1.basis.reflection_signs()
    b1 = s.tau * a.port1.coeffs + s.rho * signs * a.port2.coeffs
    b2 = s.rho * signs * a.port1.coeffs + s.tau * a.port2.coeffs
    basis = a.port1.basis
    return TwoPortModeVectors(ModeVector(basis, b1), ModeVector(basis, b2))


def inverse_transform(b: TwoPortModeVectors, s: SplitterCoefficients) -> TwoPortModeVectors:
    """Undo :func:`operator_transform`: same map with (rho*, tau*)."""
    return operator_transform(b, s.conjugated)


def single_photon_output(phi: ModeVector, s: SplitterCoefficients) -> SinglePhotonOutput:
    """Output state of one photon entering port 1 in mode phi.

    The photon is found in port 1 (mode phi, amplitude tau) or in port 2
    (reflected mode phi~, amplitude rho) — an entangled superposition, not
    a product.
    """
    phi.require_normalized("single-photon input mode")
    return SinglePhotonOutput(amp1=s.tau, mode1=phi, amp2=s.rho, mode2=reflect_mode_vector(phi))


def coherent_output(alpha: complex, phi: ModeVector, s: SplitterCoefficients) -> CoherentOutput:
    """Coherent state alpha in mode phi at port 1 splits into the product
    |tau alpha, [phi]>_1 |rho alpha, [phi~]>_2 — no entanglement."""
    phi.require_normalized("coherent input mode")
    return CoherentOutput(
        alpha1=s.tau * alpha, mode1=phi, alpha2=s.rho * alpha, mode2=reflect_mode_vector(phi)
    )


def _port_json(amp: complex, mode: ModeVector) -> dict:
    from .modespace import mode_vector_to_json

    return {"amp": [float(amp.real), float(amp.imag)], "mode": mode_vector_to_json(mode)}


def single_photon_output_to_json(out: SinglePhotonOutput) -> dict:
    return {"port1": _port_json(out.amp1, out.mode1), "port2": _port_json(out.amp2, out.mode2)}


def coherent_output_to_json(out: CoherentOutput) -> dict:
    return {"port1": _port_json(out.alpha1, out.mode1), "port2": _port_json(out.alpha2, out.mode2)}
