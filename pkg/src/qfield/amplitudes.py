"""Field-eigenstate overlap amplitudes, always as ratios to the vacuum.

Projecting quantum states onto a field eigenvector |Psi, t> involves a
functional normalization that never survives into observables, so every
routine here returns the ratio <Psi,t|state> / <Psi,t|0>.  The eigenvalue
is carried in reduced form psi = sqrt(2 omega) Psi with real coefficients
on the waist reference plane (z = 0), where the basis functions are real
and the two contractions

    (psi, phi) = sum_mu psi_mu phi_mu        (inner product, psi real)
    [psi phi]  = sum_mu psi_mu phi_mu        (functional product)

coincide.  With A = [psi phi] and B = [phi phi], the closed forms are

    vacuum weight    e^{-(psi, psi)}
    number state     e^{-iN omega t} H_N(A / sqrt(2B)) (sqrt(2B))^N / (2^N sqrt(N!))
    coherent state   e^{-|a|^2/2} exp(a e^{-i omega t} A - a^2 e^{-2i omega t} B / 2)

with the principal branch of sqrt(2B), and the N-photon expression going
over to A^N / sqrt(N!) e^{-iN omega t} as B -> 0 (the Hermite leading term).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .beamsplitter import SplitterCoefficients, reflect_mode_vector
from .geometry import hermite_poly
from .modespace import ModeVector, functional_product, inner_product, synthesize

__all__ = [
    "FieldConfiguration",
    "TwoPortFieldConfiguration",
    "vacuum_relative_weight",
    "number_state_ratio",
    "coherent_state_ratio",
    "two_port_single_photon_ratio",
    "two_port_coherent_ratio",
    "single_photon_wavefunction",
]

REAL_TOL = 1e-12
DEGENERATE_SQUARE_TOL = 1e-12


@dataclass(frozen=True)
class FieldConfiguration:
    """A field eigenvalue in reduced form: real coefficients of psi on the
    waist plane, plus the angular frequency.

    ``convention`` records how the caller specified the field; storage is
    always reduced.  Use :meth:`from_physical` for a physical-amplitude
    Psi, which is scaled by sqrt(2 omega) on entry.
    """

    psi: ModeVector
    omega: float | None = None
    convention: str = field(default="reduced_psi")

    def __post_init__(self) -> None:
        if self.convention not in ("reduced_psi", "physical_Psi"):
            raise ValueError(f"unknown convention {self.convention!r}")
        worst = float(np.max(np.abs(self.psi.coeffs.imag))) if self.psi.coeffs.size else 0.0
        if worst > REAL_TOL:
            raise ValueError(
                f"eigenvalue coefficients must be real; largest imaginary part {worst:.3e}"
            )
        if self.omega is None:
            object.__setattr__(self, "omega", self.psi.basis.geom.omega)
        elif self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @classmethod
    def from_physical(cls, Psi: ModeVector, omega: float | None = None) -> "FieldConfiguration":
        w = Psi.basis.geom.omega if omega is None else omega
        if w <= 0:
            raise ValueError(f"omega must be positive, got {w}")
        return cls(psi=Psi.scaled(math.sqrt(2.0 * w)), omega=w, convention="physical_Psi")


@dataclass(frozen=True)
class TwoPortFieldConfiguration:
    """Independent eigenvalues seen by the two output ports."""

    port1: FieldConfiguration
    port2: FieldConfiguration

    def __post_init__(self) -> None:
        if self.port1.psi.basis != self.port2.psi.basis:
            raise ValueError("port configurations must share a basis")
        if self.port1.omega != self.port2.omega:
            raise ValueError("port configurations must share omega")

    @property
    def omega(self) -> float:
        return float(self.port1.omega)


def vacuum_relative_weight(cfg: FieldConfiguration) -> float:
    """|<Psi,t|0>|^2 relative to the zero-field configuration: e^{-(psi,psi)}."""
    return math.exp(-cfg.psi.norm_sq)


def number_state_ratio(cfg: FieldConfiguration, phi: ModeVector, N: int, t: float = 0.0) -> complex:
    """<Psi,t|N[phi]> / <Psi,t|0> for the N-photon state in mode phi."""
    if N < 0:
        raise ValueError(f"photon number must be nonnegative, got {N}")
    phi.require_normalized("photon mode phi")
    A = functional_product(cfg.psi, phi)
    B = functional_product(phi, phi)
    phase = cmath.exp(-1j * N * cfg.omega * t)
    if abs(B) < DEGENERATE_SQUARE_TOL:
        return A**N / math.sqrt(math.factorial(N)) * phase
    root = cmath.sqrt(2.0 * B)
    return hermite_poly(N, A / root) * root**N / (2**N * math.sqrt(math.factorial(N))) * phase


def coherent_state_ratio(
    cfg: FieldConfiguration, phi: ModeVector, alpha: complex, t: float = 0.0
) -> complex:
    """<Psi,t|alpha,[phi]> / <Psi,t|0>."""
    phi.require_normalized("coherent mode phi")
    A = functional_product(cfg.psi, phi)
    B = functional_product(phi, phi)
    u = cmath.exp(-1j * cfg.omega * t)
    return cmath.exp(-abs(alpha) ** 2 / 2) * cmath.exp(alpha * u * A - 0.5 * alpha**2 * u**2 * B)


def two_port_single_photon_ratio(
    cfg2: TwoPortFieldConfiguration,
    phi: ModeVector,
    s: SplitterCoefficients,
    t: float = 0.0,
) -> complex:
    """Amplitude ratio for one photon (input mode phi, port 1) behind the
    splitter: [tau (psi1, phi) + rho (psi2, phi~)] e^{-i omega t}.

    The two terms interfere: the photon reaches port 1 with amplitude tau
    in mode phi and port 2 with amplitude rho in the reflected mode.
    """
    phi.require_normalized("photon mode phi")
    phi_r = reflect_mode_vector(phi)
    bracket = s.tau * inner_product(cfg2.port1.psi, phi) + s.rho * inner_product(
        cfg2.port2.psi, phi_r
    )
    return bracket * cmath.exp(-1j * cfg2.omega * t)


def two_port_coherent_ratio(
    cfg2: TwoPortFieldConfiguration,
    phi: ModeVector,
    alpha: complex,
    s: SplitterCoefficients,
    t: float = 0.0,
) -> complex:
    """Amplitude ratio for a coherent input behind the splitter.

    Equals the product of the per-port coherent ratios with amplitudes
    tau*alpha and rho*alpha (the output is an unentangled product); for a
    balanced splitter tau^2 + rho^2 = 0 kills the quadratic exponent and
    the result collapses to e^{-|alpha|^2/2} exp(alpha * single-photon
    ratio), which is asserted rather than trusted.
    """
    phi.require_normalized("coherent mode phi")
    phi_r = reflect_mode_vector(phi)
    u = cmath.exp(-1j * cfg2.omega * t)
    a1, a2 = s.tau * alpha, s.rho * alpha
    linear = a1 * inner_product(cfg2.port1.psi, phi) + a2 * inner_product(cfg2.port2.psi, phi_r)
    quadratic = (a1**2 + a2**2) * functional_product(phi, phi)
    ratio = cmath.exp(-abs(alpha) ** 2 / 2) * cmath.exp(u * linear - 0.5 * u**2 * quadratic)
    if s.is_balanced():
        collapsed = cmath.exp(-abs(alpha) ** 2 / 2) * cmath.exp(
            alpha * two_port_single_photon_ratio(cfg2, phi, s, t)
        )
        if abs(ratio - collapsed) > 1e-12 * max(1.0, abs(ratio)):
            raise ArithmeticError(
                "balanced-splitter collapse identity violated: "
                f"|general - collapsed| = {abs(ratio - collapsed):.3e}"
            )
    return ratio


def single_photon_wavefunction(
    phi: ModeVector, x: float, y: float, z: float, t: float = 0.0, omega: float | None = None
) -> complex:
    """<0| Psi_op(r, t) |1[phi]> = phi(r) e^{-i omega t} / sqrt(2 omega)."""
    phi.require_normalized("photon mode phi")
    w = phi.basis.geom.omega if omega is None else omega
    return synthesize(phi, x, y, z) * cmath.exp(-1j * w * t) / math.sqrt(2.0 * w)
