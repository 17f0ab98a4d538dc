"""Beam geometry and Hermite-Gauss mode functions.

Everything downstream is built on the paraxial Hermite-Gauss family

    phi_n(x, z) = pi^(-1/4) (2^n n!)^(-1/2) x0^(-1/2) H_n(x/x0) e^(-(x/x0)^2/2)
                  * e^(i/2 (z/z0)(x/x0)^2) * e^(-i(n+1/2) arctan(z/z0)),

with x0 = x_scale(z) = w0 sqrt((1 + z^2/z0^2)/2) and Rayleigh length
z0 = k w0^2 / 2.  The two-dimensional modes are separable products

    u_(n,m)(x, y, z) = phi_n(x, z) phi_m(y, z) e^(ikz),

orthonormal on every transverse plane.  Units are natural (hbar = c = 1),
so the angular frequency equals the wavenumber.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BeamGeometry",
    "ModeIndex",
    "hermite_poly",
    "hermite_poly_sequence",
    "mode_1d",
    "mode_1d_table",
    "mode_2d",
    "paraxial_residual",
]


@dataclass(frozen=True)
class BeamGeometry:
    """Gaussian-beam geometry: minimum waist ``w0`` and wavenumber ``k``.

    Derived quantities:

    - Rayleigh length ``z0 = k * w0**2 / 2``
    - transverse scale ``x_scale(z) = w0 * sqrt((1 + (z/z0)**2) / 2)``,
      equal to ``w0/sqrt(2)`` at the waist
    - angular frequency ``omega``; under the natural-units convention
      (c = 1, the only one supported) ``omega == k``.
    """

    w0: float
    k: float
    c_convention: str = "natural"

    def __post_init__(self) -> None:
        if not (self.w0 > 0.0 and math.isfinite(self.w0)):
            raise ValueError(f"beam waist must be positive and finite, got {self.w0}")
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError(f"wavenumber must be positive and finite, got {self.k}")
        if self.c_convention != "natural":
            raise ValueError(
                f"unsupported c convention {self.c_convention!r}; "
                "only 'natural' (c = 1, omega = k) is implemented"
            )

    @property
    def z0(self) -> float:
        """Rayleigh length."""
        return 0.5 * self.k * self.w0**2

    @property
    def omega(self) -> float:
        """Angular frequency; equals k in natural units."""
        return self.k

    def x_scale(self, z: float) -> float:
        """Transverse length scale at height ``z`` (w0/sqrt(2) at the waist)."""
        zeta = z / self.z0
        return self.w0 * math.sqrt(0.5 * (1.0 + zeta * zeta))


@dataclass(frozen=True)
class ModeIndex:
    """Transverse mode index pair (n, m), both nonnegative."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.m < 0:
            raise ValueError(f"mode indices must be nonnegative, got ({self.n}, {self.m})")

    def __iter__(self):
        yield self.n
        yield self.m

    @property
    def reflection_sign(self) -> int:
        """Parity factor (-1)**m picked up under y -> -y."""
        return -1 if self.m % 2 else 1


def hermite_poly(n, x):
    """Physicists' Hermite polynomial H_n(x) by upward recurrence.

    Parameters
    ----------
    n : int
        Polynomial order, >= 0.
    x : float, complex or ndarray
        Evaluation point(s).  Complex arguments are supported (the
        amplitude formulas evaluate H_N at complex arguments).

    Returns
    -------
    Same shape as ``x``.  Uses H_{k+1} = 2x H_k - 2k H_{k-1}, which is
    stable for the orders used here (n up to a few tens); for extreme
    (n, x) the result may overflow to inf, which is acceptable.
    """
    if n < 0:
        raise ValueError(f"Hermite order must be nonnegative, got {n}")
    x = np.asarray(x)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev[()] if h_prev.ndim == 0 else h_prev
    h = 2.0 * x
    for kk in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * kk * h_prev, h
    return h[()] if np.ndim(h) == 0 else h


def hermite_poly_sequence(n_max: int, x) -> np.ndarray:
    """All of H_0(x) .. H_{n_max}(x) stacked along a leading axis."""
    x = np.asarray(x)
    out = np.empty((n_max + 1,) + x.shape, dtype=x.dtype if x.dtype.kind == "c" else float)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * x
    for kk in range(1, n_max):
        out[kk + 1] = 2.0 * x * out[kk] - 2.0 * kk * out[kk - 1]
    return out


def _phase_factors(n, x_over_x0, z: float, geom: BeamGeometry):
    """Chirp and Gouy phase of order n at reduced coordinate x/x0."""
    zeta = z / geom.z0
    chirp = np.exp(0.5j * zeta * x_over_x0**2)
    gouy = np.exp(-1j * (n + 0.5) * math.atan(zeta))
    return chirp * gouy


def mode_1d(n: int, x, z: float, geom: BeamGeometry):
    """One-dimensional Hermite-Gauss mode phi_n(x, z).

    Parameters
    ----------
    n : int
        Mode order.
    x : float or ndarray
        Transverse coordinate(s).
    z : float
        Propagation height.
    geom : BeamGeometry

    Returns
    -------
    complex or complex ndarray (complex even at z = 0, where the value
    happens to be real).
    """
    if n < 0:
        raise ValueError(f"mode order must be nonnegative, got {n}")
    xs = geom.x_scale(z)
    u = np.asarray(x, dtype=float) / xs
    norm = math.pi ** (-0.25) / math.sqrt((2.0**n) * math.factorial(n) * xs)
    value = norm * hermite_poly(n, u) * np.exp(-0.5 * u * u) * _phase_factors(n, u, z, geom)
    return complex(value) if np.ndim(value) == 0 else value


def mode_1d_table(n_max: int, x, z: float, geom: BeamGeometry) -> np.ndarray:
    """phi_n(x, z) for all n <= n_max at once; shape (n_max+1,) + x.shape.

    Shares the Hermite recurrence across orders, which is what the
    decomposition and synthesis routines batch over.
    """
    xs = geom.x_scale(z)
    u = np.atleast_1d(np.asarray(x, dtype=float)) / xs
    herm = hermite_poly_sequence(n_max, u)
    zeta = z / geom.z0
    envelope = np.exp(-0.5 * u * u) * np.exp(0.5j * zeta * u * u)
    gouy = np.exp(-1j * (np.arange(n_max + 1) + 0.5) * math.atan(zeta))
    norms = np.array(
        [math.pi ** (-0.25) / math.sqrt((2.0**n) * math.factorial(n) * xs) for n in range(n_max + 1)]
    )
    table = herm * envelope
    table = table * (norms * gouy)[(...,) + (np.newaxis,) * u.ndim]
    return table


def mode_2d(mu: ModeIndex, x, y, z: float, geom: BeamGeometry):
    """Two-dimensional mode u_mu(x, y, z) = phi_n(x,z) phi_m(y,z) e^{ikz}."""
    plane_wave = np.exp(1j * geom.k * z)
    value = mode_1d(mu.n, x, z, geom) * mode_1d(mu.m, y, z, geom) * plane_wave
    return complex(value) if np.ndim(value) == 0 else value


def _chirped_envelope(mu: ModeIndex, x, y, z, geom: BeamGeometry):
    # u_mu without the e^{ikz} carrier: the quantity that satisfies the
    # paraxial equation (d_xx + d_yy + 2ik d_z) phi = 0.
    return mode_1d(mu.n, x, z, geom) * mode_1d(mu.m, y, z, geom)


def paraxial_residual(mu: ModeIndex, x: float, y: float, z: float, geom: BeamGeometry, h):
    """Central finite-difference residual of the paraxial wave equation.

    Applies (d^2/dx^2 + d^2/dy^2 + 2ik d/dz) to the chirped envelope
    phi_mu = u_mu e^{-ikz} with second-order central differences and
    returns the complex residual, which converges to zero as O(h^2).

    ``h`` may be a single step length (used for all three axes) or a
    triple (hx, hy, hz).
    """
    if np.isscalar(h):
        hx = hy = hz = float(h)
    else:
        hx, hy, hz = (float(v) for v in h)
    if hx <= 0.0 or hy <= 0.0 or hz <= 0.0:
        raise ValueError(f"finite-difference steps must be positive, got {(hx, hy, hz)}")

    f = _chirped_envelope
    center = f(mu, x, y, z, geom)
    d2x = (f(mu, x + hx, y, z, geom) + f(mu, x - hx, y, z, geom) - 2.0 * center) / hx**2
    d2y = (f(mu, x, y + hy, z, geom) + f(mu, x, y - hy, z, geom) - 2.0 * center) / hy**2
    dz = (f(mu, x, y, z + hz, geom) - f(mu, x, y, z - hz, geom)) / (2.0 * hz)
    return d2x + d2y + 2j * geom.k * dz
