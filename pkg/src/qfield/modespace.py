"""Truncated Hermite-Gauss mode space.

A field is represented either by its coefficient vector over the square
index set {(n, m): 0 <= n, m <= n_max} (:class:`ModeVector`, row-major in
(n, m)) or by a callable sampled on demand (:class:`SampledField`).  Two
bilinear forms appear throughout:

- the inner product ``(f, g) = integral f* g d^2x``, which conjugates the
  first argument and is z-invariant on coefficient vectors;
- the functional product ``[f g] = integral f g d^2x`` with *no*
  conjugation, which is genuinely plane-dependent (the chirp phases add
  instead of cancelling) and reduces to the plain coefficient contraction
  only on the waist plane z = 0 where the modes are real.

Numerical integrals use tensor-product Gauss-Hermite quadrature rescaled
by the transverse length scale x_scale(z), whose weight e^{-(x/x_scale)^2}
is exactly the product of two mode envelopes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .geometry import BeamGeometry, ModeIndex, mode_1d_table

__all__ = [
    "ModeBasis",
    "ModeVector",
    "QuadratureRule",
    "QuadraturePolicyWarning",
    "SampledField",
    "inner_product",
    "functional_product",
    "decompose",
    "synthesize",
    "completeness_kernel",
    "basis_gram",
    "default_quadrature_order",
    "mode_vector_to_json",
    "mode_vector_from_json",
    "mode_vector_to_csv",
    "mode_vector_from_csv",
]

NORMALIZATION_TOL = 1e-9


class QuadraturePolicyWarning(UserWarning):
    """Raised (as a warning) when a decomposition runs below the default
    quadrature-order policy Q >= 2*n_max + 16."""


def default_quadrature_order(n_max: int) -> int:
    """Default policy: enough nodes for degree-2*n_max integrands plus margin."""
    return 2 * n_max + 16


@dataclass(frozen=True)
class ModeBasis:
    """Square truncation of the Hermite-Gauss basis: 0 <= n, m <= n_max.

    The index set is ordered row-major by (n, m) — index = n*(n_max+1) + m —
    and that ordering is part of the public file-format contract.
    """

    geom: BeamGeometry
    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 0:
            raise ValueError(f"n_max must be nonnegative, got {self.n_max}")

    @property
    def size(self) -> int:
        return (self.n_max + 1) ** 2

    def index_of(self, n: int, m: int) -> int:
        if not (0 <= n <= self.n_max and 0 <= m <= self.n_max):
            raise IndexError(f"mode ({n},{m}) outside basis truncation n_max={self.n_max}")
        return n * (self.n_max + 1) + m

    def indices(self) -> list[ModeIndex]:
        return [ModeIndex(n, m) for n in range(self.n_max + 1) for m in range(self.n_max + 1)]

    def reflection_signs(self) -> np.ndarray:
        """(-1)**m for every basis entry, row-major."""
        m = np.tile(np.arange(self.n_max + 1), self.n_max + 1)
        return np.where(m % 2 == 0, 1.0, -1.0)

    def zero_vector(self) -> "ModeVector":
        return ModeVector(self, np.zeros(self.size, dtype=complex))

    def unit_vector(self, n: int, m: int) -> "ModeVector":
        c = np.zeros(self.size, dtype=complex)
        c[self.index_of(n, m)] = 1.0
        return ModeVector(self, c)

    def vector(self, entries) -> "ModeVector":
        """Build a ModeVector from a full coefficient array or a
        {(n, m): coefficient} mapping (missing entries are zero)."""
        if isinstance(entries, dict):
            c = np.zeros(self.size, dtype=complex)
            for (n, m), val in entries.items():
                c[self.index_of(n, m)] = val
            return ModeVector(self, c)
        arr = np.asarray(entries, dtype=complex)
        if arr.shape != (self.size,):
            raise ValueError(f"expected {self.size} coefficients, got shape {arr.shape}")
        return ModeVector(self, arr.copy())


@dataclass(frozen=True)
class ModeVector:
    """Complex coefficient vector over a :class:`ModeBasis` (immutable)."""

    basis: ModeBasis
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.shape != (self.basis.size,):
            raise ValueError(
                f"coefficient vector has shape {arr.shape}, basis needs ({self.basis.size},)"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficient vector contains non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.norm_sq - 1.0) <= tol

    def require_normalized(self, what: str = "mode vector", tol: float = NORMALIZATION_TOL) -> None:
        if not self.is_normalized(tol):
            raise ValueError(
                f"{what} must be normalized: |norm^2 - 1| = {abs(self.norm_sq - 1.0):.3e} > {tol:g}"
            )

    def scaled(self, factor: complex) -> "ModeVector":
        return ModeVector(self.basis, self.coeffs * factor)

    def __add__(self, other: "ModeVector") -> "ModeVector":
        _require_same_basis(self, other)
        return ModeVector(self.basis, self.coeffs + other.coeffs)

    def __sub__(self, other: "ModeVector") -> "ModeVector":
        _require_same_basis(self, other)
        return ModeVector(self.basis, self.coeffs - other.coeffs)

    def coefficient(self, n: int, m: int) -> complex:
        return complex(self.coeffs[self.basis.index_of(n, m)])


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule of a given order.

    Stores the raw nodes/weights for weight e^{-t^2} together with the
    "flattened" weights w_i * e^{t_i^2}; :meth:`scaled` maps them onto the
    physical axis x = x_scale(z) * t, after which

        integral F(x) dx  ~=  sum_i W_i F(x_i)

    is exact (to roundoff) whenever F is a polynomial of degree <= 2Q - 1
    times the envelope e^{-(x/x_scale)^2}.  Orders up to a few hundred are
    safe; beyond that e^{t^2} overflows.
    """

    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    flat_weights: np.ndarray = field(repr=False)

    @classmethod
    def gauss_hermite(cls, order: int) -> "QuadratureRule":
        if order < 1:
            raise ValueError(f"quadrature order must be >= 1, got {order}")
        t, w = np.polynomial.hermite.hermgauss(order)
        return cls(order=order, nodes=t, weights=w, flat_weights=w * np.exp(t * t))

    def scaled(self, geom: BeamGeometry, z: float) -> tuple[np.ndarray, np.ndarray]:
        """Physical nodes and effective weights on the plane at height z."""
        xs = geom.x_scale(z)
        return xs * self.nodes, xs * self.flat_weights


@dataclass(frozen=True)
class SampledField:
    """A field known through an evaluation rule f(x, y, z) -> complex.

    ``func`` must accept numpy arrays for x and y (same shape) and a scalar
    z, and return an array of that shape.  Square-integrability is assumed
    and enforced a posteriori: quadrature norms must come out finite.
    """

    geom: BeamGeometry
    func: Callable[[np.ndarray, np.ndarray, float], np.ndarray]

    def evaluate(self, x, y, z: float) -> np.ndarray:
        return np.asarray(self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float), z))

    @classmethod
    def from_mode_vector(cls, v: ModeVector) -> "SampledField":
        return cls(v.basis.geom, lambda x, y, z: synthesize(v, x, y, z))


def _require_same_basis(a: ModeVector, b: ModeVector) -> None:
    if a.basis != b.basis:
        raise ValueError("mode vectors live on different bases/geometries")


def _require_same_geometry(a, b) -> None:
    ga = a.basis.geom if isinstance(a, ModeVector) else a.geom
    gb = b.basis.geom if isinstance(b, ModeVector) else b.geom
    if ga != gb:
        raise ValueError("fields are attached to different beam geometries")


def _tensor_grid(geom: BeamGeometry, z: float, quad: QuadratureRule):
    x, w = quad.scaled(geom, z)
    return x[:, None], x[None, :], np.outer(w, w)


def _as_values(f, X, Y, z):
    if isinstance(f, ModeVector):
        return synthesize(f, X, Y, z)
    return f.evaluate(X, Y, z)


def inner_product(f, g, z: float = 0.0, quad: QuadratureRule | None = None) -> complex:
    """(f, g) = integral f* g d^2x.

    For two ModeVectors on the same basis this is the exact coefficient
    contraction sum_mu f_mu* g_mu (orthonormality makes it z-independent);
    any combination involving a SampledField falls back to tensor
    quadrature on the plane at height z.
    """
    _require_same_geometry(f, g)
    if isinstance(f, ModeVector) and isinstance(g, ModeVector) and f.basis == g.basis:
        return complex(np.vdot(f.coeffs, g.coeffs))
    if quad is None:
        raise ValueError("a QuadratureRule is required unless both fields share a ModeBasis")
    geom = f.basis.geom if isinstance(f, ModeVector) else f.geom
    X, Y, W = _tensor_grid(geom, z, quad)
    fv = _as_values(f, X, Y, z)
    gv = _as_values(g, X, Y, z)
    return complex(np.sum(W * np.conj(fv) * gv))


def functional_product(f, g, z: float = 0.0, quad: QuadratureRule | None = None) -> complex:
    """[f g] = integral f g d^2x, with no conjugation of either factor.

    On the waist plane the basis functions are real, so for two
    ModeVectors at z = 0 the bracket is the plain contraction
    sum_mu f_mu g_mu; elsewhere the chirp phases add rather than cancel
    and the bracket is computed by quadrature.  Symmetric: [f g] = [g f].
    """
    _require_same_geometry(f, g)
    if isinstance(f, ModeVector) and isinstance(g, ModeVector) and f.basis == g.basis and z == 0.0:
        return complex(np.sum(f.coeffs * g.coeffs))
    if quad is None:
        raise ValueError("a QuadratureRule is required for z != 0 or sampled fields")
    geom = f.basis.geom if isinstance(f, ModeVector) else f.geom
    X, Y, W = _tensor_grid(geom, z, quad)
    fv = _as_values(f, X, Y, z)
    gv = _as_values(g, X, Y, z)
    return complex(np.sum(W * fv * gv))


def decompose(
    field: SampledField,
    basis: ModeBasis,
    z: float = 0.0,
    quad: QuadratureRule | None = None,
) -> ModeVector:
    """Project a sampled field onto the basis: coefficients phi_mu = (u_mu, phi).

    The coefficients do not depend on the plane z at which the projection
    is carried out (each u_mu carries its own propagation phases), which
    is tested rather than assumed.  Runs at the given quadrature rule, or
    at the policy order 2*n_max + 16 when none is supplied; a rule below
    policy is allowed but draws a :class:`QuadraturePolicyWarning`.

    Raises ``ValueError`` on non-finite samples and ``ArithmeticError``
    if the Bessel inequality norm^2(field) >= norm^2(coefficients) is
    violated beyond 1e-9 (a sign the quadrature cannot resolve the field).
    """
    _require_same_geometry(field, ModeVector(basis, np.zeros(basis.size)))
    if quad is None:
        quad = QuadratureRule.gauss_hermite(default_quadrature_order(basis.n_max))
    elif quad.order < default_quadrature_order(basis.n_max):
        warnings.warn(
            f"quadrature order {quad.order} below policy {default_quadrature_order(basis.n_max)} "
            f"for n_max={basis.n_max}; coefficients may be inaccurate",
            QuadraturePolicyWarning,
            stacklevel=2,
        )
    geom = basis.geom
    x, w = quad.scaled(geom, z)
    values = field.evaluate(x[:, None], x[None, :], z)
    if not np.all(np.isfinite(values)):
        raise ValueError("field evaluation produced non-finite samples")

    # 1D mode tables along each axis; conj(u_mu) = conj(phi_n phi_m) e^{-ikz}
    table = mode_1d_table(basis.n_max, x, z, geom)  # (n_max+1, Q)
    proj = np.conj(table) * w  # fold weights into one factor
    coeff_matrix = proj @ values @ proj.T  # (n_max+1, n_max+1), [n, m]
    coeff_matrix = coeff_matrix * np.exp(-1j * geom.k * z)
    coeffs = coeff_matrix.reshape(-1)

    field_norm_sq = float(np.real(np.sum(np.outer(w, w) * np.abs(values) ** 2)))
    coeff_norm_sq = float(np.sum(np.abs(coeffs) ** 2))
    if field_norm_sq - coeff_norm_sq < -1e-9:
        raise ArithmeticError(
            "Bessel inequality violated: quadrature norm "
            f"{field_norm_sq:.12g} < coefficient norm {coeff_norm_sq:.12g}"
        )
    return ModeVector(basis, coeffs)


def synthesize(v: ModeVector, x, y, z: float = 0.0):
    """Evaluate sum_mu c_mu u_mu(x, y, z) at scalar or array coordinates."""
    geom = v.basis.geom
    n_max = v.basis.n_max
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    x_arr, y_arr = np.broadcast_arrays(x_arr, y_arr)
    shape = x_arr.shape
    tab_x = mode_1d_table(n_max, x_arr.ravel(), z, geom)  # (N, P)
    tab_y = mode_1d_table(n_max, y_arr.ravel(), z, geom)
    c = v.coeffs.reshape(n_max + 1, n_max + 1)
    # value_p = sum_n phi_n(x_p) * sum_m c_{nm} phi_m(y_p)
    inner = c @ tab_y  # (N, P)
    values = np.sum(tab_x * inner, axis=0) * np.exp(1j * geom.k * z)
    values = values.reshape(shape)
    return complex(values.reshape(-1)[0]) if np.ndim(x) == 0 and np.ndim(y) == 0 else values


def completeness_kernel(basis: ModeBasis, x, y, xp, yp, z: float = 0.0):
    """Truncated reproducing kernel K(x, y; x', y') = sum_mu u_mu(x,y,z) u_mu*(x',y',z).

    Separable: the sum factorizes into (sum_n phi_n(x) phi_n*(x')) times the
    same factor in y, and the e^{ikz} carrier cancels.  Useful as an
    integral operator (it reproduces anything inside the truncation), not
    as a pointwise delta approximation.
    """
    n_max = basis.n_max
    geom = basis.geom
    tx = mode_1d_table(n_max, np.atleast_1d(x).astype(float), z, geom)
    txp = mode_1d_table(n_max, np.atleast_1d(xp).astype(float), z, geom)
    ty = mode_1d_table(n_max, np.atleast_1d(y).astype(float), z, geom)
    typ = mode_1d_table(n_max, np.atleast_1d(yp).astype(float), z, geom)
    kx = np.einsum("np,nq->pq", tx, np.conj(txp))
    ky = np.einsum("np,nq->pq", ty, np.conj(typ))
    val = kx * ky
    if all(np.ndim(a) == 0 for a in (x, y, xp, yp)):
        return complex(val[0, 0])
    return val


def basis_gram(basis: ModeBasis, z: float, quad: QuadratureRule) -> np.ndarray:
    """Quadrature Gram matrix G_{mu nu} = (u_mu, u_nu) at height z.

    Orthonormality says G = I on every plane; this routine exists to
    measure how far the discretized integrals are from that identity.
    """
    geom = basis.geom
    x, w = quad.scaled(geom, z)
    table = mode_1d_table(basis.n_max, x, z, geom)
    g1 = np.einsum("ni,i,mi->nm", np.conj(table), w, table)
    return np.kron(g1, g1)


# --- serialization ---------------------------------------------------------
#
# ModeVector files carry the truncation and the coefficients only; the beam
# geometry travels separately (callers supply it on load).  JSON layout:
# {"n_max": N, "coeffs": [[re, im], ...]} in row-major (n, m) order.  CSV
# layout: header "n,m,re,im" and one row per coefficient, same order.


def mode_vector_to_json(v: ModeVector) -> dict:
    return {
        "n_max": v.basis.n_max,
        "coeffs": [[float(c.real), float(c.imag)] for c in v.coeffs],
    }


def mode_vector_from_json(data: dict, geom: BeamGeometry) -> ModeVector:
    n_max = int(data["n_max"])
    basis = ModeBasis(geom, n_max)
    pairs = data["coeffs"]
    if len(pairs) != basis.size:
        raise ValueError(f"expected {basis.size} coefficients for n_max={n_max}, got {len(pairs)}")
    coeffs = np.array([complex(re, im) for re, im in pairs])
    return ModeVector(basis, coeffs)


def mode_vector_to_csv(v: ModeVector) -> str:
    lines = ["n,m,re,im"]
    for mu, c in zip(v.basis.indices(), v.coeffs):
        lines.append(f"{mu.n},{mu.m},{c.real:.17g},{c.imag:.17g}")
    return "\n".join(lines) + "\n"


def mode_vector_from_csv(text: str, geom: BeamGeometry) -> ModeVector:
    rows: list[tuple[int, int, complex]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().replace(" ", "") == "n,m,re,im":
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"bad mode-vector CSV row: {line!r}")
        n, m = int(parts[0]), int(parts[1])
        rows.append((n, m, complex(float(parts[2]), float(parts[3]))))
    if not rows:
        raise ValueError("empty mode-vector CSV")
    n_max = max(max(n, m) for n, m, _ in rows)
    basis = ModeBasis(geom, n_max)
    coeffs = np.zeros(basis.size, dtype=complex)
    for n, m, c in rows:
        coeffs[basis.index_of(n, m)] = c
    return ModeVector(basis, coeffs)
