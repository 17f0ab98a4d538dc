"""Brute-force oracle: dense operators on a truncated multimode Fock space.

Everything analytic in this package can be checked on small instances by
explicit matrix algebra.  A :class:`FockSpace` fixes a list of (port, mode)
labels and a per-mode photon cutoff C; states are plain complex vectors of
length (C+1)^{#modes} and operators are dense square matrices, with the
basis ordered lexicographically by occupation numbers (last mode fastest,
i.e. numpy's ndindex order).

Truncation discipline: cutoff artifacts live at the occupation edge, so
assertion helpers expose masks for the interior subspace (all occupations
<= C-1, or per-pair photon totals <= C) where the algebra is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, logm

from .beamsplitter import SplitterCoefficients
from .geometry import BeamGeometry, ModeIndex, mode_2d
from .modespace import ModeVector

__all__ = [
    "FockSpace",
    "DEFAULT_DIM_CAP",
    "ladder_matrices",
    "projected_ladder",
    "number_state",
    "coherent_state",
    "bs_unitary",
    "time_evolution",
    "total_number_operator",
    "field_operator_matrix",
    "interior_mask",
    "pair_total_mask",
]

DEFAULT_DIM_CAP = 4096

COHERENT_ALPHA_MAX = 0.5
COHERENT_CUTOFF_MIN = 6

_SELF_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    """Truncated bosonic Fock space over labelled (port, mode) pairs.

    ``mode_labels`` fixes the tensor-factor order; ``cutoff`` is the max
    photon number per mode.  The dimension (cutoff+1)^{#modes} is capped
    (default 4096) because every operator here is a dense matrix.
    """

    mode_labels: tuple[tuple[int, ModeIndex], ...]
    cutoff: int
    dim_cap: int = field(default=DEFAULT_DIM_CAP, compare=False)

    def __post_init__(self) -> None:
        labels = tuple((int(p), mu if isinstance(mu, ModeIndex) else ModeIndex(*mu)) for p, mu in self.mode_labels)
        object.__setattr__(self, "mode_labels", labels)
        if not labels:
            raise ValueError("FockSpace needs at least one mode")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate (port, mode) labels")
        for p, _ in labels:
            if p not in (1, 2):
                raise ValueError(f"port must be 1 or 2, got {p}")
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.dim > self.dim_cap:
            raise ValueError(
                f"dimension {self.dim} exceeds cap {self.dim_cap} "
                f"({len(labels)} modes at cutoff {self.cutoff})"
            )

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.n_modes

    def mode_position(self, port: int, mu: ModeIndex) -> int:
        try:
            return self.mode_labels.index((port, mu))
        except ValueError:
            raise ValueError(f"mode (port={port}, mu={mu}) not in space") from None

    def ports(self) -> set[int]:
        return {p for p, _ in self.mode_labels}

    def occupations(self) -> np.ndarray:
        """(dim, n_modes) table of occupation numbers, basis order."""
        grids = np.indices((self.cutoff + 1,) * self.n_modes)
        return grids.reshape(self.n_modes, -1).T

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def basis_state(self, occs) -> np.ndarray:
        occs = tuple(int(o) for o in occs)
        if len(occs) != self.n_modes or any(not 0 <= o <= self.cutoff for o in occs):
            raise ValueError(f"bad occupation tuple {occs}")
        idx = 0
        for o in occs:
            idx = idx * (self.cutoff + 1) + o
        v = np.zeros(self.dim, dtype=complex)
        v[idx] = 1.0
        return v


def interior_mask(space: FockSpace, max_occ: int | None = None) -> np.ndarray:
    """Basis states with every occupation <= max_occ (default cutoff-1)."""
    if max_occ is None:
        max_occ = space.cutoff - 1
    return np.all(space.occupations() <= max_occ, axis=1)


def pair_total_mask(space: FockSpace, mu: ModeIndex, max_total: int) -> np.ndarray:
    """Basis states whose (1,mu)+(2,mu) photon total is <= max_total."""
    occ = space.occupations()
    i1 = space.mode_position(1, mu)
    i2 = space.mode_position(2, mu)
    return occ[:, i1] + occ[:, i2] <= max_total


def _single_mode_annihilator(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), k=1).astype(complex)


def ladder_matrices(space: FockSpace) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per-mode (a, a_dagger) pairs in label order.

    Built by kron-embedding the single-mode ladder; a annihilates the
    global vacuum exactly, and [a_j, a_k_dagger] = delta_jk holds on the
    interior subspace (the cutoff row is where truncation bites).
    """
    eye = np.eye(space.cutoff + 1, dtype=complex)
    a1 = _single_mode_annihilator(space.cutoff)
    out = []
    for j in range(space.n_modes):
        factors = [a1 if i == j else eye for i in range(space.n_modes)]
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        out.append((m, m.conj().T))
    return out


def projected_ladder(space: FockSpace, phi: ModeVector, port: int) -> tuple[np.ndarray, np.ndarray]:
    """Mode-projected ladder pair: a[phi] = sum_mu phi_mu* a_{port,mu}.

    Every mode of phi carrying weight above 1e-12 must be present in the
    space; silently dropping weight would corrupt the oracle.
    """
    ladders = ladder_matrices(space)
    a = np.zeros((space.dim, space.dim), dtype=complex)
    present = {(p, mu): j for j, (p, mu) in enumerate(space.mode_labels)}
    for mu, c in zip(phi.basis.indices(), phi.coeffs):
        if abs(c) <= 1e-12:
            continue
        key = (port, mu)
        if key not in present:
            raise ValueError(f"mode {mu} (|coeff| = {abs(c):.3e}) missing from the Fock space")
        a += np.conj(c) * ladders[present[key]][0]
    return a, a.conj().T


def number_state(space: FockSpace, phi: ModeVector, port: int, N: int) -> np.ndarray:
    """|N[phi]> = (a_dagger[phi])^N |0> / sqrt(N!)."""
    max_photons = space.cutoff * sum(1 for p, _ in space.mode_labels if p == port)
    if not 0 <= N <= max_photons:
        raise ValueError(f"N = {N} outside the truncation (port holds <= {max_photons} photons)")
    _, adag = projected_ladder(space, phi, port)
    v = space.vacuum()
    for _ in range(N):
        v = adag @ v
    return v / math.sqrt(math.factorial(N))


def coherent_state(space: FockSpace, phi: ModeVector, port: int, alpha: complex) -> np.ndarray:
    """|alpha, [phi]> = e^{-|alpha|^2/2} sum_N alpha^N/sqrt(N!) |N[phi]>, to the cutoff.

    Truncation policy: |alpha| <= 0.5 with cutoff >= 6 keeps the dropped
    tail below 1e-8 in norm; outside that envelope the state would be
    silently wrong, so construction refuses.
    """
    if abs(alpha) > COHERENT_ALPHA_MAX or space.cutoff < COHERENT_CUTOFF_MIN:
        raise ValueError(
            f"coherent truncation policy violated: need |alpha| <= {COHERENT_ALPHA_MAX} "
            f"and cutoff >= {COHERENT_CUTOFF_MIN}, got |alpha| = {abs(alpha):.3f}, "
            f"cutoff = {space.cutoff}"
        )
    _, adag = projected_ladder(space, phi, port)
    max_photons = space.cutoff * sum(1 for p, _ in space.mode_labels if p == port)
    term = space.vacuum()  # (a_dagger[phi])^N |0> / N!
    acc = term.copy()
    for N in range(1, max_photons + 1):
        term = (adag @ term) / N
        acc += alpha**N * term
        if not np.any(term):
            break
    return math.exp(-abs(alpha) ** 2 / 2) * acc


def _pair_blocks(space: FockSpace, s: SplitterCoefficients):
    """Matched (1,mu)/(2,mu) positions and the 2x2 single-particle block."""
    by_mu: dict[ModeIndex, dict[int, int]] = {}
    for j, (p, mu) in enumerate(space.mode_labels):
        by_mu.setdefault(mu, {})[p] = j
    pairs = []
    for mu, ports in by_mu.items():
        if set(ports) != {1, 2}:
            raise ValueError(f"mode {mu} present on port(s) {sorted(ports)} only; need both")
        sign = mu.reflection_sign
        U = np.array([[s.tau, s.rho * sign], [s.rho * sign, s.tau]], dtype=complex)
        pairs.append((mu, ports[1], ports[2], U))
    return pairs


def bs_unitary(space: FockSpace, s: SplitterCoefficients) -> np.ndarray:
    """Second-quantized beam splitter S with S_dagger a S = analytic transform.

    Per matched mode pair the single-particle block U_mu (with the parity
    sign on rho) is lifted through its principal logarithm: K_mu =
    -i log U_mu, S = exp(i sum K_jk a_dagger_j a_k).  The construction is
    verified before returning — unitarity, and the conjugation action
    against the analytic coefficients on the subspace where truncation is
    inert (pair totals <= cutoff) — so a returned S is a trusted oracle.
    """
    pairs = _pair_blocks(space, s)
    ladders = ladder_matrices(space)
    G = np.zeros((space.dim, space.dim), dtype=complex)
    for _, j1, j2, U in pairs:
        K = -1j * logm(U)
        K = 0.5 * (K + K.conj().T)  # kill the anti-Hermitian roundoff residue
        for r, jr in ((0, j1), (1, j2)):
            for c, jc in ((0, j1), (1, j2)):
                G += K[r, c] * (ladders[jr][1] @ ladders[jc][0])
    S = expm(1j * G)

    unit_err = np.max(np.abs(S.conj().T @ S - np.eye(space.dim)))
    if unit_err > _SELF_CHECK_TOL:
        raise ArithmeticError(f"lifted splitter not unitary: max |S_dag S - I| = {unit_err:.3e}")
    for mu, j1, j2, U in pairs:
        cols = pair_total_mask(space, mu, space.cutoff)
        for row, jr in ((0, j1), (1, j2)):
            got = (S.conj().T @ ladders[jr][0] @ S)[:, cols]
            want = (U[row, 0] * ladders[j1][0] + U[row, 1] * ladders[j2][0])[:, cols]
            err = np.max(np.abs(got - want))
            if err > _SELF_CHECK_TOL:
                raise ArithmeticError(
                    f"conjugation check failed for mode {mu}, port {row + 1}: {err:.3e}"
                )
    return S


def total_number_operator(space: FockSpace) -> np.ndarray:
    return np.diag(space.occupations().sum(axis=1).astype(complex))


def time_evolution(space: FockSpace, omega: float, t: float) -> np.ndarray:
    """U(t) = e^{-i omega N t}: free evolution of the normal-ordered energy."""
    n_tot = space.occupations().sum(axis=1)
    return np.diag(np.exp(-1j * omega * n_tot * t))


def field_operator_matrix(
    space: FockSpace,
    geom: BeamGeometry,
    x: float,
    y: float,
    z: float,
    t: float = 0.0,
    port: int | None = None,
) -> np.ndarray:
    """Field operator at one point: (2 omega)^{-1/2} (A + A_dagger) with
    A = e^{-i omega t} sum_mu a_mu u_mu(r).

    ``port`` selects which port's modes contribute (None sums all labels
    in the space); both ports use the same transverse mode functions, the
    reflection parity lives in the operator transformation instead.
    """
    ladders = ladder_matrices(space)
    omega = geom.omega
    A = np.zeros((space.dim, space.dim), dtype=complex)
    for j, (p, mu) in enumerate(space.mode_labels):
        if port is not None and p != port:
            continue
        A += ladders[j][0] * mode_2d(mu, x, y, z, geom)
    A *= np.exp(-1j * omega * t)
    return (A + A.conj().T) / math.sqrt(2.0 * omega)
