"""Self-check suites behind ``qfield verify``.

Each suite re-derives a family of library guarantees through an
independent route — quadrature Gram matrices, dense Fock-space matrices,
contour-integral series coefficients — and reports the worst observed
deviation next to the published tolerance. All random draws use fixed
seeds, so repeated runs produce byte-identical reports.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import (
    FieldConfiguration,
    TwoPortFieldConfiguration,
    coherent_state_ratio,
    number_state_ratio,
    two_port_coherent_ratio,
    two_port_single_photon_ratio,
    vacuum_relative_weight,
)
from .beamsplitter import (
    SplitterCoefficients,
    TwoPortModeVectors,
    inverse_transform,
    operator_transform,
    reflect_mode_vector,
)
from .fock import (
    FockSpace,
    bs_unitary,
    ladder_matrices,
    number_state,
    pair_total_mask,
    projected_ladder,
)
from .geometry import BeamGeometry, ModeIndex, mode_2d, paraxial_residual
from .modespace import (
    ModeBasis,
    QuadratureRule,
    SampledField,
    basis_gram,
    decompose,
    functional_product,
    inner_product,
)
from .observables import photon_number_correlation, two_point_correlation

SUITE_NAMES = ("modes", "beamsplitter", "amplitudes", "oracle", "all")

_DEFAULT_GEOMETRY = dict(w0=1.0, k=30.0)


@dataclass(frozen=True)
class CheckResult:
    """One named deviation measurement compared against a tolerance."""

    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def to_json(self) -> dict:
        return {
            "check_name": self.name,
            "max_error": float(self.max_error),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }


def report(suite: str, results: list[CheckResult]) -> dict:
    return {
        "suite": suite,
        "pass": all(r.passed for r in results),
        "checks": [r.to_json() for r in results],
    }


def _random_mode_vector(basis: ModeBasis, rng, real: bool = False, scale: float = 1.0):
    c = rng.normal(size=basis.size)
    if not real:
        c = c + 1j * rng.normal(size=basis.size)
    return basis.vector(scale * c + 0.0j)


def _random_unit_vector(basis: ModeBasis, rng, real: bool = False):
    v = _random_mode_vector(basis, rng, real=real)
    return v.scaled(1.0 / v.norm)


# ---------------------------------------------------------------- modes


def suite_modes(geom: BeamGeometry) -> list[CheckResult]:
    basis = ModeBasis(geom, 8)
    quad = QuadratureRule.gauss_hermite(40)
    eye = np.eye(basis.size)
    checks = []
    for label, z in (("waist", 0.0), ("half_z0", 0.5 * geom.z0), ("two_z0", 2.0 * geom.z0)):
        err = float(np.max(np.abs(basis_gram(basis, z, quad) - eye)))
        checks.append(CheckResult(f"modes.gram_identity_{label}", err, 1e-9))

    rng = np.random.default_rng(101)
    x = rng.uniform(-2.5, 2.5, size=25)
    y = rng.uniform(-2.5, 2.5, size=25)
    worst = 0.0
    for mu in basis.indices():
        for z in (0.0, 0.7 * geom.z0):
            flipped = mode_2d(mu, x, -y, z, geom)
            signed = mu.reflection_sign * mode_2d(mu, x, y, z, geom)
            worst = max(worst, float(np.max(np.abs(flipped - signed))))
    checks.append(CheckResult("modes.reflection_parity", worst, 1e-12))

    for mu in (ModeIndex(0, 0), ModeIndex(2, 1)):
        coarse = abs(paraxial_residual(mu, 0.31, -0.44, 0.2 * geom.z0, geom, 2e-3))
        fine = abs(paraxial_residual(mu, 0.31, -0.44, 0.2 * geom.z0, geom, 1e-3))
        err = abs(coarse / fine / 4.0 - 1.0)
        checks.append(CheckResult(f"modes.paraxial_order2_tem{mu.n}{mu.m}", err, 0.15))

    decay = np.array([1.0 / (1 + mu.n + mu.m) for mu in basis.indices()])
    v = basis.vector((rng.normal(size=basis.size) + 1j * rng.normal(size=basis.size)) * decay)
    w = decompose(SampledField.from_mode_vector(v), basis, 0.3 * geom.z0, quad)
    err = float(np.max(np.abs(w.coeffs - v.coeffs)))
    checks.append(CheckResult("modes.decompose_roundtrip", err, 1e-9))
    return checks


# ---------------------------------------------------------- beamsplitter


def suite_beamsplitter(
    geom: BeamGeometry, extra: SplitterCoefficients | None = None
) -> list[CheckResult]:
    splitters = [
        SplitterCoefficients.balanced(),
        SplitterCoefficients.from_transmission(0.6, 0.3),
        SplitterCoefficients.from_transmission(1.0),
    ]
    if extra is not None:
        splitters.append(extra)

    constraint = max(
        max(abs(abs(s.rho) ** 2 + abs(s.tau) ** 2 - 1.0), abs((s.rho.conjugate() * s.tau).real))
        for s in splitters
    )
    bal = SplitterCoefficients.balanced()
    checks = [
        CheckResult("beamsplitter.constraint_residual", constraint, 1e-12),
        CheckResult("beamsplitter.balanced_square_sum", abs(bal.tau**2 + bal.rho**2), 1e-12),
    ]

    rng = np.random.default_rng(202)
    basis = ModeBasis(geom, 3)
    a = TwoPortModeVectors(
        _random_mode_vector(basis, rng), _random_mode_vector(basis, rng)
    )
    norm_err = 0.0
    inverse_err = 0.0
    for s in splitters:
        b = operator_transform(a, s)
        norm_err = max(norm_err, abs(b.combined_norm_sq - a.combined_norm_sq))
        back = inverse_transform(b, s)
        inverse_err = max(
            inverse_err,
            float(np.max(np.abs(back.port1.coeffs - a.port1.coeffs))),
            float(np.max(np.abs(back.port2.coeffs - a.port2.coeffs))),
        )
    checks.append(CheckResult("beamsplitter.norm_preservation", norm_err, 1e-12))
    checks.append(CheckResult("beamsplitter.transform_inverse_identity", inverse_err, 1e-12))

    twice = reflect_mode_vector(reflect_mode_vector(a.port1))
    err = float(np.max(np.abs(twice.coeffs - a.port1.coeffs)))
    checks.append(CheckResult("beamsplitter.reflection_involution", err, 1e-12))
    return checks


# ------------------------------------------------------------ amplitudes


def closed_form_ratio(N: int, A: complex, B: complex, phase: complex) -> complex:
    if N == 0:
        return 1.0 + 0.0j
    if N == 1:
        return A * phase
    if N == 2:
        return (A * A - B) / math.sqrt(2.0) * phase**2
    if N == 3:
        return A * (A * A - 3.0 * B) / math.sqrt(6.0) * phase**3
    raise ValueError(f"no tabulated closed form for N = {N}")


def _series_ratio(cfg: FieldConfiguration, phi, N: int, t: float) -> complex:
    """Contour-integral Taylor coefficient of the coherent-state ratio."""
    radius, samples = 0.4, 64
    total = 0.0j
    for j in range(samples):
        theta = 2.0 * math.pi * j / samples
        alpha = radius * cmath.exp(1j * theta)
        G = coherent_state_ratio(cfg, phi, alpha, t) * cmath.exp(abs(alpha) ** 2 / 2)
        total += G * cmath.exp(-1j * N * theta)
    return total / (samples * radius**N) * math.sqrt(math.factorial(N))


def suite_amplitudes(geom: BeamGeometry) -> list[CheckResult]:
    basis = ModeBasis(geom, 4)
    rng = np.random.default_rng(303)
    t = 0.37
    phase = cmath.exp(-1j * geom.omega * t)

    table_err = 0.0
    for _ in range(20):
        psi = _random_mode_vector(basis, rng, real=True, scale=0.5)
        phi = _random_unit_vector(basis, rng)
        cfg = FieldConfiguration(psi)
        A = functional_product(psi, phi)
        B = functional_product(phi, phi)
        for N in range(4):
            got = number_state_ratio(cfg, phi, N, t)
            table_err = max(table_err, abs(got - closed_form_ratio(N, A, B, phase)))
    checks = [CheckResult("amplitudes.low_order_closed_forms", table_err, 1e-10)]

    series_err = 0.0
    for _ in range(5):
        psi = _random_mode_vector(basis, rng, real=True, scale=0.5)
        phi = _random_unit_vector(basis, rng)
        cfg = FieldConfiguration(psi)
        for tt in (0.0, 0.21):
            for N in range(5):
                got = number_state_ratio(cfg, phi, N, tt)
                series_err = max(series_err, abs(got - _series_ratio(cfg, phi, N, tt)))
    checks.append(CheckResult("amplitudes.generating_function_series", series_err, 1e-8))

    cfg2 = TwoPortFieldConfiguration(
        FieldConfiguration(_random_mode_vector(basis, rng, real=True)),
        FieldConfiguration(_random_mode_vector(basis, rng, real=True)),
    )
    phi = _random_unit_vector(basis, rng)
    bal = SplitterCoefficients.balanced()
    alpha = 0.3 + 0.2j
    general = two_port_coherent_ratio(cfg2, phi, alpha, bal, t)
    collapsed = cmath.exp(-abs(alpha) ** 2 / 2) * cmath.exp(
        alpha * two_port_single_photon_ratio(cfg2, phi, bal, t)
    )
    err = abs(general - collapsed) / max(1.0, abs(general))
    checks.append(CheckResult("amplitudes.balanced_coherent_collapse", err, 1e-12))

    detect_err = 0.0
    for _ in range(5):
        c1 = FieldConfiguration(_random_mode_vector(basis, rng, real=True, scale=0.5))
        c2 = FieldConfiguration(_random_mode_vector(basis, rng, real=True, scale=0.5))
        phi1 = _random_unit_vector(basis, rng, real=True)
        phi2 = _random_unit_vector(basis, rng, real=True)
        pair = TwoPortFieldConfiguration(c1, c2)
        from .observables import detection_probability_ratio

        for N1 in range(4):
            for N2 in range(4):
                joint = detection_probability_ratio(N1, N2, pair, phi1, phi2)
                split = (
                    abs(number_state_ratio(c1, phi1, N1)) ** 2
                    * abs(number_state_ratio(c2, phi2, N2)) ** 2
                )
                detect_err = max(detect_err, abs(joint - split))
    checks.append(CheckResult("amplitudes.detection_product", detect_err, 1e-10))

    psi = _random_mode_vector(basis, rng, real=True, scale=0.4)
    w1 = vacuum_relative_weight(FieldConfiguration(psi))
    w2 = vacuum_relative_weight(FieldConfiguration(psi.scaled(2.0)))
    checks.append(CheckResult("amplitudes.vacuum_weight_quartic", abs(w2 - w1**4), 1e-12))
    return checks


# ---------------------------------------------------------------- oracle


def _two_port_space(n_max: int, cutoff: int) -> FockSpace:
    labels = tuple((p, ModeIndex(0, m)) for p in (1, 2) for m in range(n_max + 1))
    return FockSpace(mode_labels=labels, cutoff=cutoff)


def suite_oracle(geom: BeamGeometry, n_max: int = 1) -> list[CheckResult]:
    checks = []

    # conjugation: S^dag a S reproduces the analytic output operators on
    # every column whose photon pair-total stays inside the truncation
    space = _two_port_space(n_max, 3)
    s = SplitterCoefficients.from_transmission(0.8, 0.4)
    S = bs_unitary(space, s)
    ladders = ladder_matrices(space)
    Sd = S.conj().T
    conj_err = 0.0
    for j, (port, mu) in enumerate(space.mode_labels):
        a_here = ladders[j][0]
        k = space.mode_position(3 - port, mu)
        a_there = ladders[k][0]
        sign = mu.reflection_sign
        want = s.tau * a_here + s.rho * sign * a_there
        cols = pair_total_mask(space, mu, 3)
        diff = Sd @ a_here @ S - want
        conj_err = max(conj_err, float(np.max(np.abs(diff[:, cols]))))
    checks.append(CheckResult("oracle.splitter_conjugation", conj_err, 1e-10))

    basis = ModeBasis(geom, 1)
    conv = _two_port_space(1, 3)
    rng = np.random.default_rng(404)
    support = [ModeIndex(0, 0), ModeIndex(0, 1)]
    fid_err = 0.0
    for s in (SplitterCoefficients.balanced(), SplitterCoefficients.from_transmission(0.7, 1.2)):
        Sc = bs_unitary(conv, s)
        for _ in range(2):
            c = rng.normal(size=2) + 1j * rng.normal(size=2)
            c /= np.linalg.norm(c)
            phi = basis.vector({tuple(mu): c[i] for i, mu in enumerate(support)})
            phi_r = reflect_mode_vector(phi)
            outputs = {
                1: s.tau * number_state(conv, phi, 1, 1)
                + s.rho * number_state(conv, phi_r, 2, 1),
                2: s.rho * number_state(conv, phi_r, 1, 1)
                + s.tau * number_state(conv, phi, 2, 1),
            }
            for port, want in outputs.items():
                got = Sc @ number_state(conv, phi, port, 1)
                fid_err = max(fid_err, 1.0 - abs(np.vdot(want, got)))
    checks.append(CheckResult("oracle.single_photon_fidelity", fid_err, 1e-10))

    pair = FockSpace(mode_labels=((1, ModeIndex(0, 0)), (2, ModeIndex(0, 0))), cutoff=8)
    phi0 = basis.unit_vector(0, 0)
    alpha = 0.3
    coh_err = 0.0
    for s in (SplitterCoefficients.balanced(), SplitterCoefficients.from_transmission(0.6, 0.9)):
        from .fock import coherent_state

        got = bs_unitary(pair, s) @ coherent_state(pair, phi0, 1, alpha)
        a1, a2 = s.tau * alpha, s.rho * alpha
        want = np.zeros(pair.dim, dtype=complex)
        for n1 in range(9):
            for n2 in range(9):
                want += (
                    a1**n1
                    * a2**n2
                    / math.sqrt(math.factorial(n1) * math.factorial(n2))
                    * pair.basis_state((n1, n2))
                )
        want *= math.exp(-abs(alpha) ** 2 / 2)
        fid = abs(np.vdot(want / np.linalg.norm(want), got / np.linalg.norm(got)))
        coh_err = max(coh_err, 1.0 - fid)
    checks.append(CheckResult("oracle.coherent_fidelity", coh_err, 1e-8))

    single = FockSpace(mode_labels=((1, ModeIndex(0, 0)), (1, ModeIndex(0, 1))), cutoff=3)
    overlap_err = 0.0
    for _ in range(10):
        cs = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        cs /= np.linalg.norm(cs, axis=1, keepdims=True)
        phi = basis.vector({tuple(mu): cs[0, i] for i, mu in enumerate(support)})
        phi_p = basis.vector({tuple(mu): cs[1, i] for i, mu in enumerate(support)})
        ip = inner_product(phi, phi_p)
        for N in range(4):
            for Np in range(4):
                got = np.vdot(number_state(single, phi, 1, N), number_state(single, phi_p, 1, Np))
                want = ip**N if N == Np else 0.0
                overlap_err = max(overlap_err, abs(got - want))
    checks.append(CheckResult("oracle.overlap_law", overlap_err, 1e-9))

    from .fock import field_operator_matrix

    corr_space = _two_port_space(1, 2)
    s = SplitterCoefficients.from_transmission(0.8, 0.3)
    Sc = bs_unitary(corr_space, s)
    c = rng.normal(size=2) + 1j * rng.normal(size=2)
    c /= np.linalg.norm(c)
    phi = basis.vector({tuple(mu): c[i] for i, mu in enumerate(support)})
    out = Sc @ number_state(corr_space, phi, 1, 1)
    corr_err = 0.0
    for _ in range(10):
        p1 = tuple(rng.uniform(-1.0, 1.0, size=3))
        p2 = tuple(rng.uniform(-1.0, 1.0, size=3))
        P1 = field_operator_matrix(corr_space, geom, *p1, t=0.0, port=1)
        P2 = field_operator_matrix(corr_space, geom, *p2, t=0.0, port=2)
        oracle = np.vdot(out, P1 @ P2 @ out).real
        corr_err = max(corr_err, abs(two_point_correlation(phi, p1, p2, s) - oracle))
    checks.append(CheckResult("oracle.two_point_correlation", corr_err, 1e-9))

    counter = FockSpace(mode_labels=((1, ModeIndex(0, 0)), (2, ModeIndex(0, 0))), cutoff=2)
    Sb = bs_unitary(counter, SplitterCoefficients.balanced())
    one = Sb @ number_state(counter, phi0, 1, 1)
    a1_, a1d = projected_ladder(counter, phi0, 1)
    a2_, a2d = projected_ladder(counter, reflect_mode_vector(phi0), 2)
    joint = abs(np.vdot(one, (a1d @ a1_) @ (a2d @ a2_) @ one))
    analytic = abs(
        photon_number_correlation(
            phi0, phi0, reflect_mode_vector(phi0), SplitterCoefficients.balanced()
        )
    )
    checks.append(
        CheckResult("oracle.photon_number_correlation", max(joint, analytic), 1e-12)
    )
    return checks


def run_suite(
    suite: str,
    geom: BeamGeometry | None = None,
    splitter: SplitterCoefficients | None = None,
    n_max: int = 1,
) -> list[CheckResult]:
    """Run one named suite (or ``all``) and return its check results."""
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)}")
    if geom is None:
        geom = BeamGeometry(**_DEFAULT_GEOMETRY)
    if suite == "modes":
        return suite_modes(geom)
    if suite == "beamsplitter":
        return suite_beamsplitter(geom, extra=splitter)
    if suite == "amplitudes":
        return suite_amplitudes(geom)
    if suite == "oracle":
        return suite_oracle(geom, n_max=n_max)
    return (
        suite_modes(geom)
        + suite_beamsplitter(geom, extra=splitter)
        + suite_amplitudes(geom)
        + suite_oracle(geom, n_max=n_max)
    )
