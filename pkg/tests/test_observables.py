"""R surface, correlations, and detection ratios against independent routes.

The displaced-mode coefficients have a closed form from the displacement
algebra (beta = -xi/sqrt(2)):

    c_0 = -beta e^{-beta^2/2}
    c_n = e^{-beta^2/2} beta^{n-1} (n - beta^2) / sqrt(n!)

which pins the whole Fig-2 pipeline without touching the quadrature code.
Cross-port correlators are checked against dense Fock-space expectation
values.
"""

import math

import numpy as np
import pytest

from qfield import (
    CLOSED_FORM_FIELD_SCALE,
    FieldConfiguration,
    ModeBasis,
    ModeIndex,
    RSurface,
    SplitterCoefficients,
    TwoPortFieldConfiguration,
    detection_probability_ratio,
    displaced_tem10_config,
    inner_product,
    number_state_ratio,
    photon_number_correlation,
    r_closed_form,
    r_functional,
    r_surface,
    r_surface_to_csv,
    r_surface_to_json,
    reflect_mode_vector,
    synthesize,
    two_point_correlation,
    two_port_single_photon_ratio,
)

INV_E = 0.36787944117144233
TWO_OVER_E = 0.7357588823428847


def displaced10_string(xi, n_max):
    beta = -xi / math.sqrt(2.0)
    w = math.exp(-beta * beta / 2)
    out = [-beta * w]
    for n in range(1, n_max + 1):
        out.append(w * beta ** (n - 1) * (n - beta * beta) / math.sqrt(math.factorial(n)))
    return np.array(out)


@pytest.fixture
def basis14(geom):
    return ModeBasis(geom, 14)


class TestRFunctional:
    def test_maximizing_configuration(self, geom):
        basis = ModeBasis(geom, 1)
        phi = basis.vector({(0, 0): 0.8, (0, 1): 0.6})
        cfg2 = TwoPortFieldConfiguration(
            FieldConfiguration(phi), FieldConfiguration(reflect_mode_vector(phi))
        )
        assert r_functional(cfg2, phi, SplitterCoefficients.balanced()) == pytest.approx(1.0, abs=1e-12)

    def test_dark_configuration(self, geom):
        basis = ModeBasis(geom, 1)
        phi = basis.unit_vector(0, 0)
        perp = FieldConfiguration(basis.unit_vector(1, 0).scaled(2.0))
        cfg2 = TwoPortFieldConfiguration(perp, perp)
        assert r_functional(cfg2, phi, SplitterCoefficients.balanced()) == 0.0

    def test_transmission_only(self, geom, rng):
        basis = ModeBasis(geom, 2)
        Psi1 = basis.vector(0.1 * rng.normal(size=basis.size) + 0.0j)
        cfg2 = TwoPortFieldConfiguration(
            FieldConfiguration.from_physical(Psi1), FieldConfiguration(basis.zero_vector())
        )
        phi = basis.unit_vector(0, 0)
        got = r_functional(cfg2, phi, SplitterCoefficients(rho=0.0, tau=1.0))
        want = 2 * geom.omega * abs(inner_product(Psi1, phi)) ** 2
        assert got == pytest.approx(want, rel=1e-12)

    def test_is_squared_amplitude_ratio(self, geom, rng):
        basis = ModeBasis(geom, 2)
        cfg2 = TwoPortFieldConfiguration(
            FieldConfiguration(basis.vector(rng.normal(size=basis.size) + 0.0j)),
            FieldConfiguration(basis.vector(rng.normal(size=basis.size) + 0.0j)),
        )
        phi = basis.unit_vector(1, 1)
        s = SplitterCoefficients.from_transmission(0.7, 0.2)
        R = r_functional(cfg2, phi, s)
        for t in (0.0, 0.9):
            assert abs(two_port_single_photon_ratio(cfg2, phi, s, t)) ** 2 == pytest.approx(R, rel=1e-12)


class TestDisplacedConfig:
    def test_zero_displacement(self, geom, basis14):
        cfg = displaced_tem10_config(0.0, geom, basis14)
        assert cfg.psi.coefficient(1, 0) == pytest.approx(1.0, abs=1e-10)
        rest = np.abs(cfg.psi.coeffs.copy())
        rest[basis14.index_of(1, 0)] = 0.0
        assert np.max(rest) < 1e-10

    @pytest.mark.parametrize("xi", [-2.4, 0.7, 3.0])
    def test_coefficient_string(self, geom, basis14, xi):
        cfg = displaced_tem10_config(xi, geom, basis14)
        want = displaced10_string(xi, 14)
        got = np.array([cfg.psi.coefficient(n, 0) for n in range(15)])
        np.testing.assert_allclose(got.real, want, atol=1e-12)
        # displacement acts along x only: no support outside the m = 0 column
        off = np.abs(cfg.psi.coeffs.reshape(15, 15)[:, 1:])
        assert np.max(off) < 1e-12

    def test_norm_within_truncation(self, geom, basis14):
        for xi, floor in ((0.5, 1 - 1e-12), (3.0, 0.99)):
            cfg = displaced_tem10_config(xi, geom, basis14)
            assert floor <= cfg.psi.norm_sq <= 1 + 1e-12

    def test_ground_overlap_closed_form(self, geom, basis14):
        """(psi(xi), u00) = (xi/sqrt(2)) e^{-xi^2/4}."""
        u00 = basis14.unit_vector(0, 0)
        for xi in np.linspace(-3, 3, 13):
            got = inner_product(displaced_tem10_config(float(xi), geom, basis14).psi, u00)
            want = xi / math.sqrt(2) * math.exp(-xi * xi / 4)
            assert got == pytest.approx(want, abs=1e-6)

    def test_policy(self, geom, basis14):
        with pytest.raises(ValueError, match="policy"):
            displaced_tem10_config(3.5, geom, basis14)
        with pytest.raises(ValueError, match="policy"):
            displaced_tem10_config(1.0, geom, ModeBasis(geom, 8))


class TestClosedForm:
    def test_frozen_values(self):
        assert r_closed_form(0.0, 0.0) == 0.0
        assert r_closed_form(math.sqrt(2), 0.0) == pytest.approx(INV_E, abs=1e-15)
        assert r_closed_form(math.sqrt(2), math.sqrt(2)) == pytest.approx(TWO_OVER_E, abs=1e-15)

    def test_symmetries(self):
        assert r_closed_form(1.1, -0.4) == r_closed_form(-0.4, 1.1)
        assert r_closed_form(1.1, -0.4) == r_closed_form(-1.1, 0.4)


class TestRSurface:
    def test_pipeline_matches_closed_form(self, geom, basis14):
        grid = np.linspace(-3, 3, 9)
        surf = r_surface(grid, grid, geom, basis14, SplitterCoefficients.balanced())
        assert surf.closed_form_error is not None
        assert np.max(surf.closed_form_error) < 1e-9
        assert surf.values[4, 4] < 1e-10  # xi = (0, 0) cell
        np.testing.assert_allclose(surf.values, surf.values.T, atol=1e-12)
        np.testing.assert_allclose(surf.values, surf.values[::-1, ::-1], atol=1e-9)

    def test_amplitude_convention(self, geom, basis14):
        """The surface uses sqrt(2)-amplitude configurations; with unit
        amplitude every value would land a factor 2 low."""
        assert CLOSED_FORM_FIELD_SCALE == math.sqrt(2.0)
        xi = 1.2
        unit_cfg = displaced_tem10_config(xi, geom, basis14)
        cfg2 = TwoPortFieldConfiguration(unit_cfg, unit_cfg)
        R_unit = r_functional(cfg2, basis14.unit_vector(0, 0), SplitterCoefficients.balanced())
        assert 2 * R_unit == pytest.approx(r_closed_form(xi, xi), abs=1e-9)

    def test_unbalanced_skips_comparison(self, geom, basis14):
        grid = np.array([0.0, 1.0])
        surf = r_surface(grid, grid, geom, basis14, SplitterCoefficients.from_transmission(0.9))
        assert surf.closed_form_error is None
        assert np.all(surf.values >= 0)

    def test_serialization(self, geom, basis14):
        grid = np.array([0.0, math.sqrt(2)])
        surf = r_surface(grid, grid, geom, basis14, SplitterCoefficients.balanced())
        csv = r_surface_to_csv(surf)
        lines = csv.strip().split("\n")
        assert lines[0] == "xi1,xi2,R"
        assert len(lines) == 5
        last = lines[-1].split(",")
        assert float(last[2]) == pytest.approx(TWO_OVER_E, abs=1e-9)
        doc = r_surface_to_json(surf)
        assert doc["xi1"] == [0.0, math.sqrt(2)]
        assert doc["values"][1][1] == pytest.approx(TWO_OVER_E, abs=1e-9)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            RSurface(np.array([0.0]), np.array([0.0]), np.array([[-1.0]]))


class TestTwoPointCorrelation:
    def test_real_mode_vanishes_for_any_balanced_splitter(self, geom):
        basis = ModeBasis(geom, 2)
        phi = basis.vector({(0, 0): 0.6, (1, 1): 0.8})
        splitters = [
            SplitterCoefficients.balanced(),
            SplitterCoefficients(rho=1 / math.sqrt(2), tau=1j / math.sqrt(2)),
        ]
        for s in splitters:
            for p1, p2 in [((0.3, 0.4, 0.0), (-0.2, 0.9, 0.0)), ((1.0, 0.0, 0.0), (0.5, -0.5, 0.0))]:
                assert abs(two_point_correlation(phi, p1, p2, s)) < 1e-12

    def test_mirror_splitter_vanishes(self, geom):
        basis = ModeBasis(geom, 1)
        phi = basis.vector({(0, 0): 1 / math.sqrt(2), (0, 1): 1j / math.sqrt(2)})
        s = SplitterCoefficients(rho=0.0, tau=1.0)
        assert two_point_correlation(phi, (0.1, 0.2, 1.0), (0.3, -0.1, 2.0), s) == 0.0

    def test_against_fock_expectation(self, geom, rng):
        """<1[phi]| Psi1_out Psi2_out |1[phi]> via dense matrices."""
        from qfield.fock import FockSpace, bs_unitary, field_operator_matrix, number_state

        basis = ModeBasis(geom, 1)
        labels = ((1, ModeIndex(0, 0)), (1, ModeIndex(0, 1)), (2, ModeIndex(0, 0)), (2, ModeIndex(0, 1)))
        space = FockSpace(mode_labels=labels, cutoff=2)
        s = SplitterCoefficients.from_transmission(0.8, 0.3)
        S = bs_unitary(space, s)
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        c /= np.linalg.norm(c)
        phi = basis.vector({(0, 0): c[0], (0, 1): c[1]})
        out = S @ number_state(space, phi, 1, 1)
        for _ in range(4):
            p1 = tuple(rng.uniform(-1, 1, size=3))
            p2 = tuple(rng.uniform(-1, 1, size=3))
            for t in (0.0, 0.37):
                P1 = field_operator_matrix(space, geom, *p1, t=t, port=1)
                P2 = field_operator_matrix(space, geom, *p2, t=t, port=2)
                oracle = np.vdot(out, P1 @ P2 @ out).real
                got = two_point_correlation(phi, p1, p2, s)
                assert got == pytest.approx(oracle, abs=1e-9)

    def test_result_is_plain_float(self, geom):
        basis = ModeBasis(geom, 1)
        phi = basis.vector({(0, 0): 1 / math.sqrt(2), (1, 0): 1j / math.sqrt(2)})
        val = two_point_correlation(phi, (0.2, 0.1, 0.5), (0.0, 0.3, 0.5), SplitterCoefficients.balanced())
        assert isinstance(val, float)


class TestDetectionRatio:
    def make_cfg2(self, basis, psi1, psi2):
        return TwoPortFieldConfiguration(FieldConfiguration(psi1), FieldConfiguration(psi2))

    def test_vacuum_counts(self, geom, rng):
        basis = ModeBasis(geom, 1)
        cfg2 = self.make_cfg2(
            basis, basis.vector(rng.normal(size=4) + 0.0j), basis.vector(rng.normal(size=4) + 0.0j)
        )
        phi = basis.unit_vector(0, 0)
        assert detection_probability_ratio(0, 0, cfg2, phi, phi) == 1.0

    def test_single_count_zero_overlap(self, geom):
        basis = ModeBasis(geom, 1)
        cfg2 = self.make_cfg2(basis, basis.unit_vector(1, 0), basis.unit_vector(1, 0))
        phi = basis.unit_vector(0, 0)
        assert detection_probability_ratio(1, 0, cfg2, phi, phi) == 0.0

    def test_second_count_hermite_root(self, geom):
        """H_2 vanishes at argument 1/sqrt(2), i.e. when (psi, phi) = 1:
        taking psi = phi lands exactly on the root."""
        basis = ModeBasis(geom, 1)
        phi = basis.vector({(0, 0): 0.6, (1, 0): 0.8})
        cfg2 = self.make_cfg2(basis, phi, phi)
        assert detection_probability_ratio(2, 0, cfg2, phi, phi) < 1e-30

    def test_product_of_number_ratios(self, geom, rng):
        """Identity between the joint-count expression and the per-port
        amplitude ratios, for real unit detection modes."""
        basis = ModeBasis(geom, 2)
        for _ in range(5):
            psi1 = basis.vector(rng.normal(size=9) + 0.0j)
            psi2 = basis.vector(rng.normal(size=9) + 0.0j)
            c1 = rng.normal(size=9)
            c2 = rng.normal(size=9)
            phi1 = basis.vector(c1 / np.linalg.norm(c1) + 0.0j)
            phi2 = basis.vector(c2 / np.linalg.norm(c2) + 0.0j)
            cfg2 = self.make_cfg2(basis, psi1, psi2)
            for N1 in range(3):
                for N2 in range(3):
                    got = detection_probability_ratio(N1, N2, cfg2, phi1, phi2)
                    want = (
                        abs(number_state_ratio(cfg2.port1, phi1, N1)) ** 2
                        * abs(number_state_ratio(cfg2.port2, phi2, N2)) ** 2
                    )
                    assert got == pytest.approx(want, abs=1e-10 * max(1.0, want))

    def test_complex_mode_rejected(self, geom):
        basis = ModeBasis(geom, 1)
        cfg2 = self.make_cfg2(basis, basis.zero_vector(), basis.zero_vector())
        good = basis.unit_vector(0, 0)
        bad = basis.vector({(0, 0): 1 / math.sqrt(2), (0, 1): 1j / math.sqrt(2)})
        with pytest.raises(ValueError, match="real"):
            detection_probability_ratio(0, 1, cfg2, good, bad)
        with pytest.raises(ValueError):
            detection_probability_ratio(-1, 0, cfg2, good, good)


class TestPhotonNumberCorrelation:
    def test_identically_zero(self, geom, rng):
        basis = ModeBasis(geom, 1)
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        phi = basis.vector(c / np.linalg.norm(c))
        got = photon_number_correlation(
            phi, basis.unit_vector(0, 0), basis.unit_vector(0, 1), SplitterCoefficients.balanced()
        )
        assert got == 0.0

    def test_oracle_confirms_zero_and_two_photon_contrast(self, geom):
        """One photon can't fire both counters; two photons can."""
        from qfield.fock import FockSpace, bs_unitary, number_state, projected_ladder

        basis = ModeBasis(geom, 1)
        phi = basis.unit_vector(0, 0)
        space = FockSpace(mode_labels=((1, ModeIndex(0, 0)), (2, ModeIndex(0, 0))), cutoff=2)
        S = bs_unitary(space, SplitterCoefficients.balanced())
        a1, a1d = projected_ladder(space, phi, 1)
        a2, a2d = projected_ladder(space, reflect_mode_vector(phi), 2)
        N1N2 = (a1d @ a1) @ (a2d @ a2)

        one = S @ number_state(space, phi, 1, 1)
        assert abs(np.vdot(one, N1N2 @ one)) < 1e-12

        two = S @ number_state(space, phi, 1, 2)
        assert abs(np.vdot(two, N1N2 @ two)) > 0.1
