"""End-to-end checks of the command-line surface.

Commands run in-process through ``main`` so argparse handling, config
resolution, and file output all participate; values are cross-checked
against direct library calls on the same inputs.
"""

import json
import math

import numpy as np
import pytest

from qfield import (
    FieldConfiguration,
    SplitterCoefficients,
    TwoPortFieldConfiguration,
    coherent_state_ratio,
    detection_probability_ratio,
    mode_vector_to_json,
    number_state_ratio,
    r_functional,
    two_point_correlation,
)
from qfield.cli import _g, main, parse_mode_spec, parse_splitter
from qfield.modespace import ModeBasis


def read_doc(path):
    meta, header, rows = {}, None, []
    for line in path.read_text().split("\n"):
        if not line:
            continue
        if line.startswith("# "):
            key, _, val = line[2:].partition(" = ")
            meta[key] = val
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, header, rows


class TestFig2:
    def test_csv_accuracy_and_bit_stability(self, tmp_path):
        base = ["fig2", "--steps", "5", "--xi-min", "-2", "--xi-max", "2",
                "--n-max", "12", "--quad-order", "40"]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(base + ["--out", str(f1)]) == 0
        assert main(base + ["--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()

        meta, header, rows = read_doc(f1)
        assert meta["n_max"] == "12"
        assert {"rho", "tau", "omega", "w0", "k", "quad_order"} <= set(meta)
        assert header == ["xi1", "xi2", "R", "closed_form", "abs_difference"]
        assert len(rows) == 25
        for row in rows:
            xi1, xi2, R, closed, diff = (float(c) for c in row)
            assert diff <= 1e-6
            assert abs(R - closed) == diff
            if xi1 == 0.0 and xi2 == 0.0:
                assert R < 1e-10

    def test_json_format(self, tmp_path):
        f = tmp_path / "r.json"
        assert main(["fig2", "--steps", "3", "--n-max", "12", "--quad-order", "40",
                     "--format", "json", "--out", str(f)]) == 0
        doc = json.loads(f.read_text())
        assert doc["metadata"]["n_max"] == 12
        assert doc["metadata"]["tau"] == [1 / math.sqrt(2), 0.0]
        assert np.array(doc["R"]).shape == (3, 3)
        assert doc["max_abs_difference"] <= 1e-6

    def test_unbalanced_needs_acknowledgment(self, tmp_path, capsys):
        args = ["fig2", "--steps", "3", "--n-max", "12", "--quad-order", "40",
                "--splitter", "0.6,0,0,0.8", "--out", str(tmp_path / "u.csv")]
        assert main(args) == 2
        assert "--allow-unbalanced" in capsys.readouterr().err
        assert main(args + ["--allow-unbalanced"]) == 0

    def test_single_cell_grid(self, tmp_path):
        f = tmp_path / "one.csv"
        assert main(["fig2", "--steps", "1", "--xi-min", "1.0", "--xi-max", "1.0",
                     "--n-max", "12", "--quad-order", "40", "--out", str(f)]) == 0
        _, _, rows = read_doc(f)
        assert len(rows) == 1


class TestTable1:
    def test_matches_direct_call(self, tmp_path, geom):
        f = tmp_path / "t.csv"
        assert main(["table1", "--psi", "0.5*tem00+0.25*tem10", "--t", "0.37",
                     "--out", str(f)]) == 0
        basis = ModeBasis(geom, 4)
        cfg = FieldConfiguration(basis.vector({(0, 0): 0.5, (1, 0): 0.25}))
        phi = basis.unit_vector(0, 0)
        _, _, rows = read_doc(f)
        assert [r[0] for r in rows] == ["0", "1", "2", "3"]
        for row in rows:
            want = number_state_ratio(cfg, phi, int(row[0]), 0.37)
            assert float(row[1]) == pytest.approx(want.real, abs=1e-15)
            assert float(row[2]) == pytest.approx(want.imag, abs=1e-15)
            assert float(row[6]) <= 1e-10

    def test_orthogonal_psi_kills_odd_rows(self, tmp_path):
        f = tmp_path / "odd.csv"
        assert main(["table1", "--psi", "tem10", "--phi", "tem00", "--out", str(f)]) == 0
        _, _, rows = read_doc(f)
        for row in rows:
            if int(row[0]) % 2 == 1:
                assert float(row[1]) == 0.0
                assert float(row[2]) == 0.0

    def test_time_only_rotates_phase(self, tmp_path):
        mags = []
        for t in ("0", "0.9"):
            f = tmp_path / f"t{t}.csv"
            assert main(["table1", "--psi", "0.4*tem00+0.3*tem11", "--t", t,
                         "--out", str(f)]) == 0
            _, _, rows = read_doc(f)
            mags.append([float(r[3]) for r in rows])
        np.testing.assert_allclose(mags[0], mags[1], atol=1e-12)


class TestSingleValueCommands:
    def test_amplitude_number_row(self, tmp_path, geom):
        f = tmp_path / "amp.csv"
        assert main(["amplitude", "--psi", "0.7*tem00", "--n", "2", "--out", str(f)]) == 0
        basis = ModeBasis(geom, 4)
        want = number_state_ratio(
            FieldConfiguration(basis.vector({(0, 0): 0.7})), basis.unit_vector(0, 0), 2
        )
        _, header, rows = read_doc(f)
        assert header == ["N", "re_ratio", "im_ratio", "abs_ratio_sq"]
        assert float(rows[0][1]) == pytest.approx(want.real, abs=1e-16)

    def test_amplitude_coherent_row(self, tmp_path, geom):
        f = tmp_path / "coh.csv"
        assert main(["amplitude", "--psi", "0.7*tem00", "--alpha", "0.2+0.1j",
                     "--out", str(f)]) == 0
        basis = ModeBasis(geom, 4)
        want = coherent_state_ratio(
            FieldConfiguration(basis.vector({(0, 0): 0.7})), basis.unit_vector(0, 0), 0.2 + 0.1j
        )
        _, header, rows = read_doc(f)
        assert header[0] == "alpha_re"
        assert float(rows[0][2]) == pytest.approx(want.real, abs=1e-16)
        assert float(rows[0][3]) == pytest.approx(want.imag, abs=1e-16)

    def test_r_functional_value(self, tmp_path, geom):
        f = tmp_path / "r.json"
        assert main(["r-functional", "--psi1", "0.6*tem10", "--psi2", "0.8*tem10",
                     "--phi", "tem10", "--format", "json", "--out", str(f)]) == 0
        basis = ModeBasis(geom, 4)
        cfg2 = TwoPortFieldConfiguration(
            FieldConfiguration(basis.vector({(1, 0): 0.6})),
            FieldConfiguration(basis.vector({(1, 0): 0.8})),
        )
        want = r_functional(cfg2, basis.unit_vector(1, 0), SplitterCoefficients.balanced())
        assert json.loads(f.read_text())["R"] == pytest.approx(want, rel=1e-15)

    def test_correlation_field_kind(self, tmp_path, geom):
        f = tmp_path / "c.csv"
        phi_spec = "0.6*tem00+0.8j*tem10"
        assert main(["correlation", "--phi", phi_spec, "--point1", "0.3,0.1,0.5",
                     "--point2=-0.2,0.4,0.5", "--out", str(f)]) == 0
        basis = ModeBasis(geom, 2)
        want = two_point_correlation(
            basis.vector({(0, 0): 0.6, (1, 0): 0.8j}),
            (0.3, 0.1, 0.5), (-0.2, 0.4, 0.5), SplitterCoefficients.balanced(),
        )
        _, _, rows = read_doc(f)
        assert float(rows[0][6]) == pytest.approx(want, abs=1e-16)

    def test_correlation_photon_number_kind(self, tmp_path):
        f = tmp_path / "n.csv"
        assert main(["correlation", "--kind", "photon-number", "--out", str(f)]) == 0
        _, header, rows = read_doc(f)
        assert header == ["correlation"]
        assert float(rows[0][0]) == 0.0

    def test_detect_prob(self, tmp_path, geom):
        f = tmp_path / "d.csv"
        assert main(["detect-prob", "--n1", "1", "--n2", "2", "--psi1", "0.5*tem00",
                     "--psi2", "0.3*tem00+0.2*tem10", "--out", str(f)]) == 0
        basis = ModeBasis(geom, 4)
        cfg2 = TwoPortFieldConfiguration(
            FieldConfiguration(basis.vector({(0, 0): 0.5})),
            FieldConfiguration(basis.vector({(0, 0): 0.3, (1, 0): 0.2})),
        )
        u = basis.unit_vector(0, 0)
        want = detection_probability_ratio(1, 2, cfg2, u, u)
        _, _, rows = read_doc(f)
        assert float(rows[0][2]) == pytest.approx(want, rel=1e-15)


class TestVerifyCommand:
    def test_full_suite_report(self, tmp_path):
        f = tmp_path / "report.json"
        assert main(["verify", "--suite", "all", "--out", str(f)]) == 0
        doc = json.loads(f.read_text())
        assert doc["pass"] is True
        assert len(doc["checks"]) >= 20
        for check in doc["checks"]:
            assert set(check) == {"check_name", "max_error", "tolerance", "pass"}
            assert check["pass"] is True
        assert "metadata" in doc

    def test_unknown_suite_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "everything"])
        assert exc.value.code == 2

    def test_corrupted_splitter_fails_fast(self, capsys):
        assert main(["verify", "--suite", "beamsplitter",
                     "--splitter", "0.74,0,0.74,0"]) == 2
        assert "deviates" in capsys.readouterr().err

    def test_oracle_verify_alias(self, tmp_path):
        f = tmp_path / "oracle.json"
        assert main(["oracle", "verify", "--out", str(f)]) == 0
        doc = json.loads(f.read_text())
        assert doc["suite"] == "oracle"
        assert doc["pass"] is True

    def test_oracle_dimension_cap_diagnostic(self, capsys):
        assert main(["oracle", "verify", "--n-max", "4"]) == 2
        assert "cap" in capsys.readouterr().err


class TestConfigResolution:
    def test_file_plus_flag_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"n_max": 12, "w0": 1.5, "quad_order": 48}))
        f = tmp_path / "out.csv"
        assert main(["fig2", "--config", str(cfg), "--n-max", "13", "--steps", "1",
                     "--xi-min", "0.5", "--xi-max", "0.5", "--out", str(f)]) == 0
        meta, _, _ = read_doc(f)
        assert meta["n_max"] == "13"
        assert meta["w0"] == "1.5"

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"waist": 2.0}))
        assert main(["verify", "--suite", "beamsplitter", "--config", str(cfg)]) == 2
        assert "unknown config key" in capsys.readouterr().err

    def test_thread_cap_env(self, monkeypatch, capsys):
        monkeypatch.setenv("QFIELD_NUM_THREADS", "1")
        assert main(["verify", "--suite", "beamsplitter"]) == 0
        monkeypatch.setenv("QFIELD_NUM_THREADS", "0")
        assert main(["verify", "--suite", "beamsplitter"]) == 2
        assert "QFIELD_NUM_THREADS" in capsys.readouterr().err


class TestSpecParsers:
    def test_mode_spec_combination(self, geom):
        basis = ModeBasis(geom, 2)
        v = parse_mode_spec("0.6*tem00+0.8j*tem10", basis)
        assert v.coefficient(0, 0) == 0.6
        assert v.coefficient(1, 0) == 0.8j

    def test_mode_spec_from_file(self, tmp_path, geom):
        basis = ModeBasis(geom, 3)
        original = basis.vector({(0, 0): 0.3, (2, 1): 0.4j})
        path = tmp_path / "mode.json"
        path.write_text(json.dumps(mode_vector_to_json(original)))
        loaded = parse_mode_spec(str(path), ModeBasis(geom, 5))
        assert loaded.coefficient(2, 1) == 0.4j

    def test_mode_spec_errors(self, geom):
        basis = ModeBasis(geom, 1)
        with pytest.raises(ValueError, match="temNM"):
            parse_mode_spec("gauss", basis)
        with pytest.raises(ValueError, match="n_max"):
            parse_mode_spec("tem21", basis)
        with pytest.raises(ValueError, match="coefficient"):
            parse_mode_spec("x*tem00", basis)

    def test_splitter_spec(self):
        assert parse_splitter("5050") == SplitterCoefficients.balanced()
        s = parse_splitter("0,0.6,0.8,0")
        assert s.rho == 0.6j and s.tau == 0.8
        with pytest.raises(ValueError, match="splitter"):
            parse_splitter("0.5,0.5")

    def test_seventeen_digit_round_trip(self):
        for x in (math.pi, 1 / 3, 2 / math.e, 6.02e23):
            assert float(_g(x)) == x
