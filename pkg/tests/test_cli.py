"""CLI contracts: schemas, output formats, determinism, exit codes."""
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from whichway.cli import main

STANDARD_GEOMETRY = {
    "lambda_d": 5e-7,
    "slit_sep": 1e-4,
    "screen_dist": 1.0,
    "packet_width": 1e-5,
}
# thinner packets: the envelope spans ~8 fringes, extrema sit on the ideal lattice
SEPARATED_GEOMETRY = dict(STANDARD_GEOMETRY, packet_width=1e-6)
W_STANDARD = 0.005000031582734083


def write_config(tmp_path, name="config.json", **overrides):
    cfg = {
        "geometry": dict(STANDARD_GEOMETRY),
        "detector": {"overlap": 1.0, "phase": 0.0},
    }
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestPattern:
    def test_csv_contract_and_fringe_regression(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "pattern.csv"
        assert main(["pattern", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["x_m", "intensity", "envelope", "interference_term"]
        data = np.array([[float(v) for v in row] for row in rows])
        xs, intensity = data[:, 0], data[:, 1]
        # every row decomposes exactly
        np.testing.assert_allclose(intensity, data[:, 2] + data[:, 3], atol=1e-18)
        # s=1 minima spacing tracks the fringe width to 1%
        interior = (intensity[1:-1] < intensity[:-2]) & (intensity[1:-1] < intensity[2:])
        minima = xs[1:-1][interior]
        minima = minima[np.abs(minima) < 2 * W_STANDARD]
        np.testing.assert_allclose(np.diff(np.sort(minima)), W_STANDARD, rtol=0.01)

    def test_no_overlap_zero_interference_column(self, tmp_path):
        cfg = write_config(tmp_path, detector={"overlap": 0.0})
        out = tmp_path / "flat.csv"
        assert main(["pattern", "--config", str(cfg), "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert all(abs(float(row[3])) < 1e-15 for row in rows)

    def test_deterministic_bytes(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["pattern", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["pattern", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_format(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "pattern.json"
        assert main(["pattern", "--config", str(cfg), "--out", str(out),
                     "--format", "json"]) == 0
        payload = json.loads(out.read_text())
        assert set(payload) == {"x_m", "intensity", "envelope", "interference_term"}

    def test_seventeen_digit_round_trip(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "p.csv"
        main(["pattern", "--config", str(cfg), "--out", str(out)])
        _, rows = read_csv(out)
        cell = rows[len(rows) // 3][1]
        assert format(float(cell), ".17g") == cell

    def test_negative_slit_sep_rejected(self, tmp_path):
        cfg = write_config(tmp_path, geometry=dict(STANDARD_GEOMETRY, slit_sep=-1e-4))
        out = tmp_path / "nope.csv"
        assert main(["pattern", "--config", str(cfg), "--out", str(out)]) == 1
        assert not out.exists()

    def test_unknown_key_rejected(self, tmp_path):
        cfg = write_config(tmp_path, geometry=dict(STANDARD_GEOMETRY, slit_width=1e-5))
        assert main(["pattern", "--config", str(cfg)]) == 1

    def test_missing_geometry_field_rejected(self, tmp_path):
        geo = dict(STANDARD_GEOMETRY)
        del geo["screen_dist"]
        cfg = write_config(tmp_path, geometry=geo)
        assert main(["pattern", "--config", str(cfg)]) == 1

    def test_missing_config_file(self, tmp_path):
        assert main(["pattern", "--config", str(tmp_path / "absent.json")]) == 1

    def test_numeric_failure_exit_code(self, tmp_path):
        # cosh overflow against gaussian underflow -> NaN in the envelope column
        cfg = write_config(
            tmp_path,
            geometry={"lambda_d": 1e-12, "slit_sep": 1e-2, "screen_dist": 1e-3,
                      "packet_width": 1e-9},
            detector={"overlap": 0.0},
            grid={"x_min": -0.02, "x_max": 0.02, "n_points": 256},
        )
        out = tmp_path / "broken.csv"
        with np.errstate(over="ignore", invalid="ignore"):
            assert main(["pattern", "--config", str(cfg), "--out", str(out)]) == 2
        assert not out.exists()

    def test_coarse_grid_is_config_error(self, tmp_path):
        cfg = write_config(tmp_path, grid={"x_min": -0.025, "x_max": 0.025, "n_points": 64})
        assert main(["pattern", "--config", str(cfg)]) == 1


class TestScanDuality:
    def sweep_config(self, tmp_path, values):
        cfg = {
            "base": {
                "geometry": dict(STANDARD_GEOMETRY),
                "detector": {"overlap": 0.0},
            },
            "sweep_param": "overlap",
            "values": values,
        }
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_sweep_rows(self, tmp_path):
        cfg = self.sweep_config(tmp_path, [0.0, 0.25, 0.5, 0.75, 1.0])
        out = tmp_path / "sweep.csv"
        assert main(["scan-duality", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["s", "D", "V_bound", "V_numeric", "dP2", "dQ2", "lhs",
                          "rhs_unc", "egy_ok", "unc_ok"]
        assert len(rows) == 5
        for row in rows:
            s, d_val, v_bound = float(row[0]), float(row[1]), float(row[2])
            assert row[8] == "true" and row[9] == "true"
            assert d_val**2 + v_bound**2 == pytest.approx(1.0, abs=1e-12)

    def test_single_zero_overlap(self, tmp_path):
        cfg = self.sweep_config(tmp_path, [0.0])
        out = tmp_path / "one.csv"
        assert main(["scan-duality", "--config", str(cfg), "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert float(rows[0][1]) == 1.0
        assert float(rows[0][3]) == 0.0

    def test_empty_values_rejected(self, tmp_path):
        cfg = self.sweep_config(tmp_path, [])
        assert main(["scan-duality", "--config", str(cfg)]) == 1

    def test_out_of_domain_value_rejected(self, tmp_path):
        cfg = self.sweep_config(tmp_path, [0.5, 1.5])
        assert main(["scan-duality", "--config", str(cfg)]) == 1

    @pytest.mark.parametrize(
        "param,values",
        [
            ("phase", [0.0, 1.0, 3.0]),
            ("packet_width", [2e-6, 5e-6, 1e-5]),
            ("screen_dist", [0.5, 1.0, 2.0]),
        ],
    )
    def test_other_sweep_parameters(self, tmp_path, param, values):
        cfg = {
            "base": {
                "geometry": dict(STANDARD_GEOMETRY),
                "detector": {"overlap": 0.6},
            },
            "sweep_param": param,
            "values": values,
        }
        path = tmp_path / "other.json"
        path.write_text(json.dumps(cfg))
        out = tmp_path / "other.csv"
        assert main(["scan-duality", "--config", str(path), "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == len(values)
        for row in rows:
            assert float(row[0]) == 0.6  # overlap column stays at the base value
            assert abs(float(row[3]) - 0.6) < 0.02

    def test_negative_packet_width_sweep_rejected(self, tmp_path):
        cfg = {
            "base": {"geometry": dict(STANDARD_GEOMETRY), "detector": {"overlap": 0.5}},
            "sweep_param": "packet_width",
            "values": [-1e-5],
        }
        path = tmp_path / "neg.json"
        path.write_text(json.dumps(cfg))
        assert main(["scan-duality", "--config", str(path)]) == 1

    def test_json_format(self, tmp_path):
        cfg = self.sweep_config(tmp_path, [0.0, 1.0])
        out = tmp_path / "sweep.json.out"
        assert main(["scan-duality", "--config", str(cfg), "--out", str(out),
                     "--format", "json"]) == 0
        payload = json.loads(out.read_text())
        assert payload["egy_ok"] == [True, True]
        assert payload["D"] == [1.0, 0.0]

    def test_deterministic(self, tmp_path):
        cfg = self.sweep_config(tmp_path, [0.0, 0.5, 1.0])
        out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        main(["scan-duality", "--config", str(cfg), "--out", str(out1)])
        main(["scan-duality", "--config", str(cfg), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestEraser:
    def eraser_config(self, tmp_path, basis_angle=math.pi / 4, n_points=8193):
        return write_config(
            tmp_path,
            geometry=dict(SEPARATED_GEOMETRY),
            detector={"overlap": 0.0},
            eraser={"enabled": True, "basis_angle": basis_angle},
            grid={"x_min": -0.025, "x_max": 0.025, "n_points": n_points},
        )

    def test_complementary_patterns(self, tmp_path):
        cfg = self.eraser_config(tmp_path)
        out = tmp_path / "eraser.csv"
        assert main(["eraser", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["x_m", "i_q1", "i_q2", "i_sum"]
        data = np.array([[float(v) for v in row] for row in rows])
        xs, q1, q2, total = data.T
        mask = total > 1e-300
        np.testing.assert_allclose((q1 + q2)[mask], total[mask], rtol=1e-12)
        # half-fringe displacement between fringe and antifringe
        w = 5e-3 + 16 * math.pi**2 * (1e-6) ** 4 / (5e-7 * 1e-4 * 1.0)
        shift = abs(xs[np.argmax(q1)] - xs[np.argmax(q2)])
        cell = xs[1] - xs[0]
        assert abs(shift - w / 2) <= cell

    def test_pointer_basis_no_fringes(self, tmp_path):
        cfg = self.eraser_config(tmp_path, basis_angle=0.0)
        out = tmp_path / "pointer.csv"
        assert main(["eraser", "--config", str(cfg), "--out", str(out)]) == 0
        _, rows = read_csv(out)
        data = np.array([[float(v) for v in row] for row in rows])
        for column in (data[:, 1], data[:, 2]):
            interior = (column[1:-1] > column[:-2]) & (column[1:-1] > column[2:])
            assert interior.sum() <= 1  # single hump

    def test_requires_enabled_flag(self, tmp_path):
        cfg = write_config(tmp_path, eraser={"enabled": False})
        assert main(["eraser", "--config", str(cfg)]) == 1

    def test_deterministic(self, tmp_path):
        cfg = self.eraser_config(tmp_path)
        out1, out2 = tmp_path / "e1.csv", tmp_path / "e2.csv"
        main(["eraser", "--config", str(cfg), "--out", str(out1)])
        main(["eraser", "--config", str(cfg), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestUncertaintyScan:
    def test_lattice_rows_and_summary(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["uncertainty-scan", "--samples", "2000", "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["n1", "n2", "n3", "var_sigma2", "var_sigma3", "sum"]
        assert rows[-1][0] == "min_sum"
        min_sum = float(rows[-1][5])
        assert min_sum >= 1.0 - 1e-12
        data = np.array([[float(v) for v in row] for row in rows[:-1]])
        assert len(data) == 2000
        # pole rows saturate the bound
        poles = data[np.abs(np.abs(data[:, 2]) - 1.0) < 1e-15]
        assert len(poles) >= 2
        np.testing.assert_allclose(poles[:, 5], 1.0, atol=1e-12)

    def test_single_sample(self, tmp_path):
        out = tmp_path / "one.csv"
        assert main(["uncertainty-scan", "--samples", "1", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 2  # one lattice row plus the summary

    def test_zero_samples_rejected(self):
        assert main(["uncertainty-scan", "--samples", "0"]) == 1

    def test_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "u1.csv", tmp_path / "u2.csv"
        main(["uncertainty-scan", "--samples", "500", "--out", str(out1)])
        main(["uncertainty-scan", "--samples", "500", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_format_carries_summary(self, tmp_path):
        out = tmp_path / "scan.json"
        assert main(["uncertainty-scan", "--samples", "50", "--out", str(out),
                     "--format", "json"]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["sum"]) == 50
        assert payload["min_sum"] >= 1.0 - 1e-12

    def test_stdout_emission(self, capsys):
        assert main(["uncertainty-scan", "--samples", "3"]) == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("n1,n2,n3,")
        assert "min_sum" in captured.out


class TestBohr:
    def test_json_report(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "bohr.json"
        assert main(["bohr", "--config", str(cfg), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert set(payload) == {"delta_px", "delta_x", "fringe_sep", "ratio"}
        assert payload["ratio"] == pytest.approx(0.0795775, abs=1e-7)
        assert payload["fringe_sep"] == pytest.approx(5e-3, rel=1e-12)

    def test_csv_format(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "bohr.csv"
        assert main(["bohr", "--config", str(cfg), "--out", str(out), "--format", "csv"]) == 0
        header, rows = read_csv(out)
        assert header == ["delta_px", "delta_x", "fringe_sep", "ratio"]
        assert len(rows) == 1

    def test_deterministic(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "b1.json", tmp_path / "b2.json"
        main(["bohr", "--config", str(cfg), "--out", str(out1)])
        main(["bohr", "--config", str(cfg), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestEntryPoints:
    def test_module_help_subprocess(self):
        proc = subprocess.run(
            [sys.executable, "-m", "whichway", "--help"], capture_output=True, text=True
        )
        assert proc.returncode == 0
        assert "pattern" in proc.stdout and "scan-duality" in proc.stdout

    def test_subcommand_help(self):
        for name in ("pattern", "scan-duality", "eraser", "uncertainty-scan", "bohr"):
            assert main([name, "--help"]) == 0

    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_missing_required_flag(self, capsys):
        assert main(["pattern"]) == 1
