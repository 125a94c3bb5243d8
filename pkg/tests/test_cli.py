from fractions import Fraction as F

import pytest

from kstab.cli import main
from kstab.problemfile import parse_problem
from kstab.scan import parse_grid, scan_destabilizer


@pytest.fixture
def a1_crease_file(tmp_path):
    path = tmp_path / "a1.prob"
    path.write_text(
        "[root_system]\nA1\n\n[polytope]\n-1\n1\n\n[crease]\n"
        "corner = 1\nepsilon = 1/2\nslope = 1\nsymmetrize = true\n")
    return str(path)


@pytest.fixture
def hexagon_file(tmp_path):
    rc = main(["gen-example", "--family", "wonderful", "--root-system", "A2",
               "--point", "1,1", "--out", str(tmp_path / "hex.prob")])
    assert rc == 0
    return str(tmp_path / "hex.prob")


class TestValidate:
    def test_hexagon_ok_with_delzant_failures(self, hexagon_file, capsys):
        rc = main(["validate", "--in", hexagon_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert "w_invariant: True" in out
        assert "wall_vertex_check: True" in out
        assert "delzant: False" in out
        assert "delzant_fail" in out

    def test_invalid_polytope_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.prob"
        path.write_text("[root_system]\nA1\n\n[polytope]\n-1\n2\n")
        assert main(["validate", "--in", str(path)]) == 2

    def test_parse_error_exit_4(self, tmp_path):
        path = tmp_path / "broken.prob"
        path.write_text("[root_system]\nA1\n[polytope]\nnot-a-number\n")
        assert main(["validate", "--in", str(path)]) == 4


class TestFutaki:
    def test_a1_crease_report(self, a1_crease_file, capsys):
        rc = main(["futaki", "--in", a1_crease_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert "minus_F1: 23/128" in out
        assert "bracket: 23/192" in out
        assert "VERDICT: non-negative" in out

    def test_mabuchi_prefactor(self, a1_crease_file, capsys):
        main(["mabuchi", "--in", a1_crease_file])
        out = capsys.readouterr().out
        assert "(2*pi)^1" in out
        assert "mabuchi_linear_coefficient: 23/192" in out


class TestOracleCommand:
    def test_agreement(self, a1_crease_file, capsys):
        rc = main(["oracle-futaki", "--in", a1_crease_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert "oracle_minus_F1: 23/128" in out
        assert "agreement: True" in out

    def test_budget_exit_3(self, a1_crease_file, capsys):
        rc = main(["oracle-futaki", "--in", a1_crease_file, "--budget", "3"])
        assert rc == 3


class TestDensity:
    def test_nine_rows(self, tmp_path, capsys):
        path = tmp_path / "a1.prob"
        path.write_text("[root_system]\nA1\n\n[polytope]\n-1\n1\n")
        rc = main(["density", "--in", str(path), "--grid", "1/8"])
        out = capsys.readouterr().out
        assert rc == 0
        rows = [ln for ln in out.splitlines()
                if "," in ln and not ln.startswith(("point", "#"))]
        assert len(rows) == 9

    def test_signs(self, tmp_path, capsys):
        path = tmp_path / "a1.prob"
        path.write_text("[root_system]\nA1\n\n[polytope]\n-1\n1\n")
        main(["density", "--in", str(path), "--grid", "1/4"])
        out = capsys.readouterr().out
        assert "1,-1" in out  # density 4x-9x^2 is negative at x=1


class TestLift:
    def test_a1_lift_report(self, a1_crease_file, capsys):
        rc = main(["lift", "--in", a1_crease_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert "lattice_scale: 2" in out
        assert "vertices: 6" in out


class TestLemma:
    def test_square_weight_one(self, tmp_path, capsys):
        path = tmp_path / "sq.prob"
        path.write_text("[root_system]\ntoric:2\n\n[polytope]\n0 0\n1 0\n0 1\n1 1\n")
        rc = main(["lemma-check", "--in", str(path), "--weight", "one"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "result: OK" in out


class TestHilbert:
    def test_a1_series(self, a1_crease_file, capsys):
        rc = main(["hilbert", "--in", a1_crease_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert "leading_coefficient: 1/3" in out
        assert "H_top_mass: 1/3" in out


class TestGenAndScan:
    def test_gen_roundtrips(self, tmp_path):
        out = tmp_path / "d72.prob"
        assert main(["gen-example", "--family", "donaldson72", "--n", "10",
                     "--out", str(out)]) == 0
        prob = parse_problem(out.read_text())
        assert prob.root_system == "toric:2"
        assert len(prob.vertices) == 9

    def test_scan_csv_deterministic(self, tmp_path, capsys):
        grid = "n=20;epsilon=1/32,1/16;slope=1"
        out1 = tmp_path / "scan1.csv"
        out2 = tmp_path / "scan2.csv"
        assert main(["scan", "--family", "donaldson72", "--grid", grid,
                     "--out", str(out1)]) == 0
        capsys.readouterr()
        assert main(["scan", "--family", "donaldson72", "--grid", grid,
                     "--out", str(out2)]) == 0
        assert out1.read_text() == out2.read_text()
        assert "nonauthoritative" in out1.read_text().splitlines()[0]

    def test_wonderful_a1_scan_finds_nothing(self, capsys):
        result = scan_destabilizer(
            "wonderful-a1", parse_grid("s=1,2;epsilon=1/8,1/4;slope=1"))
        assert not result.found_certificate
        assert all(r.bracket is None or r.bracket >= 0 for r in result.rows)

    def test_parse_grid(self):
        grid = parse_grid("n=10,20;epsilon=1/64;slope=1,4")
        assert grid["n"] == [F(10), F(20)]
        assert grid["epsilon"] == [F(1, 64)]
