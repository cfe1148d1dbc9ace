"""End-to-end runs of the command line surface, including exit codes."""

import csv
import io
import json

import pytest

from heatsym import cli
from heatsym.errors import StructureError


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -------------------------------------------------------------- arg parsing

def test_parse_times_geometric_and_explicit():
    assert cli._parse_times("1:1000:4") == (1.0, 10.0, 100.0, 1000.0)
    assert cli._parse_times("10,100") == (10.0, 100.0)
    assert cli._parse_times("5:5:1") == (5.0,)
    with pytest.raises(ValueError):
        cli._parse_times("1:10:0")
    with pytest.raises(ValueError):
        cli._parse_times("abc")


def test_parse_degrees():
    assert cli._parse_degrees("0..6") == tuple(range(7))
    assert cli._parse_degrees("1,3,5") == (1, 3, 5)
    with pytest.raises(ValueError):
        cli._parse_degrees("2..x")


def test_run_config_validation():
    with pytest.raises(ValueError):
        cli.RunConfig(command="counterexample", fmt="xml")
    with pytest.raises(ValueError):
        cli.RunConfig(command="counterexample", tol=-1.0)
    with pytest.raises(ValueError):
        cli.RunConfig(command="counterexample", t_values=(10.0, 5.0))
    with pytest.raises(ValueError):
        cli.RunConfig(command="symmetry", plot=True)  # plot needs out


# ------------------------------------------------------------------ commands

def test_funk_hecke_default_grid(capsys):
    code, out, _ = run(capsys, "funk-hecke")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 21  # k in 0..6 crossed with three kernel exponents
    first = {(r["k"], r["L"]): r for r in rows}[("0", "1")]
    assert float(first["lambda_closed"]) == pytest.approx(14.7680, abs=1e-4)


def test_funk_hecke_output_is_deterministic(capsys):
    a = run(capsys, "funk-hecke", "--k", "0..2", "--L", "1")
    b = run(capsys, "funk-hecke", "--k", "0..2", "--L", "1")
    assert a == b


def test_counterexample_header_and_exit(capsys):
    code, out, _ = run(capsys, "counterexample", "--t", "10,100")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == ("t,r2,r3,r4,r,lower,upper,f_residual,"
                       "sphere_spread,nonradial_gap,heat_residual")
    assert len(lines) == 3


def test_csv_and_json_files_carry_equal_values(tmp_path, capsys):
    out_csv = tmp_path / "eig.csv"
    out_json = tmp_path / "eig.json"
    args = ("funk-hecke", "--k", "0..3", "--L", "0.5,2")
    assert run(capsys, *args, "--out", str(out_csv))[0] == 0
    assert run(capsys, *args, "--format", "json", "--out", str(out_json))[0] == 0
    c_rows = list(csv.DictReader(out_csv.open()))
    j_rows = json.loads(out_json.read_text())
    assert len(c_rows) == len(j_rows) == 8
    for cr, jr in zip(c_rows, j_rows):
        for key in jr:
            if isinstance(jr[key], float):
                assert float(cr[key]) == jr[key]
            else:
                assert str(jr[key]) == cr[key]


def test_plot_writes_figure_next_to_table(tmp_path, capsys):
    out = tmp_path / "eig.csv"
    code, printed, _ = run(capsys, "funk-hecke", "--k", "0..1", "--L", "1",
                           "--out", str(out), "--plot")
    assert code == 0
    assert out.exists()
    assert (tmp_path / "eig.png").stat().st_size > 0
    assert "figure saved" in printed


def test_symmetry_scenarios(capsys):
    code, out, _ = run(capsys, "symmetry", "radial-1d")
    assert code == 0
    assert "verdict symmetric (expected symmetric)" in out
    code, out, _ = run(capsys, "symmetry", "asymmetric-1d")
    assert code == 0
    assert "verdict asymmetric (expected asymmetric)" in out


def test_geometry_shapes(capsys):
    assert run(capsys, "geometry", "circle")[0] == 0
    assert run(capsys, "geometry", "ellipse")[0] == 0
    assert run(capsys, "geometry", "sphere", "--noise", "1e-8")[0] == 0


def test_geometry_round_ellipse_breaks_expectation(capsys):
    # equal axes make the ellipse round, so the misalignment expectation fails
    code, _out, _err = run(capsys, "geometry", "ellipse", "--axes", "1,1")
    assert code == 1


def test_verify_all_list(capsys):
    code, out, _ = run(capsys, "verify-all", "--list")
    lines = [ln for ln in out.strip().split("\n") if ln.startswith("criterion")]
    assert code == 0
    assert len(lines) == 8


# ---------------------------------------------------------------- exit codes

@pytest.mark.parametrize("argv", [
    ("counterexample", "--a", "-1"),
    ("funk-hecke", "--L", "0"),
    ("counterexample", "--t", "100,10"),
    ("symmetry", "radial-1d", "--plot"),
    ("symmetry", "no-such-scenario"),
    ("geometry", "ellipse", "--axes", "0,1"),
    ("no-such-command",),
])
def test_usage_errors_exit_64(capsys, argv):
    assert run(capsys, *argv)[0] == 64


def test_structure_error_exits_2(monkeypatch, capsys):
    def boom(a, t_grid, tol=1e-12):
        raise StructureError("invariant violated", [("radius", 1.0)])

    monkeypatch.setattr(cli.counterexample, "counterexample_sweep", boom)
    code, _out, err = run(capsys, "counterexample", "--t", "10,100")
    assert code == 2
    assert "invariant violated" in err
    assert "radius" in err
