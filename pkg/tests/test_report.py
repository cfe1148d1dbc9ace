"""Delimited output fidelity and the figure renderers."""

import csv
import io
import json

import pytest

from heatsym.plots import (
    counterexample_figure,
    funk_hecke_figure,
    geometry_figure,
    symmetry_figure,
)
from heatsym.counterexample import LevelSphereRecord
from heatsym.report import format_value, render_csv, render_json, write_table
from heatsym.symmetry import circle_boundary

AWKWARD = [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -7.125e-9, 316.22901648101566]


@pytest.mark.parametrize("value", AWKWARD)
def test_float_formatting_round_trips(value):
    assert float(format_value(value)) == value


def test_format_value_passes_non_floats_through():
    assert format_value(3) == "3"
    assert format_value("label") == "label"


def test_csv_and_json_agree_after_parsing():
    columns = ("name", "x", "n")
    rows = [("alpha", 1.0 / 3.0, 2), ("beta", -7.125e-9, 5)]
    parsed_csv = list(csv.DictReader(io.StringIO(render_csv(columns, rows))))
    parsed_json = json.loads(render_json(columns, rows))
    assert len(parsed_csv) == len(parsed_json) == 2
    for c_row, j_row, row in zip(parsed_csv, parsed_json, rows):
        assert float(c_row["x"]) == float(j_row["x"]) == row[1]
        assert c_row["name"] == j_row["name"] == row[0]
        assert int(c_row["n"]) == int(j_row["n"]) == row[2]


def test_csv_has_header_and_unix_line_ends():
    text = render_csv(("a", "b"), [(1.0, 2.0)])
    lines = text.split("\n")
    assert lines[0] == "a,b"
    assert "\r" not in text


def test_row_width_mismatch_raises():
    with pytest.raises(ValueError):
        render_csv(("a", "b"), [(1.0,)])
    with pytest.raises(ValueError):
        render_json(("a", "b"), [(1.0, 2.0, 3.0)])


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_table(("a",), [(1.0,)], "yaml", tmp_path / "x.yaml")


def test_write_table_writes_the_rendered_text(tmp_path):
    out = tmp_path / "rows.json"
    text = write_table(("a",), [(1.5,)], "json", out)
    assert out.read_text() == text
    assert json.loads(text) == [{"a": 1.5}]


# ------------------------------------------------------------------- figures

def _fake_records():
    def rec(t, r):
        return LevelSphereRecord(
            t=t, r2=0.3 * r, r3=0.75 * r, r4=1.05 * r, r=r,
            lower=r - 1.0, upper=r + 1.0, f_residual=1e-14,
            sphere_spread=1e-15, nonradial_gap=1e-7, heat_residual=1e-9,
            bracket_width=1e-13, u_scale=1.0, multiple_roots=False)
    return [rec(10.0, 10.04), rec(100.0, 31.6)]


def test_counterexample_figure(tmp_path):
    path = tmp_path / "sweep.png"
    counterexample_figure(_fake_records(), path)
    assert path.stat().st_size > 0


def test_funk_hecke_figure(tmp_path):
    rows = [(k, 3, L, 4.0 * 3.14 / (k + 1), 0.0, 1e-15, 1e-14)
            for L in (0.5, 1.0) for k in range(3)]
    path = tmp_path / "eig.png"
    funk_hecke_figure(rows, path)
    assert path.stat().st_size > 0


def test_symmetry_figure(tmp_path):
    rows = [("radial-1d", "moment", f"t={2 ** n}", 1e-16, 1e-12, "below")
            for n in range(4)]
    path = tmp_path / "sym.png"
    symmetry_figure(rows, path)
    assert path.stat().st_size > 0


def test_geometry_figure(tmp_path):
    path = tmp_path / "geo.png"
    geometry_figure(circle_boundary(1.0, 16), path)
    assert path.stat().st_size > 0
