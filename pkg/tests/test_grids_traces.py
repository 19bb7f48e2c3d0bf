"""Grids, trace construction, field CSV round trips, SVG determinism."""

import math

import numpy as np
import pytest

from farfield.errors import InputError
from farfield.grids import Field, as_trace, load_field_csv, make_grid, save_field_csv
from farfield.nonlinearity import make
from farfield.svgplot import svg_line_plot
from farfield.traces import bump, make_trace


def test_make_grid_node_counts():
    g = make_grid(40.0, 20.0, 0.25)
    assert (g.n1, g.n2) == (160, 80)
    assert g.x2("quarter").size == 81    # floor and far wall kept
    assert g.x2("half").size == 80       # periodic, top identified with bottom
    assert g.x1_nodes("quarter").size == 161
    assert g.x1_nodes("torus").size == 160
    assert g.x1[1] == 0.25


def test_make_grid_rejects_bad_spacing():
    with pytest.raises(InputError):
        make_grid(40.0, 20.0, 0.3)      # 0.3 does not divide 40
    with pytest.raises(InputError):
        make_grid(40.0, 20.0, -0.25)
    with pytest.raises(InputError):
        make_grid(0.25, 20.0, 0.25)     # single cell in x1


def test_as_trace_forms():
    g = make_grid(4.0, 2.0, 0.5)
    flat = as_trace(1.5, g, "half")
    assert flat.shape == (4,)
    assert np.all(flat == 1.5)
    fn = as_trace(lambda y: y * y, g, "quarter")
    assert fn[2] == pytest.approx(1.0)
    arr = as_trace(np.linspace(0, 1, 5), g, "quarter")
    assert arr.size == 5
    with pytest.raises(InputError):
        as_trace(np.zeros(7), g, "quarter")
    with pytest.raises(InputError):
        as_trace(1.0, g, "torus")
    with pytest.raises(InputError):
        as_trace(np.array([0.0, np.nan, 0, 0, 0]), g, "quarter")


def test_quarter_trace_corner_forced_to_floor():
    g = make_grid(4.0, 2.0, 0.5)
    tr = as_trace(2.0, g, "quarter")
    assert tr[0] == 0.0
    assert np.all(tr[1:] == 2.0)


def test_bump_support_and_height():
    y = np.linspace(0.0, 30.0, 301)
    b = bump(y, 10.0, 5.0, 0.5)
    assert b[y == 10.0][0] == pytest.approx(0.5)
    assert np.all(b[np.abs(y - 10.0) >= 5.0] == 0.0)
    assert np.all(b >= 0.0)
    assert np.all(b <= 0.5 + 1e-15)
    with pytest.raises(InputError):
        bump(y, 10.0, 0.0, 0.5)


def test_make_trace_specs(tmp_path):
    nl = make("abs-sin")
    g = make_grid(8.0, 4.0, 0.5)
    assert np.all(make_trace("constant:2", nl, g, "half") == 2.0)
    tb = make_trace("bump:2,1,0.3", nl, g, "quarter")
    assert tb.max() == pytest.approx(0.3)
    tp = make_trace(f"profile:{math.pi}", nl, g, "quarter")
    assert tp[0] == 0.0
    assert tp[-1] <= math.pi
    assert np.all(np.diff(tp) >= 0)
    csv_path = tmp_path / "trace.csv"
    csv_path.write_text("y,value\n0,0\n4,2\n")
    tt = make_trace(f"table:{csv_path}", nl, g, "quarter")
    assert tt[4] == pytest.approx(1.0)   # linear interpolation at y = 2
    with pytest.raises(InputError):
        make_trace("wave:1", nl, g, "half")
    with pytest.raises(InputError):
        make_trace("bump:1,2", nl, g, "half")


def test_field_csv_round_trip(tmp_path):
    g = make_grid(2.0, 1.0, 0.25)
    rng = np.random.default_rng(3)
    vals = rng.standard_normal((g.n1 + 1, g.n2 + 1))
    f = Field(vals, g, "quarter", residual=0.0)
    path = tmp_path / "field.csv"
    save_field_csv(f, str(path))
    x1, x2, back = load_field_csv(str(path))
    np.testing.assert_array_equal(back, vals)
    np.testing.assert_array_equal(x1, g.x1_nodes("quarter"))
    np.testing.assert_array_equal(x2, g.x2("quarter"))


def test_field_views():
    g = make_grid(2.0, 1.0, 0.25)
    vals = np.arange(9 * 5, dtype=float).reshape(9, 5)
    f = Field(vals, g, "quarter")
    np.testing.assert_array_equal(f.trace, vals[0])
    np.testing.assert_array_equal(f.far_strip(2), vals[-2:])


def test_svg_bytes_deterministic(tmp_path):
    xs = [1.0, 2.0, 4.0, 8.0]
    series = {"a": [1.0, 0.1, 0.01, 0.001], "b": [2.0, 0.5, 0.2, 0.1]}
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    svg_line_plot(str(p1), xs, series, title="t", logy=True)
    svg_line_plot(str(p2), xs, series, title="t", logy=True)
    b1, b2 = p1.read_bytes(), p2.read_bytes()
    assert b1 == b2
    assert b1.startswith(b"<svg") or b"<svg" in b1[:200]
