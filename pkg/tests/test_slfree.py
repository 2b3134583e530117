import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calgrass.grassmannian import OrientedFrame, random_frames
from calgrass.slfree import (
    CATALOG,
    CSV_COLUMNS,
    RefineGridError,
    _split_normalized,
    dimension_equation_solutions,
    gauss_degree,
    get_surface,
    scan_to_csv,
    scan_values,
    sl_tangent_scan,
    slag_dim,
    split_plus_minus,
)


def test_dimension_equation():
    assert dimension_equation_solutions(10) == [(2, 2), (6, 5)]
    assert dimension_equation_solutions(1) == []
    assert dimension_equation_solutions(30) == [(2, 2), (6, 5)]


def test_dimension_equation_brute_force_oracle():
    # the equation rearranged as k (2n + 2) = 3n^2 - n + 2
    sols = [(k, n) for n in range(1, 20) for k in range(n, 2 * n - 1)
            if k <= 10 and k * (2 * n + 2) == 3 * n * n - n + 2]
    assert sorted(sols) == dimension_equation_solutions(10)


def test_slag_dim():
    assert [slag_dim(n) for n in (2, 3, 4)] == [2, 5, 9]


def test_split_of_coordinate_planes():
    e12 = split_plus_minus(OrientedFrame.coordinate(4, (1, 2)))
    e34 = split_plus_minus(OrientedFrame.coordinate(4, (3, 4)))
    assert np.allclose(e12.p_plus, [1, 0, 0]) and np.allclose(e12.p_minus, [1, 0, 0])
    assert np.allclose(e34.p_plus, [1, 0, 0]) and np.allclose(e34.p_minus, [-1, 0, 0])
    sl = split_plus_minus(OrientedFrame.coordinate(4, (1, 3)))
    assert np.allclose(sl.p_plus, [0, 1, 0])


def test_split_rejects_degenerate_and_wrong_shapes():
    with pytest.raises(ArithmeticError):
        _split_normalized(np.zeros(4), np.zeros(4))
    with pytest.raises(ValueError):
        split_plus_minus(OrientedFrame.coordinate(6, (1, 2)))


@st.composite
def rotation_cases(draw):
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    Q, R = np.linalg.qr(rng.normal(size=(4, 4)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q, random_frames(4, 2, 2, rng)


@settings(max_examples=100)
@given(rotation_cases())
def test_split_is_so4_equivariant(case):
    Q, F = case
    a, b = (split_plus_minus(OrientedFrame(f)) for f in F)
    ra, rb = (split_plus_minus(OrientedFrame(Q @ f)) for f in F)
    assert abs(a.p_plus @ b.p_plus - ra.p_plus @ rb.p_plus) < 1e-8
    assert abs(a.p_minus @ b.p_minus - ra.p_minus @ rb.p_minus) < 1e-8


def test_restricted_forms_closed_form():
    s = CATALOG["z_clifford_torus"]
    U, V, absre, om, im = scan_values(s, (16, 16))
    assert np.allclose(absre, np.abs(np.cos(U + V)))
    assert np.allclose(om, 0)  # the Clifford torus is Lagrangian
    w = CATALOG["w_torus"]
    assert np.abs(scan_values(w, (16, 16))[2]).max() < 1e-15
    sphere = CATALOG["round_sphere"]
    U, V, absre, _, _ = scan_values(sphere, (16, 16))
    assert np.allclose(absre, np.abs(sphere.point(U, V)[..., 1]))  # |Re Omega| = |x2|


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_gauss_degree_is_minus_half_euler_characteristic(name):
    s = CATALOG[name]
    d = gauss_degree(s)
    assert d.deg_plus == d.deg_minus == -s.euler_characteristic // 2
    assert d.residual < 0.1


def test_sphere_degree_sign_convention():
    d = gauss_degree(CATALOG["round_sphere"])
    assert (d.deg_plus, d.deg_minus) == (-1, -1)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_gauss_degree_stable_under_refinement(name):
    s = CATALOG[name]
    a, b = gauss_degree(s, (60, 60)), gauss_degree(s, (120, 120))
    assert (a.deg_plus, a.deg_minus) == (b.deg_plus, b.deg_minus)


def test_coarse_grid_asks_for_refinement():
    with pytest.raises(RefineGridError):
        gauss_degree(CATALOG["round_sphere"], (20, 20), max_residual=1e-6)


@settings(max_examples=20)
@given(st.floats(1e-9, 0.499))
def test_w_torus_scan_is_empty(tol):
    assert sl_tangent_scan(CATALOG["w_torus"], (32, 32), tol) == []


def test_z_clifford_scan_finds_the_locus():
    s = CATALOG["z_clifford_torus"]
    pts = sl_tangent_scan(s, (32, 32))
    h = 2 * math.pi / 32
    assert pts
    assert max(abs(math.remainder(p.u + p.v, math.pi)) for p in pts) <= h
    assert min(p.abs_re_omega for p in pts) >= 1 - 1e-6


def test_sphere_scan_finds_the_two_sl_points():
    s = CATALOG["round_sphere"]
    pts = sl_tangent_scan(s, (32, 32))
    assert len(pts) == 2
    for p in pts:
        x = s.point(np.array(p.u), np.array(p.v))
        assert np.allclose(np.abs(x), [0, 1, 0, 0], atol=1e-6)
        assert abs(p.omega) < 1e-6 and abs(p.im_omega) < 1e-6


def test_csv_export(tmp_path):
    pts = sl_tangent_scan(CATALOG["round_sphere"], (32, 32))
    path = tmp_path / "scan.csv"
    text = scan_to_csv(pts, path)
    assert path.read_text() == text
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(pts) + 1
    assert float(rows[1][2]) == pytest.approx(1.0)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_surfaces_are_immersions(name):
    assert CATALOG[name].immersion_margin() > 1e-3


def test_unknown_surface_lists_catalog():
    with pytest.raises(KeyError, match="w_torus"):
        get_surface("klein_bottle")
