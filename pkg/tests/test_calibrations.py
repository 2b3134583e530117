import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calgrass import calibrations as cal
from calgrass.acceptance import rgrad_matches_fd
from calgrass.exterior import im_sl_form, inner, kaehler_form, sl_form
from calgrass.grassmannian import OrientedFrame, pluecker, random_frames

NAMES = sorted(cal.builtin_calibrations())

# dimensions of the faces, known independently:
# SU(n)/SO(n), CP^1, CP^2, Gr_2(C^3), G2/SO(4)
FACE_DIMENSIONS = {
    "sl2": 2, "sl3": 5, "sl4": 9,
    "kaehler4": 2, "kaehler6": 4, "kaehler6_2": 4,
    "assoc7": 8, "coassoc7": 8,
}


@st.composite
def gradient_cases(draw):
    name = draw(st.sampled_from(NAMES))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    spec = cal.get_calibration(name)
    F = random_frames(spec.n, spec.k, 1, rng)[0]
    return spec, F, rng.normal(size=F.shape)


@settings(max_examples=200)
@given(gradient_cases())
def test_riemannian_gradient_matches_finite_differences(case):
    spec, F, X = case
    assert rgrad_matches_fd(cal.FormEvaluator(spec.form), F, X) < 1e-5


@pytest.mark.parametrize("name", NAMES)
def test_value_agrees_with_pluecker_inner_product(name, rng):
    spec = cal.get_calibration(name)
    ev = cal.FormEvaluator(spec.form)
    F = random_frames(spec.n, spec.k, 5, rng)
    expected = [inner(spec.form, pluecker(OrientedFrame(f))) for f in F]
    assert np.allclose(ev.value(F), expected, atol=1e-12)


def test_gradient_is_horizontal(rng):
    ev = cal.FormEvaluator(sl_form(3))
    F = random_frames(6, 3, 4, rng)
    G = ev.rgrad(F)
    assert np.abs(np.einsum("sij,sik->sjk", F, G)).max() < 1e-12


@pytest.mark.parametrize("name", NAMES)
def test_comass_is_one_with_known_face_dimension(name):
    rep = cal.comass(name, seed=0)
    assert rep.max_value == pytest.approx(1.0, abs=1e-6)
    assert rep.converged
    assert rep.nullity == FACE_DIMENSIONS[name]
    assert rep.index + rep.nullity == rep.hessian_spectrum.size  # a maximum has no positive directions
    assert rep.positive == 0


@pytest.mark.parametrize("name", ["sl2", "kaehler4", "sl3"])
def test_brute_force_face_dimension_matches_nullity(name):
    rep = cal.comass(name, seed=1)
    assert cal.local_face_dimension(name, rep) == rep.nullity


def test_sl3_hessian_golden():
    rep = cal.comass("sl3", starts=64, seed=0)
    assert (rep.index, rep.nullity) == (4, 5)


def test_comass_is_seed_deterministic():
    a = cal.comass("sl3", starts=8, seed=11)
    b = cal.comass("sl3", starts=8, seed=11)
    assert np.array_equal(a.values, b.values)


def test_comass_accepts_forms_and_checks_degree():
    rep = cal.comass(kaehler_form(2), 2, starts=8)
    assert rep.max_value == pytest.approx(1.0)
    with pytest.raises(ValueError):
        cal.comass(kaehler_form(2), 3)
    with pytest.raises(KeyError):
        cal.get_calibration("nope")


def test_maximizer_is_special_lagrangian():
    rep = cal.comass("sl3", starts=16, seed=2)
    assert cal.is_sl_plane(rep.argmax, tol=1e-6)
    assert cal.is_calibrated(rep.argmax, sl_form(3))


def test_sl_plane_checks():
    assert cal.is_sl_plane(OrientedFrame.coordinate(6, (1, 3, 5)))
    assert not cal.is_sl_plane(OrientedFrame.coordinate(6, (1, 2, 3)))
    assert not cal.is_sl_plane(OrientedFrame.coordinate(6, (1, 3, 5)).flipped())


def test_unitary_rotation_commutes_with_j():
    U = cal.unitary_rotation(3, seed=4)
    J = cal.complex_structure(3)
    assert np.allclose(U @ J, J @ U)
    assert np.allclose(U.T @ U, np.eye(6))


def test_u_n_invariance(rng):
    # U(n) preserves omega and multiplies Omega by a phase, so |Omega| is invariant
    U = cal.unitary_rotation(3, seed=9)
    re, im = cal.FormEvaluator(sl_form(3)), cal.FormEvaluator(im_sl_form(3))
    om = cal.FormEvaluator(cal.get_calibration("kaehler6").form)
    F = random_frames(6, 3, 10, rng)
    G = np.einsum("ij,sjk->sik", U, F)
    assert np.allclose(np.hypot(re.value(F), im.value(F)), np.hypot(re.value(G), im.value(G)))
    F2, G2 = F[..., :2], G[..., :2]
    assert np.allclose(om.value(F2), om.value(G2))


def test_unitary_image_of_maximizer_rotates_the_phase():
    U = cal.unitary_rotation(3, seed=3)
    Z = U[0::2, 0::2] + 1j * U[1::2, 0::2]
    phase = np.linalg.det(Z)  # g^* Omega = det(g) Omega
    rep = cal.comass("sl3", starts=16, seed=5)
    ev = cal.FormEvaluator(sl_form(3))
    ev_im = cal.FormEvaluator(im_sl_form(3))
    G = U @ rep.argmax.columns
    assert ev.value(G) == pytest.approx(phase.real * rep.max_value, abs=1e-8)
    assert ev_im.value(G) == pytest.approx(phase.imag * rep.max_value, abs=1e-8)


def test_contact_nullity_and_inconclusive():
    rep = cal.comass("sl2", seed=0)
    assert cal.contact_nullity("sl2", rep) == 2
    with pytest.raises(cal.InconclusiveError):
        cal.contact_nullity("sl2", dataclasses.replace(rep, inconclusive=True))


def test_spectrum_counts_threshold():
    eigs = np.array([-2.0, -1.0, 1e-7, -1e-7, 0.5])
    nullity, index, thr = cal.spectrum_counts(eigs, 1e-5)
    assert (nullity, index) == (2, 2)
    assert thr == pytest.approx(2e-5)


def test_free_subspace_examples():
    spec = cal.get_calibration("sl2")
    lagrangian = np.eye(4)[:, [0, 2]]  # contains the SL plane e13
    complex_line = np.eye(4)[:, [0, 1]]  # Re Omega vanishes on e12
    assert cal.is_free_subspace(lagrangian, spec).verdict == "not_free"
    assert cal.is_free_subspace(complex_line, spec).verdict == "free"


def test_free_dimension_kaehler4():
    rep = cal.free_dimension(cal.get_calibration("kaehler4"), trials=20, seed=1)
    assert rep.value == 2
    assert rep.not_free_count == 20
    assert rep.to_dict()["free_dimension"] == 2


def test_morse_scan_sl3():
    rep = cal.morse_scan(starts=32, seed=0)
    classes = [(c["value"], c["index"], c["nullity"]) for c in rep.classes()]
    assert classes == [(1.0, 4, 5), (-1.0, 0, 5)]
    assert not rep.unresolved
    assert rep.level_set_dimension == 8
