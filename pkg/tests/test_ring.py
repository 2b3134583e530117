import pytest

from calgrass.fgab import G, uct_cohomology
from calgrass.registry import default_registry
from calgrass.ring import TruncatedRing, duality_pairing_check, ring_matches_cohomology, verify_ring_hom

REG = default_registry()


@pytest.mark.parametrize("key", ["g3r6", "v2r5", "v3r6", "slag_ring"])
def test_rings_match_cohomology(key):
    space = REG.ring_entry(key)["space"]
    assert ring_matches_cohomology(REG.ring(key), uct_cohomology(REG.homology(space)))


def test_ring_against_wrong_cohomology_fails():
    res = ring_matches_cohomology(REG.ring("v2r5"), uct_cohomology(REG.homology("s5")))
    assert not res and res.violation is not None


@pytest.mark.parametrize("key,n", [("g3r6", 9), ("v3r6", 12)])
def test_duality_pairing(key, n):
    assert duality_pairing_check(REG.ring(key), n)


def test_duality_fails_once_top_class_is_killed():
    ring = REG.ring("g3r6").with_zero_monomial("x4x5")
    assert not duality_pairing_check(ring, 9)


@pytest.mark.parametrize("key", ["slag_pullback", "pont_pullback"])
def test_pullbacks(key):
    assert verify_ring_hom(*REG.ring_hom(key))


def test_bad_pullbacks():
    mapping, source, target = REG.ring_hom("slag_pullback")
    assert not verify_ring_hom({**mapping, "x5": "x3"}, source, target)  # wrong degree
    assert not verify_ring_hom({**mapping, "y3": "0"} | {"x4": "x5"}, source, target)
    missing = dict(mapping)
    del missing["y7"]
    assert not verify_ring_hom(missing, source, target)


def test_graded_groups_of_g3r6():
    ring = REG.ring("g3r6")
    assert [str(ring.graded_group(d)) for d in range(10)] == [
        "Z", "0", "0", "Z2", "Z", "Z", "0", "Z2", "0", "Z"]
    assert ring.top_degree == 9
    assert ring.poincare_series() == [1, 0, 0, 0, 1, 1, 0, 0, 0, 1]


def test_elements_and_products():
    ring = REG.ring("g3r6")
    x4x5 = ring.element("x4*x5")
    assert x4x5.degrees() == {9}
    assert ring.element("x4x5").degrees() == {9}
    assert ring.element("x4^2").is_zero
    assert ring.element("y3*y7").is_zero
    assert ring.element("2*y3").is_zero  # Z2 coefficients
    assert not ring.element("2*x4").is_zero
    with pytest.raises(ValueError):
        ring.element("z9")


def test_round_trip_dict():
    ring = REG.ring("v3r6")
    again = TruncatedRing.from_dict(ring.to_dict(), name="v3r6")
    assert [again.graded_group(d) for d in range(13)] == [ring.graded_group(d) for d in range(13)]


def test_torsion_component_has_no_unit():
    ring = REG.ring("slag_ring")
    assert ring.graded_group(0) == G("Z")
    assert ring.graded_group(3) == G("Z2")
