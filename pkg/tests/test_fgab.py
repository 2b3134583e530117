import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calgrass.acceptance import snf_identity_holds
from calgrass.fgab import (
    G,
    ChainComplex,
    FgAbGroup,
    GroupHom,
    enumerate_homs,
    euler_characteristic,
    ext,
    format_list,
    hom,
    homology_from_cohomology,
    homs_complete,
    hurewicz_check,
    integer_determinant,
    invariant_factors,
    kernel_basis,
    parse_polynomial,
    poincare_duality_check,
    poincare_polynomial_check,
    tensor,
    tor,
    uct_cohomology,
    uct_with_coefficients,
)

int_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=500)
@given(int_matrices)
def test_snf_identity(M):
    assert snf_identity_holds(M)


def determinantal_invariant_factors(M):
    """Invariant factors as ratios of gcds of k-by-k minors."""
    M = np.asarray(M, dtype=object)
    m, n = M.shape
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, integer_determinant(M[np.ix_(rows, cols)]))
        if g == 0:
            break
        divisors.append(g)
    return [b // a for a, b in zip(divisors, divisors[1:])]


@settings(max_examples=200)
@given(int_matrices)
def test_invariant_factors_match_determinantal_divisors(M):
    got = [d for d in invariant_factors(M) if d]
    assert got == determinantal_invariant_factors(M)


def test_integer_determinant_agrees_with_float(rng):
    for _ in range(100):
        n = int(rng.integers(1, 6))
        M = rng.integers(-6, 7, size=(n, n))
        assert integer_determinant(M) == round(np.linalg.det(M))


# -- chain complexes with known homology --------------------------------------------


def random_unimodular(rng, n, steps=12):
    P, Pinv = np.eye(n, dtype=object), np.eye(n, dtype=object)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.choice(n, 2, replace=False)
        q = int(rng.integers(-3, 4))
        E, Einv = np.eye(n, dtype=object), np.eye(n, dtype=object)
        E[i, j], Einv[i, j] = q, -q
        P, Pinv = E.dot(P), Pinv.dot(Einv)
    if n and rng.random() < 0.5:
        E = np.eye(n, dtype=object)
        E[0, 0] = -1
        P, Pinv = E.dot(P), Pinv.dot(E)
    return P, Pinv


def random_complex(rng, top=3):
    """Direct sum of free generators and pieces Z --m--> Z, then a change of basis."""
    gens = [[] for _ in range(top + 1)]  # labels per degree
    expected = [FgAbGroup() for _ in range(top + 1)]
    pairs = []
    for _ in range(int(rng.integers(1, 7))):
        d = int(rng.integers(0, top + 1))
        if d < top and rng.random() < 0.6:
            m = int(rng.integers(1, 7))
            pairs.append((d, len(gens[d]), len(gens[d + 1]), m))
            gens[d].append("t")
            gens[d + 1].append("s")
            expected[d] = expected[d] + FgAbGroup.cyclic(m)
        else:
            gens[d].append("f")
            expected[d] = expected[d] + FgAbGroup.free()
    dims = [len(g) for g in gens]
    bds = [np.zeros((dims[i], dims[i + 1]), dtype=object) for i in range(top)]
    for d, row, col, m in pairs:
        bds[d][row, col] = m
    changes = [random_unimodular(rng, n) for n in dims]
    new = []
    for i, B in enumerate(bds):
        P, _ = changes[i]
        _, Qinv = changes[i + 1]
        new.append(P.dot(B).dot(Qinv))
    return ChainComplex([[[int(x) for x in r] for r in B] for B in new], dims=dims), expected


def test_homology_of_random_complexes_matches_construction(rng):
    for _ in range(150):
        cx, expected = random_complex(rng)
        assert cx.homology() == expected


def test_homology_free_ranks_match_rational_rank_oracle(rng):
    for _ in range(100):
        cx, _ = random_complex(rng)
        H = cx.homology()
        ranks = [0] + [np.linalg.matrix_rank(np.array(b, dtype=float)) if np.size(b) else 0
                       for b in cx.boundaries] + [0]
        for i, g in enumerate(H):
            assert g.rank == cx.dims[i] - ranks[i] - ranks[i + 1]
            assert cx.rank_of(i) == ranks[i]


def test_boundary_of_boundary_must_vanish():
    with pytest.raises(ValueError):
        ChainComplex([[[1]], [[1]]])


@pytest.mark.parametrize("name,expected", [
    ("rp2", "(Z, Z2, 0)"),
    ("s2", "(Z, 0, Z)"),
    ("torus", "(Z, Z^2, Z)"),
])
def test_bundled_complexes(name, expected):
    from calgrass.registry import default_registry
    assert format_list(default_registry().complex(name).homology()) == expected


def test_chain_complex_json_round_trip():
    cx = ChainComplex.from_json(json.dumps({"boundaries": [[[0]], [[2]]]}))
    assert ChainComplex.from_dict(cx.to_dict()).homology() == cx.homology()


# -- groups ------------------------------------------------------------------------


@pytest.mark.parametrize("text,expected", [
    ("Z", "Z"), ("Z2", "Z2"), ("Z+Z2", "Z+Z2"), ("Z^2", "Z^2"), ("Z2^2", "Z2^2"),
    ("Z_2", "Z2"), ("0", "0"), ("Z2 ⊕ Z3", "Z6"), ("Z4+Z2+Z", "Z+Z2+Z4"),
])
def test_parse_and_print(text, expected):
    assert str(G(text)) == expected


@pytest.mark.parametrize("text", ["Q", "Z1.5", "Z^", "Z+"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        G(text)


def test_group_invariants():
    A = G("Z+Z2+Z4")
    assert (A.rank, A.torsion) == (1, (2, 4))
    assert A.p_rank(2) == 2 and A.p_rank(3) == 0
    assert not A.is_finite and G("Z2+Z4").order == 8
    assert A.free_part() == G("Z") and A.torsion_part() == G("Z2+Z4")
    assert FgAbGroup.from_relations([[2, 0], [0, 3]], 2) == G("Z6")


@pytest.mark.parametrize("op,a,b,expected", [
    (tensor, "Z2", "Z4", "Z2"), (tensor, "Z", "Z3", "Z3"), (tensor, "Z2", "Z3", "0"),
    (tor, "Z2", "Z4", "Z2"), (tor, "Z", "Z4", "0"), (tor, "Z6", "Z4", "Z2"),
    (hom, "Z", "Z2", "Z2"), (hom, "Z2", "Z", "0"), (hom, "Z^2", "Z", "Z^2"),
    (ext, "Z3", "Z", "Z3"), (ext, "Z", "Z5", "0"), (ext, "Z4", "Z6", "Z2"),
])
def test_derived_functors(op, a, b, expected):
    assert op(G(a), G(b)) == G(expected)


def test_uct():
    H = [G(x) for x in ("Z", "Z2", "0")]
    assert format_list(uct_cohomology(H)) == "(Z, 0, Z2)"
    assert format_list(uct_with_coefficients(H, 2)) == "(Z2, Z2, Z2)"
    assert homology_from_cohomology(uct_cohomology(H)) == H


def test_uct_round_trip_on_registry():
    from calgrass.registry import default_registry
    reg = default_registry()
    for key in reg.keys("homology"):
        H = reg.homology(key)
        assert homology_from_cohomology(uct_cohomology(H)) == H


def test_group_hom_kernel_image_cokernel():
    Z, Z2, Z4 = G("Z"), G("Z2"), G("Z4")
    two = GroupHom.scalar(Z, Z, 2)
    assert (two.kernel(), two.image(), two.cokernel()) == (G("0"), Z, Z2)
    red = GroupHom(Z4, Z2, [[1]])
    assert (red.kernel(), red.image(), red.cokernel()) == (Z2, Z2, G("0"))
    assert GroupHom(Z2, Z4, [[2]]).kernel() == G("0")
    with pytest.raises(ValueError):
        GroupHom(Z2, Z4, [[1]])  # 1 does not have order 2 in Z4
    assert two.equal_up_to_sign(two.negated())
    assert two.compose(two).matrix[0][0] == 4


def test_enumerate_homs():
    Z, Z2, Z4 = G("Z"), G("Z2"), G("Z4")
    assert homs_complete(Z4, Z2) and not homs_complete(Z, Z)
    for A, B in [(Z4, Z2), (Z2, Z4), (Z2 + Z2, Z4), (Z, Z4)]:
        homs = enumerate_homs(A, B)
        assert all(not h.violations() for h in homs)
        assert len({str(h.matrix) for h in homs}) == hom(A, B).order
    assert len(enumerate_homs(Z, Z, bound=3)) == 7


def test_kernel_basis():
    K = kernel_basis([[1, 2, 3]])
    assert len(K) == 2
    assert all(sum(a * b for a, b in zip([1, 2, 3], v)) == 0 for v in K)


# -- topological checks ------------------------------------------------------------

G3R6 = ["Z", "0", "Z2", "0", "Z", "Z", "Z2", "0", "0", "Z"]


def test_poincare_duality():
    assert poincare_duality_check(G3R6, 9)
    broken = list(G3R6)
    broken[2] = "0"
    res = poincare_duality_check(broken, 9)
    assert not res and res.violation is not None


def test_poincare_polynomial():
    assert parse_polynomial("(1+t^4)(1+t^5)") == [1, 0, 0, 0, 1, 1, 0, 0, 0, 1]
    assert parse_polynomial("1 + 2t - t^3") == [1, 2, 0, -1]
    assert poincare_polynomial_check(G3R6, "(1+t^4)(1+t^5)")
    assert not poincare_polynomial_check(G3R6, "(1+t^4)(1+t^6)")
    with pytest.raises(ValueError):
        parse_polynomial("(1+x)")


def test_euler_and_hurewicz():
    assert euler_characteristic(G3R6) == 0
    assert euler_characteristic(["Z", "0", "Z"]) == 2
    assert hurewicz_check(["0", "0", "Z2"], G3R6)
    assert not hurewicz_check(["0", "0", "Z"], G3R6)
    with pytest.raises(ValueError):
        hurewicz_check(["0", "Z2"], G3R6)
