import math

import numpy as np
import pytest

from totpos import (
    BasicCone,
    ExteriorBasicCone,
    IceCreamCone,
    InputError,
    Region,
    SpannedCone,
    adjoint,
    cone_from_json,
    cone_to_json,
    contains,
    m_membership,
    max_angle,
    s_minus,
    t_chain_membership,
    t_membership,
)


def test_contains_examples():
    K = IceCreamCone(3, 3)
    assert contains(K, (0, 0, 1)) is Region.INTERIOR
    assert contains(K, (1, 0, 1)) is Region.BOUNDARY
    assert contains(K, (1, 1, 1)) is Region.OUTSIDE
    assert contains(BasicCone((1, 1, -1)), (1, 2, -3)) is Region.INTERIOR
    assert contains(BasicCone((1, 1, -1)), (1, 0, -3)) is Region.BOUNDARY
    assert contains(BasicCone((1, 1, -1)), (1, 2, 3)) is Region.OUTSIDE
    S = SpannedCone([[1, 0], [1, 1]])
    assert contains(S, (2, 1)) is Region.INTERIOR
    assert contains(S, (1, 0)) is Region.BOUNDARY
    assert contains(S, (0, 1)) is Region.OUTSIDE
    assert contains(ExteriorBasicCone(3, 2, (1, -1, 1)), (1, -1, 2)) is Region.INTERIOR
    with pytest.raises(InputError):
        contains(K, (1, 2))


def test_constructor_validation():
    for bad in [lambda: BasicCone((1, 0)), lambda: SpannedCone([[1, 0], [2, 0]]),
                lambda: IceCreamCone(3, 4), lambda: ExteriorBasicCone(3, 2, (1, 1)),
                lambda: SpannedCone([[1, 0, 0], [0, 1, 0]])]:
        with pytest.raises(InputError):
            bad()


def test_adjoint_examples(rng):
    K = BasicCone((1, 1, 1))
    assert adjoint(K) == K
    ice = IceCreamCone(3, 3)
    assert adjoint(ice) == ice
    # self-duality: boundary rays pair nonnegatively
    X, Y = ice.sample(rng, 500), ice.sample(rng, 500)
    assert np.min(np.sum(X * Y, axis=1)) >= -1e-12
    S = SpannedCone([[1, 0], [1, 1]])
    assert adjoint(S).same_as(SpannedCone([[0, 1], [1, -1]]))
    assert adjoint(adjoint(S)).same_as(S)


def test_spanned_adjoint_pairs_nonnegatively(rng):
    G = rng.standard_normal((4, 4))
    S = SpannedCone(G)
    D = adjoint(S)
    assert np.min(D.generators @ G.T) >= -1e-12
    assert adjoint(D).same_as(S)


def test_max_angle_examples():
    assert max_angle(BasicCone((1, 1, 1))) == (math.pi / 2, True)
    assert max_angle(IceCreamCone(3, 3)) == (math.pi / 2, True)
    a, exact = max_angle(SpannedCone([[1, 0], [1, 1]]), samples=200)
    assert a == pytest.approx(math.pi / 4) and not exact
    rays = np.array([[1, 0, 1], [-1, 0, 1]]) / math.sqrt(2)
    assert rays[0] @ rays[1] == pytest.approx(0.0)


def test_json_round_trip():
    specs = [{"type": "basic", "signs": [1, 1, -1]}, {"type": "icecream", "n": 3, "axis": 3},
             {"type": "spanned", "generators": [[1.0, 0.0], [1.0, 1.0]]},
             {"type": "exterior_basic", "n": 3, "j": 2, "signs": [1, -1, 1]}]
    for spec in specs:
        assert cone_to_json(cone_from_json(spec)) == spec
    for bad in ['{"type": "cube"}', '{"signs": [1]}', '{"type": "basic"}', "[1, 2]"]:
        with pytest.raises(InputError):
            cone_from_json(bad)


def test_homogeneity(rng):
    cones = [BasicCone((1, -1, 1)), IceCreamCone(3, 2), SpannedCone(rng.standard_normal((3, 3)))]
    for K in cones:
        for x in rng.standard_normal((50, 3)):
            for alpha in (1e-6, 0.3, 7.0, 1e6):
                assert contains(K, alpha * x) is contains(K, x)


# --- T sets ------------------------------------------------------------------


W23 = ExteriorBasicCone(3, 2)


def test_t_membership_examples():
    r = t_membership((1, -1, 1), W23)
    assert r.verdict == "not_found" and r.exact
    r = t_membership((1, -1, -1), W23)
    assert r.verdict == "interior" and r.exact
    r = t_membership((1, -1, -1), W23, method="search", budget=2000, seed=3)
    assert r.verdict == "interior" and not r.exact
    # the witness is a real certificate
    w = np.linalg.det(np.array([[1, -1, -1], r.witness[0]])[:, [[0, 1], [0, 2], [1, 2]]].transpose(1, 0, 2))
    assert np.all(w > 0) or np.all(w < 0)


def test_t_membership_errors():
    with pytest.raises(InputError):
        t_membership((1, 2, 3), ExteriorBasicCone(4, 2))
    with pytest.raises(InputError):
        t_membership((1, 2, 3), BasicCone((1, 1, 1)))
    with pytest.raises(InputError):
        t_membership((1, 2, 3), BasicCone((1, 1, 1, 1)), j=2)
    with pytest.raises(InputError):
        t_membership((1, 2, 3), IceCreamCone(3, 1), j=2, method="exact")


def test_t_membership_scale_invariance():
    for x in [(1, -1, -1), (1, -1, 1), (1, 0, 1)]:
        base = t_membership(x, W23).verdict
        for alpha in (-3.0, 0.01, 5.0):
            assert t_membership(np.multiply(alpha, x), W23).verdict == base
    K = IceCreamCone(3, 1)
    a = t_membership((0.2, 1.0, -0.4), K, j=2, budget=3000, seed=1).verdict
    b = t_membership((-0.6, -3.0, 1.2), K, j=2, budget=3000, seed=1).verdict
    assert a == b


def test_search_on_icecream_grade_two():
    # e_1 ^ y lies inside the cone around e_1 ^ e_2 whenever y_2 > |y_3|
    K = IceCreamCone(3, 1)
    r = t_membership((1.0, 0.0, 0.0), K, j=2, budget=2000, seed=0)
    assert r.verdict == "interior"


def test_interior_is_stable_under_perturbation(rng):
    for _ in range(200):
        x = rng.standard_normal(4)
        if t_membership(x, ExteriorBasicCone(4, 2)).verdict != "interior":
            continue
        for _ in range(5):
            y = x + 1e-6 * np.max(np.abs(x)) * rng.standard_normal(4)
            assert t_membership(y, ExteriorBasicCone(4, 2)).verdict != "not_found"


@pytest.mark.parametrize("n, j", [(3, 1), (4, 2), (5, 2), (5, 3)])
def test_no_j_plus_one_subspace_in_band(rng, n, j):
    for _ in range(50):
        basis = rng.standard_normal((j + 1, n))
        found = False
        for _ in range(2000):
            c = rng.standard_normal(j + 1)
            if s_minus(c @ basis) > j - 1:
                found = True
                break
        assert found


def test_chain_exact_and_inclusion(rng):
    chain = [BasicCone((1, 1, 1)), W23]
    r = t_chain_membership((1, -1, -1), chain)
    assert r.verdict == "interior" and r.exact
    for x in rng.standard_normal((30, 3)):
        c = t_chain_membership(x, chain)
        assert (c.verdict != "not_found") <= (t_membership(x, W23).verdict != "not_found")


def test_chain_search_agrees_with_bands(rng):
    chain = [BasicCone((1, 1, 1, 1)), ExteriorBasicCone(4, 2)]
    for i, x in enumerate(rng.standard_normal((20, 4))):
        r = t_chain_membership(x, chain, method="search", budget=3000, seed=i)
        if r.verdict == "interior":
            assert m_membership(x, 2) is Region.INTERIOR


def test_orthant_then_signed_wedge_chain():
    K1 = BasicCone((1, 1, 1))
    K2 = ExteriorBasicCone(3, 2, (1, -1, 1))
    assert t_chain_membership((1, 1, 0), [K1, K2]).verdict == "closure"
    assert t_chain_membership((0, 2, -1), [K1, K2]).verdict == "closure"
    assert t_chain_membership((1, 1, 1), [K1, K2], budget=3000).verdict == "not_found"
    inner = SpannedCone([[1, 0.2, 0.2], [0.2, 1, 0.2], [0.2, 0.2, 1]])
    for x in [(1, 1, 0), (1, -1, 1), (1, 2, 3)]:
        assert t_chain_membership(x, [inner, K2], budget=3000).verdict == "not_found"


def test_chain_grade_three_search():
    chain = [BasicCone((1, 1, 1, 1)), ExteriorBasicCone(4, 2), ExteriorBasicCone(4, 3)]
    r = t_chain_membership((1.0, 0.5, -0.5, -1.0), chain, method="search", budget=300, seed=2)
    assert r.verdict in ("interior", "closure")
    exact = t_chain_membership((1.0, 0.5, -0.5, -1.0), chain)
    assert exact.exact and exact.verdict == "interior"


def test_chain_errors():
    with pytest.raises(InputError):
        t_chain_membership((1, 2, 3), [])
    with pytest.raises(InputError):
        t_chain_membership((1, 2, 3), [W23])
