import numpy as np
import pytest

from totpos import (
    ClassificationError,
    compound,
    eigen,
    gk_verify,
    kronecker_eigs,
    perron_root,
    random_stp,
    rotation3,
    s_minus,
    s_plus,
    signature_conjugate,
    vandermonde,
    vdp_check,
)
from totpos.exterior import match_multisets

GOLDEN = (1 + 5 ** 0.5) / 2


def test_eigen_examples():
    e = eigen(np.diag([3.0, 2.0, 1.0]))
    np.testing.assert_allclose(e.values, [3, 2, 1])
    np.testing.assert_allclose(e.right, np.eye(3), atol=1e-15)

    e = eigen([[2.0, 1.0], [1.0, 1.0]])
    np.testing.assert_allclose(e.values, [(3 + 5 ** 0.5) / 2, (3 - 5 ** 0.5) / 2])

    theta = np.pi / 3
    e = eigen(rotation3(theta))
    expected = [1.0, np.exp(1j * theta), np.exp(-1j * theta)]
    assert match_multisets(e.values, expected) < 1e-12


def test_eigen_left_vectors_and_canonical_sign(rng):
    A = rng.standard_normal((5, 5))
    e = eigen(A)
    np.testing.assert_allclose(A.T @ e.left, e.left * e.values[None, :], atol=1e-10)
    np.testing.assert_allclose(np.linalg.norm(e.right, axis=0), 1.0)
    for k in range(5):
        col = e.right[:, k]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(first.imag) < 1e-12 and first.real > 0
    assert np.all(np.diff(np.abs(e.values)) <= 1e-12)


def test_perron_root_examples():
    rho, r, l = perron_root([[2.0, 1.0], [1.0, 1.0]])
    assert rho == pytest.approx((3 + 5 ** 0.5) / 2, rel=1e-12)
    assert np.all(r > 0) and np.all(l > 0)
    np.testing.assert_allclose(r, np.array([GOLDEN, 1.0]) / np.hypot(GOLDEN, 1.0), rtol=1e-10)

    rho, r, _ = perron_root(np.ones((4, 4)))
    assert rho == pytest.approx(4.0)
    np.testing.assert_allclose(r, np.full(4, 0.5))

    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert perron_root(A)[0] == pytest.approx(abs(eigen(A).values[0]), rel=1e-12)
    with pytest.raises(ClassificationError):
        perron_root([[1.0, 0.0], [1.0, 1.0]])


def test_perron_strict_dominance(rng):
    for _ in range(20):
        M = rng.random((5, 5)) + 0.01
        rho, r, l = perron_root(M)
        lam = eigen(M).values
        assert abs(lam[0] - rho) <= 1e-9 * rho
        assert abs(lam[1]) / rho < 1
        np.testing.assert_allclose(M.T @ l, rho * l, rtol=1e-9)


def test_gk_examples():
    rep = gk_verify([[2.0, 1.0], [1.0, 1.0]])
    assert rep.passed
    np.testing.assert_allclose(np.real(rep.eigenvalues), [(3 + 5 ** 0.5) / 2, (3 - 5 ** 0.5) / 2])
    assert rep.eigvec_variations[1] == (1, 1)

    V = vandermonde([1, 2, 3])
    rep = gk_verify(V, seed=4)
    assert rep.passed, rep.failing_clause
    assert rep.eigvec_variations == [(0, 0), (1, 1), (2, 2)]
    assert rep.combo_checks == (200, 200)
    assert len(rep.ratio_residuals) == 3

    with pytest.raises(ClassificationError, match="order 1"):
        gk_verify(np.eye(3))


def test_gk_signature_route():
    A = signature_conjugate(random_stp(5, 3), [1, -1, -1, 1, -1])
    rep = gk_verify(A)
    assert rep.passed and rep.route == "signature"


def test_gk_report_serializes():
    d = gk_verify(random_stp(4, 0), seed=9).to_dict()
    assert d["verdict"] == "pass" and d["seed"] == 9
    assert all(len(z) == 2 for z in d["eigenvalues"])


def test_inverse_spectrum():
    A = random_stp(5, 7)
    lam = np.real(eigen(A).values)
    inv = np.real(eigen(np.linalg.inv(A)).values)
    np.testing.assert_allclose(np.sort(inv), np.sort(1 / lam), rtol=1e-7)
    assert np.all(inv > 0) and len(set(np.round(inv, 8))) == 5
    # A^-1 is checkerboard-conjugate to an STP-signed matrix: its signature conjugate is STJS
    d = np.array([(-1) ** i for i in range(5)])
    rep = gk_verify(signature_conjugate(np.linalg.inv(A), d))
    assert rep.all_real_positive and rep.all_simple


def test_similarity_keeps_spectral_clauses(rng):
    A = random_stp(4, 2)
    T = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    B = T @ A @ np.linalg.inv(T)
    lam_a = eigen(A).values
    lam_b = eigen(B).values
    np.testing.assert_allclose(lam_b, lam_a, rtol=1e-8)
    for j in range(1, 5):
        rho_b = max(abs(np.linalg.eigvals(compound(B, j).body)))
        rho_a = max(abs(np.linalg.eigvals(compound(A, j).body)))
        assert rho_b == pytest.approx(rho_a, rel=1e-8)


def test_kronecker_cross_check_on_corpus():
    for seed in range(5):
        A = random_stp(5, seed)
        lam = eigen(A).values
        for j in range(1, 6):
            mu = np.linalg.eigvals(compound(A, j).body)
            assert match_multisets(mu, kronecker_eigs(lam, j)) <= 1e-8 * max(1, np.max(np.abs(mu)))


def test_vdp_examples():
    A = np.array([[2.0, 1.0], [1.0, 1.0]])
    x = np.array([1.0, -1.0])
    assert s_plus(A @ x) == 1 <= s_minus(x) == 1
    pos = np.array([0.3, 2.0])
    assert s_minus(pos) == 0 and s_plus(A @ pos) == 0
    rep = vdp_check(random_stp(5, 1), trials=10_000, seed=3)
    assert rep.violations == 0 and rep.membership_violations == 0 and rep.total == 10_000
    assert rep.worst_case["margin"] >= 0


def test_vdp_preconditions():
    with pytest.raises(ClassificationError):
        vdp_check(rotation3(0.5), trials=10)
    with pytest.raises(ClassificationError):
        vdp_check(np.triu(np.ones((3, 3))), trials=10)


def test_vdp_signature_and_ssr_routes():
    A = random_stp(4, 5)
    rep = vdp_check(signature_conjugate(A, [1, -1, 1, 1]), trials=500)
    assert rep.passed and rep.route == "signature"
    J = np.fliplr(np.eye(4))
    rep = vdp_check(A @ J, trials=2000)  # column reversal gives SSR with alternating signature
    assert rep.passed and rep.route == "direct"


def test_vdp_detects_violations():
    # mixes signs on positive input, so S+(Ax) > S-(x) somewhere; run bypassing the precondition
    from totpos import spectral

    A = np.array([[1.0, -1.0], [1.0, 1.0]])
    rng = np.random.default_rng(0)
    hits = sum(s_plus(A @ x) > s_minus(x) for x in (spectral._random_vector(rng, 2) for _ in range(200)))
    assert hits > 0


def test_sr_mode_closure():
    T = np.triu(np.ones((4, 4)))  # nonsingular TP, not strict
    rep = vdp_check(T, trials=3000, seed=1, mode="sr")
    assert rep.passed
    with pytest.raises(ClassificationError):
        vdp_check(np.ones((3, 3)), trials=10, mode="sr")
