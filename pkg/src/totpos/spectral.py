"""Eigen-decomposition helpers and checks of the classical spectral theorems.

``gk_verify`` checks the Gantmacher-Krein conclusions for a strictly totally
positive matrix (or a signature conjugate of one): simple positive spectrum,
the ratio formula ``lambda_j = rho(A^(j)) / rho(A^(j-1))``, eigenvectors with
exactly j-1 sign changes, and the variation bounds for combinations of
eigenvectors.  ``vdp_check`` samples the variation-diminishing inequality
``S+(Ax) <= S-(x)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .classify import classify, detect_js, first_failing_order
from .errors import ClassificationError, InputError, NumericError
from .exterior import DEFAULT_TOL, as_matrix, compound_body
from .signs import Region, region_from_counts, sign_variation

log = logging.getLogger(__name__)

SPECTRAL_TOL = 1e-7


class EigenResult(NamedTuple):
    values: np.ndarray
    right: np.ndarray
    left: np.ndarray


def _canonical_columns(V: np.ndarray) -> np.ndarray:
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    for k in range(V.shape[1]):
        col = V[:, k]
        big = np.abs(col) > 1e-12 * np.max(np.abs(col))
        first = col[np.argmax(big)]
        V[:, k] = col * (abs(first) / first)
    if np.allclose(V.imag, 0.0):
        return V.real.copy()
    return V


def _order(values: np.ndarray) -> np.ndarray:
    # descending modulus, then descending real part, then descending imaginary part
    return np.lexsort((-values.imag, -values.real, -np.round(np.abs(values), 12)))


def eigen(A, tol: float = SPECTRAL_TOL) -> EigenResult:
    """Eigenvalues sorted by descending modulus with unit right/left eigenvectors.

    Left eigenvectors are eigenvectors of ``A.T``.  Each eigenvector is scaled
    so its first nonzero component is real and positive.
    """
    M = as_matrix(A, square=True)
    try:
        w, vl, vr = scipy.linalg.eig(M, left=True, right=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"eigen-decomposition failed to converge: {exc}") from exc
    order = _order(w)
    w, vl, vr = w[order], vl[:, order], vr[:, order]
    right = _canonical_columns(vr.astype(complex))
    left = _canonical_columns(np.conj(vl).astype(complex))
    norm = max(1.0, float(np.linalg.norm(M, 2)))
    res = np.linalg.norm(M @ right - right * w[None, :], axis=0)
    if np.any(res > tol * norm):
        raise NumericError(f"eigenpair residual {float(res.max()):.3e} exceeds {tol:g} * ||A||")
    if np.allclose(w.imag, 0.0, atol=0.0):
        w = w.real.astype(complex)
    return EigenResult(w, right, left)


def perron_root(M, tol: float = 1e-13, max_iter: int = 200_000):
    """Dominant eigenvalue and positive unit eigenvectors of an entrywise-positive matrix.

    Power iteration; stops once the Collatz-Wielandt bounds
    ``min (Mx)_i / x_i <= rho <= max (Mx)_i / x_i`` agree to relative ``tol``.
    Returns ``(rho, right, left)``.
    """
    P = as_matrix(M, square=True)
    if not np.all(P > 0):
        raise ClassificationError("perron_root requires an entrywise-positive matrix")

    def iterate(B):
        x = np.full(B.shape[0], 1.0 / np.sqrt(B.shape[0]))
        for it in range(max_iter):
            y = B @ x
            ratio = y / x
            lo, hi = float(ratio.min()), float(ratio.max())
            x = y / np.linalg.norm(y)
            if hi - lo <= tol * hi:
                return 0.5 * (lo + hi), x
        raise NumericError(
            f"power iteration did not converge in {max_iter} steps (bracket [{lo:.6g}, {hi:.6g}])"
        )

    rho, right = iterate(P)
    _, left = iterate(P.T)
    return rho, right, left


def compound_spectral_radius(A, j: int, tol: float = DEFAULT_TOL) -> float:
    """rho(A^(j)) for a compound that is strictly JS, via the Perron root of its conjugate."""
    if j == 0:
        return 1.0
    C = compound_body(A, j)
    part = detect_js(C, strict=True, tol=tol)
    if part is None:
        raise ClassificationError(f"compound of order {j} is not strictly J-sign-symmetric")
    d = part.signature()
    rho, _, _ = perron_root(d[:, None] * C * d[None, :])
    return rho


# ---------------------------------------------------------------------------
# Gantmacher-Krein


@dataclass
class SpectralReport:
    eigenvalues: list[complex]
    all_real_positive: bool
    all_simple: bool
    strictly_decreasing: bool
    ratio_residuals: list[float]
    eigvec_variations: list[tuple[int, int]]
    combo_checks: tuple[int, int]
    verdict: str
    failing_clause: str | None = None
    route: str = "stp"
    seed: int | None = None
    tol: float = SPECTRAL_TOL
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "all_real_positive": self.all_real_positive,
            "all_simple": self.all_simple,
            "strictly_decreasing": self.strictly_decreasing,
            "ratio_residuals": [float(r) for r in self.ratio_residuals],
            "eigvec_variations": [list(v) for v in self.eigvec_variations],
            "combo_checks": {"passed": self.combo_checks[0], "total": self.combo_checks[1]},
            "verdict": self.verdict,
            "failing_clause": self.failing_clause,
            "route": self.route,
            "seed": self.seed,
            "tol": self.tol,
            "notes": list(self.notes),
        }


def _simple(values: np.ndarray, tol: float) -> bool:
    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            gap = abs(values[a] - values[b])
            if gap <= tol * max(1.0, abs(values[a]), abs(values[b])):
                return False
    return True


def _stp_basis(A: np.ndarray, entry_tol: float):
    """Return (signature d, route) such that d A d is STP, or raise."""
    cls = classify(A, tol=entry_tol)
    n = A.shape[0]
    if cls.stp:
        return np.ones(n), "stp"
    if cls.stjs:
        d = cls.js_partition.signature()
        if classify(d[:, None] * A * d[None, :], tol=entry_tol).stp:
            return d, "signature"
        return d, "stjs"
    j = first_failing_order(A, strict=True, tol=entry_tol)
    raise ClassificationError(
        f"matrix is neither STP nor STJS: compound of order {j} is not strictly J-sign-symmetric"
    )


def _sample_q_p_c(rng: np.random.Generator, n: int):
    q, p = sorted(int(v) for v in rng.integers(1, n + 1, size=2))
    c = rng.standard_normal(p - q + 1)
    while abs(c[-1]) <= 0.1:
        c[-1] = rng.standard_normal()
    return q, p, c


def gk_verify(A, tol: float = SPECTRAL_TOL, combo_samples: int = 200, seed: int = 0,
              entry_tol: float = DEFAULT_TOL) -> SpectralReport:
    """Check the Gantmacher-Krein conclusions on an STP (or STJS) matrix.

    Clauses, in order: (a) real, positive, simple spectrum; (b) strict
    decrease; (c) ratio formula; (d) the j-th eigenvector has exactly j-1
    sign changes; (e) ``q-1 <= S-(sum) <= S+(sum) <= p-1`` for random
    combinations of eigenvectors q..p.  Clauses (d) and (e) are evaluated in
    the basis where the matrix is STP; for an STJS matrix with no such
    signature basis they are skipped and reported in ``notes``.
    """
    M = as_matrix(A, square=True)
    n = M.shape[0]
    d, route = _stp_basis(M, entry_tol)

    eig = eigen(M)
    lam = eig.values
    scale = np.maximum(1.0, np.abs(lam))
    real = bool(np.all(np.abs(lam.imag) <= tol * scale))
    positive = real and bool(np.all(lam.real > 0))
    simple = _simple(lam, tol)
    re = lam.real
    decreasing = real and bool(np.all(re[:-1] > re[1:])) and bool(re[-1] > 0)

    rhos = [1.0] + [compound_spectral_radius(M, j, entry_tol) for j in range(1, n + 1)]
    ratio = [abs(re[j - 1] * rhos[j - 1] - rhos[j]) / rhos[j] for j in range(1, n + 1)]

    notes: list[str] = []
    variations: list[tuple[int, int]] = []
    combo_ok = combo_total = 0
    vec_ok = combo_pass = True
    if route == "stjs":
        notes.append("no signature basis makes the matrix STP; clauses (d) and (e) skipped")
    else:
        X = d[:, None] * eig.right.real
        for k in range(n):
            sv = sign_variation(X[:, k])
            variations.append((sv.s_minus, sv.s_plus))
            vec_ok = vec_ok and sv.s_minus == k and sv.s_plus == k
        rng = np.random.default_rng(seed)
        for _ in range(combo_samples):
            q, p, c = _sample_q_p_c(rng, n)
            sv = sign_variation(X[:, q - 1:p] @ c)
            ok = q - 1 <= sv.s_minus <= sv.s_plus <= p - 1
            combo_ok += ok
            combo_total += 1
        combo_pass = combo_ok == combo_total

    clauses = [
        ("a: real positive simple spectrum", positive and simple),
        ("b: strictly decreasing eigenvalues", decreasing),
        ("c: ratio formula", max(ratio) <= tol),
        ("d: eigenvector sign changes", vec_ok),
        ("e: combination bounds", combo_pass),
    ]
    failing = next((name for name, ok in clauses if not ok), None)
    return SpectralReport(
        eigenvalues=[complex(z) for z in lam],
        all_real_positive=positive,
        all_simple=simple,
        strictly_decreasing=decreasing,
        ratio_residuals=ratio,
        eigvec_variations=variations,
        combo_checks=(combo_ok, combo_total),
        verdict="pass" if failing is None else "fail",
        failing_clause=failing,
        route=route,
        seed=seed,
        tol=tol,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Variation diminishing


@dataclass
class VdpReport:
    violations: int
    membership_violations: int
    total: int
    worst_case: dict | None
    route: str
    mode: str
    seed: int

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.membership_violations == 0

    def to_dict(self) -> dict:
        return {
            "violations": self.violations,
            "membership_violations": self.membership_violations,
            "total": self.total,
            "worst_case": self.worst_case,
            "route": self.route,
            "mode": self.mode,
            "seed": self.seed,
            "verdict": "pass" if self.passed else "fail",
        }


def _random_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    kind = rng.integers(3)
    x = rng.standard_normal(n)
    if kind == 1:
        x[rng.random(n) < 0.4] = 0.0
    elif kind == 2:
        blocks = int(rng.integers(1, n + 1))
        cuts = np.sort(rng.choice(np.arange(1, n), size=blocks - 1, replace=False)) if blocks > 1 else []
        s = np.ones(n)
        for c in cuts:
            s[c:] *= -1
        x = np.abs(x) * s
        x[rng.random(n) < 0.2] = 0.0
    if not np.any(x):
        x[int(rng.integers(n))] = 1.0
    return x


def vdp_check(A, trials: int = 10_000, seed: int = 0, mode: str = "strict",
              entry_tol: float = DEFAULT_TOL) -> VdpReport:
    """Sample the variation-diminishing property of ``A``.

    ``mode="strict"`` needs a strictly sign-regular matrix (or a signature
    conjugate of one, in which case the conjugate is tested) and checks
    ``S+(Ax) <= S-(x)`` together with: ``x`` in ``M(j)`` implies ``Ax`` in the
    interior of ``M(j)``.  ``mode="sr"`` needs a nonsingular sign-regular
    matrix and checks that ``x`` in ``M(j)`` implies ``Ax`` in ``M(j)``.
    """
    if mode not in ("strict", "sr"):
        raise InputError(f"unknown mode {mode!r}")
    M = as_matrix(A, square=True)
    n = M.shape[0]
    cls = classify(M, tol=entry_tol)
    route = "direct"
    if mode == "strict":
        if not cls.ssr:
            if cls.stjs:
                d = cls.js_partition.signature()
                B = d[:, None] * M * d[None, :]
                if classify(B, tol=entry_tol).ssr:
                    M, route = B, "signature"
                else:
                    raise ClassificationError("STJS matrix has no strictly sign-regular signature conjugate")
            else:
                raise ClassificationError("matrix is not strictly sign-regular")
    else:
        if not cls.sr:
            raise ClassificationError("matrix is not sign-regular")
        if abs(np.linalg.det(M)) <= entry_tol * max(1.0, float(np.max(np.abs(M)))) ** n:
            raise ClassificationError("matrix is singular")

    rng = np.random.default_rng(seed)
    violations = m_viol = 0
    worst = None
    worst_margin = None
    for _ in range(trials):
        x = _random_vector(rng, n)
        y = M @ x
        sx = sign_variation(x)
        sy = sign_variation(y)
        if mode == "strict":
            margin = sx.s_minus - sy.s_plus
        else:
            margin = sx.s_minus - sy.s_minus
        if margin < 0:
            violations += 1
        if worst_margin is None or margin < worst_margin:
            worst_margin = margin
            worst = {"x": x.tolist(), "Ax": y.tolist(), "s_minus_x": sx.s_minus,
                     "s_plus_x": sx.s_plus, "s_minus_Ax": sy.s_minus,
                     "s_plus_Ax": sy.s_plus, "margin": int(margin)}
        for j in range(1, n + 1):
            if region_from_counts(sx, j) is Region.OUTSIDE:
                continue
            target = region_from_counts(sy, j)
            if mode == "strict" and target is not Region.INTERIOR:
                m_viol += 1
            elif mode == "sr" and target is Region.OUTSIDE:
                m_viol += 1
    if violations or m_viol:
        log.warning("vdp_check: %d variation and %d band violations in %d trials",
                    violations, m_viol, trials)
    return VdpReport(violations, m_viol, trials, worst, route, mode, seed)
