"""Test matrices with known positivity class."""

from __future__ import annotations

import json
import math

import numpy as np

from .classify import classify
from .errors import InputError, NumericError
from .exterior import DEFAULT_TOL, as_matrix

MAX_N = 12


def _validate_stp(M: np.ndarray, tol: float, what: str) -> np.ndarray:
    if not classify(M, tol=tol).stp:
        raise NumericError(f"{what} is not strictly totally positive at tolerance {tol:g}")
    return M


def vandermonde(nodes, tol: float = DEFAULT_TOL, validate: bool = True) -> np.ndarray:
    """Matrix with entries ``t_i ** (k - 1)`` for increasing positive nodes."""
    t = np.asarray(nodes, dtype=float).reshape(-1)
    if t.size == 0 or not np.all(np.isfinite(t)):
        raise InputError("nodes must be a non-empty list of finite numbers")
    if np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InputError(f"nodes must be positive and strictly increasing, got {t.tolist()}")
    V = t[:, None] ** np.arange(t.size)[None, :]
    return _validate_stp(V, tol, "Vandermonde matrix") if validate else V


def _jittered_grid(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.arange(n) + rng.uniform(-0.15, 0.15, size=n)


def _kernel_factor(n: int, rng: np.random.Generator) -> np.ndarray:
    # exp(-(s-t)^2 / 2 sigma^2) = D [q_i ** t_k] D' with q_i = exp(s_i / sigma^2):
    # a generalized Vandermonde matrix between positive diagonal scalings
    s, t = _jittered_grid(n, rng), _jittered_grid(n, rng)
    sigma = rng.uniform(1.3, 1.7)
    K = np.exp(-((s[:, None] - t[None, :]) ** 2) / (2.0 * sigma ** 2))
    d1, d2 = rng.uniform(0.7, 1.4, size=n), rng.uniform(0.7, 1.4, size=n)
    return d1[:, None] * K * d2[None, :]


def random_stp(n: int, seed: int = 0, factors: int = 1, tol: float = DEFAULT_TOL,
               retries: int = 10) -> np.ndarray:
    """Seeded STP matrix: a product of ``factors`` Vandermonde-type factors.

    Each factor is a Gaussian kernel on jittered unit-spaced points, which is a
    diagonally scaled generalized Vandermonde matrix. Its smallest minors stay
    well above the zero cut up to n = 8, where plain Vandermonde factors fail.
    Every candidate is checked with :func:`classify` before it is returned.
    """
    if not 2 <= n <= MAX_N:
        raise InputError(f"n must be in [2, {MAX_N}], got {n}")
    if factors < 1:
        raise InputError("need at least one factor")
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        M = _kernel_factor(n, rng)
        for _ in range(factors - 1):
            M = M @ _kernel_factor(n, rng)
            M = M / np.max(M)
        if classify(M, tol=tol).stp:
            return M
    raise NumericError(f"no STP candidate validated after {retries} attempts (n={n}, seed={seed})")


def signature_conjugate(A, signs) -> np.ndarray:
    """``D A D^-1`` with ``D = diag(signs)``."""
    M = as_matrix(A, square=True)
    s = np.asarray(signs, dtype=float).reshape(-1)
    if s.size != M.shape[0]:
        raise InputError(f"need {M.shape[0]} signs, got {s.size}")
    if np.any(np.abs(s) != 1):
        raise InputError(f"signs must be +-1, got {s.tolist()}")
    return s[:, None] * M * s[None, :]


def rotation3(theta: float) -> np.ndarray:
    """Rotation of R^3 by ``theta`` about e_3."""
    if not math.isfinite(theta):
        raise InputError("theta must be finite")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def permutation_matrix(perm) -> np.ndarray:
    """Matrix sending e_k to e_perm[k] (1-based permutation)."""
    p = [int(v) for v in perm]
    n = len(p)
    if sorted(p) != list(range(1, n + 1)):
        raise InputError(f"{p} is not a permutation of 1..{n}")
    P = np.zeros((n, n))
    P[[v - 1 for v in p], range(n)] = 1.0
    return P


def permutation_similar(A, perm) -> np.ndarray:
    """``P A P^-1``: rows and columns renumbered by ``perm``."""
    M = as_matrix(A, square=True)
    P = permutation_matrix(perm)
    if P.shape != M.shape:
        raise InputError(f"permutation of length {P.shape[0]} does not fit a {M.shape[0]}x{M.shape[0]} matrix")
    return P @ M @ P.T


def generate(spec) -> np.ndarray:
    """Build a matrix from a generator spec (dict or JSON text).

    Kinds: ``vandermonde`` (nodes), ``random_stp`` (n, seed, factors),
    ``signature_conjugate`` (base spec, signs), ``rotation3`` (theta),
    ``permutation_similar`` (base spec, permutation).
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("generator spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "vandermonde":
            return vandermonde(spec["nodes"])
        if kind == "random_stp":
            return random_stp(int(spec["n"]), int(spec.get("seed", 0)), int(spec.get("factors", 1)))
        if kind == "rotation3":
            return rotation3(float(spec["theta"]))
        if kind == "signature_conjugate":
            return signature_conjugate(generate(spec["base"]), spec["signs"])
        if kind == "permutation_similar":
            return permutation_similar(generate(spec["base"]), spec["permutation"])
    except KeyError as exc:
        raise InputError(f"generator spec {kind!r} is missing field {exc}") from exc
    raise InputError(f"unknown generator kind {kind!r}")
