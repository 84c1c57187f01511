"""Proper cones and membership oracles for the completion sets T(K).

For a cone ``K`` in the j-th exterior power of R^n, ``T(K)`` is the closure of
the vectors ``x`` that can be completed by ``x_2, ..., x_j`` so that
``x ^ x_2 ^ ... ^ x_j`` lies in ``int(K) u int(-K)``.  The chain version
``T(K_1, ..., K_j)`` additionally draws ``x_i`` from ``T(K_1, ..., K_{i-1})``.

For the cone spanned by the wedge basis (all signs +1) membership is decided
exactly by sign-variation counts.  Every other case falls back to a seeded
random search, whose negative answer is inconclusive.

Membership tests compare a homogeneous *margin* against the tolerance:
margin > tol is interior, |margin| <= tol is boundary, anything lower is
outside.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import InputError
from .exterior import DEFAULT_TOL, wedge_coords
from .signs import Region, m_membership

DEFAULT_BUDGET = 10_000
DEFAULT_SEED = 20240601
_BLOCK = 500


def _sign_tuple(signs) -> tuple[int, ...]:
    s = tuple(int(v) for v in signs)
    if not s or any(v not in (1, -1) for v in s):
        raise InputError(f"cone signs must be a non-empty tuple of +-1, got {signs!r}")
    return s


def _region(margin: float, tol: float) -> Region:
    if margin > tol:
        return Region.INTERIOR
    if margin >= -tol:
        return Region.BOUNDARY
    return Region.OUTSIDE


class _Cone:
    dim: int

    def margin(self, X: np.ndarray) -> np.ndarray:
        """Scale-free membership margin of each row of ``X``."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Random nonzero points of the cone, boundary faces included."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def _face_mask(rng: np.random.Generator, size: int, dim: int) -> np.ndarray:
    """Coefficient masks: half the rows keep a random nonempty subset only."""
    mask = np.ones((size, dim), dtype=bool)
    if dim == 1:
        return mask
    sparse = rng.random(size) < 0.5
    m = rng.random((size, dim)) < 0.5
    empty = ~m.any(axis=1)
    m[empty, rng.integers(0, dim, size=int(empty.sum()))] = True
    mask[sparse] = m[sparse]
    return mask


@dataclass(frozen=True)
class BasicCone(_Cone):
    """Cone spanned by ``signs[i] * e_i``."""

    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", _sign_tuple(self.signs))

    @property
    def dim(self) -> int:
        return len(self.signs)

    def margin(self, X):
        X = np.atleast_2d(X)
        norm = np.max(np.abs(X), axis=-1)
        m = np.min(X * np.asarray(self.signs), axis=-1)
        return np.divide(m, norm, out=np.zeros_like(m), where=norm > 0)

    def sample(self, rng, size):
        mask = _face_mask(rng, size, self.dim)
        return np.abs(rng.standard_normal((size, self.dim))) * mask * np.asarray(self.signs)

    def to_json(self):
        return {"type": "basic", "signs": list(self.signs)}


@dataclass(frozen=True)
class ExteriorBasicCone(BasicCone):
    """Cone in the j-th exterior power spanned by signed wedge basis vectors."""

    n: int = 0
    j: int = 0

    def __init__(self, n: int, j: int, signs=None):
        if not 1 <= j <= n:
            raise InputError(f"grade {j} out of range [1, {n}]")
        size = math.comb(n, j)
        signs = (1,) * size if signs is None else signs
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "j", int(j))
        object.__setattr__(self, "signs", _sign_tuple(signs))
        if len(self.signs) != size:
            raise InputError(f"exterior basic cone needs {size} signs, got {len(self.signs)}")

    @property
    def all_positive(self) -> bool:
        return all(s == 1 for s in self.signs) or all(s == -1 for s in self.signs)

    def to_json(self):
        return {"type": "exterior_basic", "n": self.n, "j": self.j, "signs": list(self.signs)}


@dataclass(frozen=True)
class IceCreamCone(_Cone):
    """``{x : ||x without axis coordinate||_2 <= x[axis]}``, axis 1-based."""

    n: int
    axis: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.axis <= self.n:
            raise InputError(f"ice-cream cone needs n >= 2 and axis in [1, n], got {self.n}, {self.axis}")

    @property
    def dim(self) -> int:
        return self.n

    def margin(self, X):
        X = np.atleast_2d(X)
        a = self.axis - 1
        rest = np.delete(X, a, axis=-1)
        norm = np.linalg.norm(X, axis=-1)
        m = X[..., a] - np.linalg.norm(rest, axis=-1)
        return np.divide(m, norm, out=np.zeros_like(m), where=norm > 0)

    def sample(self, rng, size):
        d = rng.standard_normal((size, self.n - 1))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        radius = np.where(rng.random(size) < 0.5, 1.0, rng.random(size))
        rest = d * radius[:, None]
        return np.insert(rest, self.axis - 1, 1.0, axis=1) * rng.exponential(size=size)[:, None]

    def to_json(self):
        return {"type": "icecream", "n": self.n, "axis": self.axis}


@dataclass(frozen=True, eq=False)
class SpannedCone(_Cone):
    """Simplicial cone spanned by n linearly independent generators (rows)."""

    generators: np.ndarray
    _inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        G = np.asarray(self.generators, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
            raise InputError(f"spanned cone needs n generators of length n, got shape {G.shape}")
        if not np.all(np.isfinite(G)):
            raise InputError("generators have non-finite entries")
        if np.linalg.matrix_rank(G) < G.shape[0]:
            raise InputError("generators are linearly dependent")
        object.__setattr__(self, "generators", G)
        # coefficients of x are x @ inv(G) since x = c @ G
        object.__setattr__(self, "_inverse", np.linalg.inv(G))

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    def coefficients(self, X) -> np.ndarray:
        return np.atleast_2d(X) @ self._inverse

    def margin(self, X):
        c = self.coefficients(X)
        norm = np.max(np.abs(c), axis=-1)
        m = np.min(c, axis=-1)
        return np.divide(m, norm, out=np.zeros_like(m), where=norm > 0)

    def sample(self, rng, size):
        mask = _face_mask(rng, size, self.dim)
        coeffs = np.abs(rng.standard_normal((size, self.dim))) * mask
        return coeffs @ self.generators

    def same_as(self, other: SpannedCone, tol: float = 1e-9) -> bool:
        """Equality up to positive scaling and order of generators."""
        if not isinstance(other, SpannedCone) or other.dim != self.dim:
            return False
        a = self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)
        b = other.generators / np.linalg.norm(other.generators, axis=1, keepdims=True)
        used = set()
        for row in a:
            hits = [i for i in range(len(b)) if i not in used and np.max(np.abs(row - b[i])) <= tol]
            if not hits:
                return False
            used.add(hits[0])
        return True

    def to_json(self):
        return {"type": "spanned", "generators": self.generators.tolist()}


ConeSpec = Union[BasicCone, ExteriorBasicCone, IceCreamCone, SpannedCone]


# ---------------------------------------------------------------------------
# Serialization


def cone_from_json(obj) -> ConeSpec:
    """Build a cone from its JSON object (dict or JSON text)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError(f"cone spec must be an object with a 'type' field, got {obj!r}")
    kind = obj["type"]
    try:
        if kind == "basic":
            return BasicCone(tuple(obj["signs"]))
        if kind == "exterior_basic":
            return ExteriorBasicCone(int(obj["n"]), int(obj["j"]), obj.get("signs"))
        if kind == "icecream":
            return IceCreamCone(int(obj["n"]), int(obj["axis"]))
        if kind == "spanned":
            return SpannedCone(np.asarray(obj["generators"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed {kind!r} cone spec: {exc}") from exc
    raise InputError(f"unknown cone type {kind!r}")


def cone_to_json(K: ConeSpec) -> dict:
    return K.to_json()


# ---------------------------------------------------------------------------
# Membership, duality, angle


def contains(K: ConeSpec, x, tol: float = DEFAULT_TOL) -> Region:
    """Locate ``x`` relative to the cone ``K``."""
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size != K.dim:
        raise InputError(f"vector of length {v.size} does not match cone dimension {K.dim}")
    return _region(float(K.margin(v)[0]), tol)


def adjoint(K: ConeSpec) -> ConeSpec:
    """Dual cone ``{y : <x, y> >= 0 for all x in K}``."""
    if isinstance(K, (BasicCone, IceCreamCone)):
        # basic and exterior basic cones are their own duals, as is the ice-cream cone
        return K
    if isinstance(K, SpannedCone):
        # rows of inv(G).T pair with generators as a biorthogonal system
        return SpannedCone(np.linalg.inv(K.generators).T)
    raise InputError(f"unsupported cone {K!r}")


def max_angle(K: ConeSpec, samples: int = 2000, seed: int = DEFAULT_SEED) -> tuple[float, bool]:
    """Largest angle between two nonzero points of ``K``; ``(angle, exact)``."""
    if isinstance(K, (BasicCone, IceCreamCone)):
        return math.pi / 2, True
    G = K.generators / np.linalg.norm(K.generators, axis=1, keepdims=True)
    cos = np.clip(G @ G.T, -1.0, 1.0)
    best = float(np.arccos(np.min(cos)))
    if samples > 0:
        rng = np.random.default_rng(seed)
        P = K.sample(rng, 2 * samples)
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        c = np.clip(np.sum(P[:samples] * P[samples:], axis=1), -1.0, 1.0)
        best = max(best, float(np.arccos(np.min(c))))
    return best, False


# ---------------------------------------------------------------------------
# Completion sets


@dataclass
class TMembershipResult:
    """Outcome of a T-set query.

    ``interior``: a completion with wedge in ``int(K) u int(-K)`` was found (or
    decided analytically).  ``closure``: only a completion with nonzero wedge on
    the boundary of ``K u -K`` was found.  ``not_found``: nothing was found;
    this is a proof of non-membership only when ``exact`` is true.
    """

    verdict: str
    exact: bool
    witness: list[list[float]] | None = None
    trials: int = 0

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "exact": self.exact,
                "witness": self.witness, "trials": self.trials}


_ANALYTIC = {Region.INTERIOR: "interior", Region.BOUNDARY: "closure", Region.OUTSIDE: "not_found"}


def _check_grade(K: ConeSpec, n: int, j: int | None) -> int:
    if isinstance(K, ExteriorBasicCone):
        if K.n != n or (j is not None and j != K.j):
            raise InputError(f"exterior basic cone (n={K.n}, j={K.j}) does not match n={n}, j={j}")
        return K.j
    if j is None:
        raise InputError("the grade j must be given for cones other than exterior basic ones")
    if not 1 <= j <= n:
        raise InputError(f"grade {j} out of range [1, {n}]")
    if K.dim != math.comb(n, j):
        raise InputError(f"cone of dimension {K.dim} does not live in grade {j} over R^{n}")
    return j


def _is_standard(K: ConeSpec, n: int, j: int) -> bool:
    """Is ``K`` plus-or-minus the cone spanned by the wedge basis of grade j?"""
    if isinstance(K, ExteriorBasicCone):
        return K.n == n and K.j == j and K.all_positive
    if isinstance(K, BasicCone) and j == 1:
        return len(set(K.signs)) == 1
    return False


def _wedge_verdicts(K: ConeSpec, W: np.ndarray, scale: np.ndarray, tol: float):
    """Per-row (interior, boundary) flags for wedges against ``K u -K``."""
    nonzero = np.max(np.abs(W), axis=1) > tol * scale
    m = np.maximum(K.margin(W), K.margin(-W))
    interior = nonzero & (m > tol)
    boundary = nonzero & (m >= -tol) & ~interior
    return interior, boundary


def _grade_one(K: ConeSpec, v: np.ndarray, tol: float) -> TMembershipResult:
    r = max(contains(K, v, tol), contains(K, -v, tol), key=[Region.OUTSIDE, Region.BOUNDARY, Region.INTERIOR].index)
    return TMembershipResult(_ANALYTIC[r], exact=True)


def _orthogonal_completions(v: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Gram-Schmidt the blocks ``[v, G[b, 0], ...]``; returns the completions."""
    B, m, n = G.shape
    stack = np.concatenate([np.broadcast_to(v, (B, 1, n)), G], axis=1)
    Q, R = np.linalg.qr(np.swapaxes(stack, 1, 2))
    # keep orientation: Q * sign(diag R) reproduces the unnormalized process
    sgn = np.sign(np.diagonal(R, axis1=1, axis2=2))
    sgn[sgn == 0] = 1.0
    Q = Q * sgn[:, None, :]
    return np.swapaxes(Q, 1, 2)[:, 1:, :]


def t_membership(x, K: ConeSpec, j: int | None = None, budget: int = DEFAULT_BUDGET,
                 seed: int = DEFAULT_SEED, method: str = "auto",
                 tol: float = DEFAULT_TOL) -> TMembershipResult:
    """Decide or search membership of ``x`` in ``T(K)``.

    ``method`` is ``"auto"`` (exact when available), ``"exact"`` or ``"search"``.
    """
    v = np.asarray(x, dtype=float).reshape(-1)
    n = v.size
    j = _check_grade(K, n, j)
    if method not in ("auto", "exact", "search"):
        raise InputError(f"unknown method {method!r}")
    standard = _is_standard(K, n, j)
    if method == "exact" and not standard and j != 1:
        raise InputError("exact decision is only available for the standard exterior basic cone")
    if j == 1:
        return _grade_one(K, v, tol)
    if standard and method != "search":
        return TMembershipResult(_ANALYTIC[m_membership(v, j)], exact=True)
    if not np.any(v):
        return TMembershipResult("not_found", exact=False)

    rng = np.random.default_rng(seed)
    vnorm = np.linalg.norm(v)
    closure_witness = None
    done = 0
    while done < budget:
        B = min(_BLOCK, budget - done)
        comp = _orthogonal_completions(v, rng.standard_normal((B, j - 1, n)))
        stacks = np.concatenate([np.broadcast_to(v, (B, 1, n)), comp], axis=1)
        W = wedge_coords(stacks)
        interior, boundary = _wedge_verdicts(K, W, np.full(B, vnorm), tol)
        if interior.any():
            i = int(np.argmax(interior))
            return TMembershipResult("interior", exact=False,
                                     witness=comp[i].tolist(), trials=done + i + 1)
        if closure_witness is None and boundary.any():
            closure_witness = comp[int(np.argmax(boundary))].tolist()
        done += B
    if closure_witness is not None:
        return TMembershipResult("closure", exact=False, witness=closure_witness, trials=done)
    return TMembershipResult("not_found", exact=False, trials=done)


def _chain_is_standard(Ks: Sequence[ConeSpec], n: int) -> bool:
    return all(_is_standard(K, n, i) for i, K in enumerate(Ks, start=1))


def _sample_chain_member(Ks: Sequence[ConeSpec], n: int, rng: np.random.Generator,
                         budget: int, tol: float) -> np.ndarray | None:
    """A random nonzero point certified (interior or closure) in ``T(Ks)``."""
    if len(Ks) == 1:
        p = Ks[0].sample(rng, 1)[0]
        return -p if rng.random() < 0.5 else p
    for _ in range(budget):
        y = rng.standard_normal(n)
        sub = t_chain_membership(y, Ks, budget=budget, seed=int(rng.integers(2**31)), tol=tol)
        if sub.verdict != "not_found":
            return y
    return None


def t_chain_membership(x, Ks: Sequence[ConeSpec], budget: int = DEFAULT_BUDGET,
                       seed: int = DEFAULT_SEED, method: str = "auto",
                       tol: float = DEFAULT_TOL, inner_budget: int = 50) -> TMembershipResult:
    """Decide or search membership of ``x`` in ``T(K_1, ..., K_j)``.

    ``Ks[i-1]`` must be a cone in grade i.  Completions ``x_2`` are drawn from
    ``K_1 u -K_1`` (faces included); later ones are random vectors certified
    against the shorter chain with ``inner_budget`` trials each.
    """
    v = np.asarray(x, dtype=float).reshape(-1)
    n = v.size
    Ks = list(Ks)
    if not Ks:
        raise InputError("empty cone chain")
    for i, K in enumerate(Ks, start=1):
        _check_grade(K, n, i)
    j = len(Ks)
    if method not in ("auto", "exact", "search"):
        raise InputError(f"unknown method {method!r}")
    if j == 1:
        return _grade_one(Ks[0], v, tol)
    standard = _chain_is_standard(Ks, n)
    if method == "exact" and not standard:
        raise InputError("exact decision is only available for the standard exterior basic chain")
    if standard and method != "search":
        return TMembershipResult(_ANALYTIC[m_membership(v, j)], exact=True)
    if not np.any(v):
        return TMembershipResult("not_found", exact=False)

    rng = np.random.default_rng(seed)
    Kj = Ks[-1]
    vnorm = np.linalg.norm(v)
    closure_witness = None
    done = 0
    while done < budget:
        B = min(_BLOCK if j == 2 else 1, budget - done)
        comp = np.empty((B, j - 1, n))
        first = Ks[0].sample(rng, B) * np.where(rng.random(B) < 0.5, -1.0, 1.0)[:, None]
        comp[:, 0, :] = first
        failed = False
        for i in range(2, j):
            for b in range(B):
                y = _sample_chain_member(Ks[:i], n, rng, inner_budget, tol)
                if y is None:
                    failed = True
                    break
                comp[b, i - 1, :] = y
            if failed:
                break
        if failed:
            done += B
            continue
        stacks = np.concatenate([np.broadcast_to(v, (B, 1, n)), comp], axis=1)
        W = wedge_coords(stacks)
        scale = vnorm * np.prod(np.linalg.norm(comp, axis=2), axis=1)
        interior, boundary = _wedge_verdicts(Kj, W, scale, tol)
        if interior.any():
            i = int(np.argmax(interior))
            return TMembershipResult("interior", exact=False,
                                     witness=comp[i].tolist(), trials=done + i + 1)
        if closure_witness is None and boundary.any():
            closure_witness = comp[int(np.argmax(boundary))].tolist()
        done += B
    if closure_witness is not None:
        return TMembershipResult("closure", exact=False, witness=closure_witness, trials=done)
    return TMembershipResult("not_found", exact=False, trials=done)
