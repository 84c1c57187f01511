"""Exterior powers of real matrices.

Wedge bases are indexed by strictly increasing index tuples listed in
lexicographic order.  Index tuples use 1-based indices at the API surface;
ranks are 0-based so they can address numpy arrays directly.

Coordinates of a wedge product are the plain j x j minors of the stacked
vectors (Pluecker convention), so that ``compound(A, j)`` acts on wedge
coordinates exactly: ``apply_compound(compound(A, j), wedge(xs))`` equals
``wedge([A @ x for x in xs])``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, ResourceError

#: Default cap on the number of entries of a compound matrix, C(n, j) ** 2.
MAX_COMPOUND_ENTRIES = 10**6

DEFAULT_TOL = 1e-9


def as_matrix(A, square: bool = False) -> np.ndarray:
    """Validate and convert ``A`` to a finite 2-D float array."""
    M = np.asarray(A, dtype=float)
    if M.ndim != 2 or M.shape[0] == 0 or M.shape[1] == 0:
        raise InputError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    if square and M.shape[0] != M.shape[1]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    return M


def scale_of(X) -> float:
    """Scale used by tolerance tests: ``max(1, max |x|)``."""
    X = np.asarray(X)
    return max(1.0, float(np.max(np.abs(X)))) if X.size else 1.0


# ---------------------------------------------------------------------------
# Subset indexing


def _check_subset(n: int, elements: Sequence[int]) -> tuple[int, ...]:
    if n < 1:
        raise InputError(f"ambient dimension must be positive, got {n}")
    s = tuple(int(e) for e in elements)
    if not s:
        raise InputError("empty index tuple")
    if s[0] < 1 or s[-1] > n:
        raise InputError(f"indices {s} out of range [1, {n}]")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise InputError(f"indices {s} are not strictly increasing")
    return s


def subset_rank(n: int, elements: Sequence[int]) -> int:
    """Lexicographic rank of a strictly increasing 1-based index tuple.

    >>> subset_rank(3, (1, 2)), subset_rank(3, (2, 3))
    (0, 2)
    """
    s = _check_subset(n, elements)
    j = len(s)
    rank = 0
    prev = 0
    for pos, c in enumerate(s, start=1):
        # subsets that agree on the prefix and place a smaller value here
        for v in range(prev + 1, c):
            rank += math.comb(n - v, j - pos)
        prev = c
    return rank


def subset_unrank(n: int, j: int, rank: int) -> tuple[int, ...]:
    """Inverse of :func:`subset_rank`."""
    if not 1 <= j <= n:
        raise InputError(f"grade {j} out of range [1, {n}]")
    total = math.comb(n, j)
    if not 0 <= rank < total:
        raise InputError(f"rank {rank} out of range [0, {total})")
    out = []
    v = 1
    for pos in range(1, j + 1):
        while True:
            block = math.comb(n - v, j - pos)
            if rank < block:
                break
            rank -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


def subsets(n: int, j: int) -> list[tuple[int, ...]]:
    """All 1-based j-subsets of [n] in lexicographic (rank) order."""
    if not 1 <= j <= n:
        raise InputError(f"grade {j} out of range [1, {n}]")
    return list(itertools.combinations(range(1, n + 1), j))


def _zero_based(n: int, j: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), j)), dtype=np.intp).reshape(-1, j)


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True, eq=False)
class MultiVector:
    """Element of the j-th exterior power of R^n in the lexicographic wedge basis."""

    n: int
    j: int
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float).reshape(-1)
        if not 1 <= self.j <= self.n:
            raise InputError(f"grade {self.j} out of range [1, {self.n}]")
        if coords.shape[0] != math.comb(self.n, self.j):
            raise InputError(
                f"expected {math.comb(self.n, self.j)} coordinates, got {coords.shape[0]}"
            )
        if not np.all(np.isfinite(coords)):
            raise InputError("multivector has non-finite coordinates")
        object.__setattr__(self, "coords", coords)

    def basis(self) -> list[tuple[int, ...]]:
        return subsets(self.n, self.j)

    def __neg__(self) -> MultiVector:
        return MultiVector(self.n, self.j, -self.coords)

    def allclose(self, other: MultiVector, tol: float = DEFAULT_TOL) -> bool:
        if (self.n, self.j) != (other.n, other.j):
            return False
        diff = np.max(np.abs(self.coords - other.coords))
        return bool(diff <= tol * max(scale_of(self.coords), scale_of(other.coords)))


@dataclass(frozen=True, eq=False)
class CompoundMatrix:
    """The j-th compound of an n x n matrix; ``body`` is C(n,j) x C(n,j)."""

    n: int
    j: int
    body: np.ndarray

    def __post_init__(self):
        side = math.comb(self.n, self.j)
        body = np.asarray(self.body, dtype=float)
        if body.shape != (side, side):
            raise InputError(f"compound body must be {side}x{side}, got {body.shape}")
        object.__setattr__(self, "body", body)

    @property
    def size(self) -> int:
        return self.body.shape[0]

    def basis(self) -> list[tuple[int, ...]]:
        return subsets(self.n, self.j)

    def entry(self, rows: Sequence[int], cols: Sequence[int]) -> float:
        """Minor on 1-based ``rows`` x ``cols``, read from the compound."""
        return float(self.body[subset_rank(self.n, rows), subset_rank(self.n, cols)])


# ---------------------------------------------------------------------------
# Minors and compounds


def minor(A, rows: Sequence[int], cols: Sequence[int]) -> float:
    """Determinant of ``A[rows, cols]`` for 1-based increasing index tuples."""
    M = as_matrix(A)
    r = _check_subset(M.shape[0], rows)
    c = _check_subset(M.shape[1], cols)
    if len(r) != len(c):
        raise InputError(f"row/column tuples differ in length: {len(r)} vs {len(c)}")
    sub = M[np.ix_([i - 1 for i in r], [k - 1 for k in c])]
    return float(_small_det(sub)) if len(r) <= 3 else float(np.linalg.det(sub))


def _small_det(S: np.ndarray) -> float:
    """Cofactor expansion for orders 1-3."""
    if S.shape[0] == 1:
        return S[0, 0]
    if S.shape[0] == 2:
        return S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    return (S[0, 0] * (S[1, 1] * S[2, 2] - S[1, 2] * S[2, 1])
            - S[0, 1] * (S[1, 0] * S[2, 2] - S[1, 2] * S[2, 0])
            + S[0, 2] * (S[1, 0] * S[2, 1] - S[1, 1] * S[2, 0]))


def _check_size(n: int, j: int, max_entries: int | None) -> int:
    cap = MAX_COMPOUND_ENTRIES if max_entries is None else max_entries
    side = math.comb(n, j)
    if side * side > cap:
        raise ResourceError(
            f"compound of order {j} for n={n} has {side}x{side} entries, above the cap {cap}"
        )
    return side


def compound_body(A, j: int, max_entries: int | None = None) -> np.ndarray:
    """Raw C(n,j) x C(n,j) array of j x j minors of a square matrix."""
    M = as_matrix(A, square=True)
    n = M.shape[0]
    if not 1 <= j <= n:
        raise InputError(f"compound order {j} out of range [1, {n}]")
    side = _check_size(n, j, max_entries)
    if j == 1:
        return M.copy()
    idx = _zero_based(n, j)
    out = np.empty((side, side))
    # one row-subset at a time keeps memory at O(C(n,j) * j^2)
    for r, rows in enumerate(idx):
        sub = M[rows][:, idx]  # (j, side, j)
        out[r] = np.linalg.det(np.transpose(sub, (1, 0, 2)))
    return out


def compound(A, j: int, max_entries: int | None = None) -> CompoundMatrix:
    """j-th compound matrix: entry (rank(rows), rank(cols)) is the minor on rows x cols."""
    M = as_matrix(A, square=True)
    return CompoundMatrix(M.shape[0], j, compound_body(M, j, max_entries))


# ---------------------------------------------------------------------------
# Wedge products


def wedge_coords(X: np.ndarray) -> np.ndarray:
    """Pluecker coordinates of the rows of ``X`` (shape ``(..., j, n)``).

    Batched: leading axes are preserved and the last axis has length C(n, j).
    """
    X = np.asarray(X, dtype=float)
    j, n = X.shape[-2], X.shape[-1]
    idx = _zero_based(n, j)
    cols = X[..., idx]  # (..., j, C, j)
    cols = np.moveaxis(cols, -2, -3)  # (..., C, j, j)
    return np.linalg.det(cols)


def wedge(xs: Iterable) -> MultiVector:
    """Exterior product of j vectors of R^n.

    >>> wedge([[1, 0, 0], [0, 1, 0]]).coords
    array([1., 0., 0.])
    """
    X = np.atleast_2d(np.asarray(list(xs), dtype=float))
    if X.ndim != 2 or X.shape[0] == 0:
        raise InputError("wedge needs a non-empty list of equal-length vectors")
    j, n = X.shape
    if j > n:
        raise InputError(f"cannot wedge {j} vectors of R^{n}")
    if not np.all(np.isfinite(X)):
        raise InputError("vectors have non-finite entries")
    return MultiVector(n, j, wedge_coords(X))


def hodge(phi: MultiVector) -> np.ndarray:
    """Map a grade n-1 multivector to R^n.

    The basis element missing index k is sent to ``(-1) ** (k + 1) * e_k``; a
    wedge of n-1 vectors goes to a vector orthogonal to all of them.
    """
    if phi.n < 2 or phi.j != phi.n - 1:
        raise InputError(f"hodge needs grade n-1, got grade {phi.j} for n={phi.n}")
    n = phi.n
    out = np.zeros(n)
    for r, s in enumerate(subsets(n, n - 1)):
        k = (set(range(1, n + 1)) - set(s)).pop()
        out[k - 1] += (-1) ** (k + 1) * phi.coords[r]
    return out


def apply_compound(C: CompoundMatrix, phi: MultiVector) -> MultiVector:
    """Action of the j-th exterior power on a grade-j multivector."""
    if (C.n, C.j) != (phi.n, phi.j):
        raise InputError(
            f"compound (n={C.n}, j={C.j}) cannot act on multivector (n={phi.n}, j={phi.j})"
        )
    return MultiVector(phi.n, phi.j, C.body @ phi.coords)


def kronecker_eigs(eigs, j: int) -> np.ndarray:
    """All products of j eigenvalues over strictly increasing index tuples."""
    lam = np.asarray(eigs, dtype=complex).reshape(-1)
    n = lam.shape[0]
    if not 1 <= j <= n:
        raise InputError(f"order {j} out of range [1, {n}]")
    idx = _zero_based(n, j)
    return np.prod(lam[idx], axis=1)


def match_multisets(a, b) -> float:
    """Largest pairwise distance under the optimal matching of two equal-size multisets."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.shape != b.shape:
        raise InputError(f"multisets differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    # minimise the sum first, then report the worst matched pair
    r, c = linear_sum_assignment(cost)
    return float(np.max(cost[r, c]))
