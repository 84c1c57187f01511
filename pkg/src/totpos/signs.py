"""Sign-variation counts and the variation bands M(j).

``S-`` counts sign changes after deleting zeros; ``S+`` is the largest count
reachable by assigning +1 or -1 to every zero.  ``M(j)`` is the set of
vectors with ``S- <= j - 1``; its interior is ``S+ <= j - 1``.
"""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import InputError


class Region(str, Enum):
    """Position of a point relative to a closed set with nonempty interior."""

    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"

    def __str__(self) -> str:
        return self.value


class SignVariation(NamedTuple):
    s_minus: int
    s_plus: int


def _signs(x, tol: float) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise InputError("sign variation of an empty vector")
    if tol > 0:
        cut = tol * float(np.max(np.abs(v)))
        return np.where(np.abs(v) <= cut, 0, np.sign(v)).astype(int)
    return np.sign(v).astype(int)


def s_minus(x, tol: float = 0.0) -> int:
    """Sign changes of ``x`` with zero entries discarded."""
    s = _signs(x, tol)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def s_plus(x, tol: float = 0.0) -> int:
    """Maximum sign changes of ``x`` over all +-1 assignments to its zeros.

    Scans once, keeping the best count for each possible sign of the last
    entry.  Entries with ``|x_i| <= tol * max|x|`` count as zeros.
    """
    s = _signs(x, tol)
    neg_inf = -1
    # best[0]: last entry negative, best[1]: last entry positive
    if s[0] == 0:
        best = [0, 0]
    else:
        best = [0, neg_inf] if s[0] < 0 else [neg_inf, 0]
    for si in s[1:]:
        from_pos = best[1] + 1 if best[1] >= 0 else neg_inf
        from_neg = best[0] + 1 if best[0] >= 0 else neg_inf
        end_neg = max(best[0], from_pos)
        end_pos = max(best[1], from_neg)
        if si > 0:
            end_neg = neg_inf
        elif si < 0:
            end_pos = neg_inf
        best = [end_neg, end_pos]
    return max(best)


def sign_variation(x, tol: float = 0.0) -> SignVariation:
    """Both variation counts of ``x``.

    The all-zero vector gets ``S- = 0`` and ``S+ = n - 1``.
    """
    return SignVariation(s_minus(x, tol), s_plus(x, tol))


def region_from_counts(sv: SignVariation, j: int) -> Region:
    if sv.s_plus <= j - 1:
        return Region.INTERIOR
    if sv.s_minus <= j - 1:
        return Region.BOUNDARY
    return Region.OUTSIDE


def m_membership(x, j: int, tol: float = 0.0) -> Region:
    """Locate ``x`` relative to ``M(j) = {x : S-(x) <= j - 1}``.

    >>> m_membership([1, -1, -1], 2)
    <Region.INTERIOR: 'interior'>
    """
    v = np.asarray(x, dtype=float).reshape(-1)
    n = v.size
    if not 1 <= j <= n:
        raise InputError(f"band index {j} out of range [1, {n}]")
    if not np.any(v):
        return Region.BOUNDARY
    return region_from_counts(sign_variation(v, tol), j)
