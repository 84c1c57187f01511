"""Positivity classes of square matrices.

A matrix is J-sign-symmetric (JS) when some split of the indices into J and
its complement makes the entries nonnegative on J x J and J^c x J^c and
nonpositive elsewhere; equivalently ``D A D`` is entrywise nonnegative for
the signature ``D = diag(+-1)`` that is +1 on J.  TP, SR and TJS ask the same
question of every compound ``A^(j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .exterior import DEFAULT_TOL, as_matrix, compound_body, scale_of


@dataclass(frozen=True)
class JPartition:
    """A split of [n] into J and J^c; canonical form has 1 in J."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(sorted(set(int(i) for i in self.members)))
        if any(i < 1 or i > self.n for i in m):
            raise InputError(f"partition members {m} out of range [1, {self.n}]")
        if m and m[0] != 1 and len(m) < self.n:
            # J and its complement describe the same class
            m = tuple(i for i in range(1, self.n + 1) if i not in m)
        if not m:
            m = tuple(range(1, self.n + 1))
        object.__setattr__(self, "members", m)

    @property
    def complement(self) -> tuple[int, ...]:
        s = set(self.members)
        return tuple(i for i in range(1, self.n + 1) if i not in s)

    def signature(self) -> np.ndarray:
        """Diagonal of D: +1 on J, -1 on the complement."""
        d = -np.ones(self.n)
        d[[i - 1 for i in self.members]] = 1.0
        return d

    @classmethod
    def from_signs(cls, signs) -> JPartition:
        signs = list(signs)
        return cls(len(signs), tuple(i + 1 for i, s in enumerate(signs) if s > 0))


def _zero_cut(M: np.ndarray, tol: float) -> float:
    return tol * scale_of(M)


def detect_js(A, strict: bool = False, tol: float = DEFAULT_TOL) -> JPartition | None:
    """Find a J for which ``A`` is (strictly) J-sign-symmetric, or ``None``.

    Entries above the cut force their row and column index onto the same side,
    entries below ``-cut`` force opposite sides.  Near-zero entries impose
    nothing, but make a strict pattern impossible.
    """
    M = as_matrix(A, square=True)
    n = M.shape[0]
    cut = _zero_cut(M, tol)
    pos = M > cut
    neg = M < -cut
    if strict and not np.all(pos | neg):
        return None

    side = np.full(n, -1, dtype=int)  # 0 -> J, 1 -> J^c
    for root in range(n):
        if side[root] >= 0:
            continue
        side[root] = 0
        stack = [root]
        while stack:
            i = stack.pop()
            for k in range(n):
                if pos[i, k] or pos[k, i]:
                    want = side[i]
                elif neg[i, k] or neg[k, i]:
                    want = 1 - side[i]
                else:
                    continue
                if side[k] < 0:
                    side[k] = want
                    stack.append(k)
                elif side[k] != want:
                    return None

    d = np.where(side == 0, 1.0, -1.0)
    conj = d[:, None] * M * d[None, :]
    ok = np.all(conj > cut) if strict else np.all(conj >= -cut)
    if not ok:
        return None
    return JPartition(n, tuple(int(i) + 1 for i in np.flatnonzero(side == 0)))


@dataclass
class PositivityClass:
    """Flags for the positivity hierarchy, decided up to compound order ``k_checked``.

    ``sr_signature[j-1]`` is the sign of the j-th compound when every compound
    up to ``k_checked`` is one-signed; ``sr_strict[j-1]`` records whether that
    compound has no zero entries.  ``js_partitions[j-1]`` is the canonical
    partition of the j-th compound's index set (over ranks 1..C(n,j)) if it is
    JS, else ``None``.
    """

    n: int
    k_checked: int
    nonnegative: bool
    positive: bool
    tp: bool
    stp: bool
    tjs: bool
    stjs: bool
    sr_signature: tuple[int, ...] | None = None
    sr_strict: tuple[bool, ...] | None = None
    js_partition: JPartition | None = None
    js_partitions: list[JPartition | None] = field(default_factory=list)

    @property
    def sr(self) -> bool:
        return self.sr_signature is not None

    @property
    def ssr(self) -> bool:
        return self.sr_strict is not None and all(self.sr_strict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k_checked": self.k_checked,
            "nonnegative": self.nonnegative,
            "positive": self.positive,
            "tp": self.tp,
            "stp": self.stp,
            "sr": self.sr,
            "ssr": self.ssr,
            "sr_signature": list(self.sr_signature) if self.sr_signature else None,
            "sr_strict": list(self.sr_strict) if self.sr_strict else None,
            "tjs": self.tjs,
            "stjs": self.stjs,
            "js_partition": list(self.js_partition.members) if self.js_partition else None,
        }


def classify(A, k: int | None = None, tol: float = DEFAULT_TOL,
             max_entries: int | None = None) -> PositivityClass:
    """Classify ``A`` using its compounds of order 1..k (default k = n)."""
    M = as_matrix(A, square=True)
    n = M.shape[0]
    k = n if k is None else int(k)
    if not 1 <= k <= n:
        raise InputError(f"truncation order {k} out of range [1, {n}]")

    tp = stp = True
    signature: list[int] | None = []
    strict: list[bool] = []
    tjs = stjs = True
    partitions: list[JPartition | None] = []
    for j in range(1, k + 1):
        C = M if j == 1 else compound_body(M, j, max_entries)
        cut = _zero_cut(C, tol)
        nonneg = bool(np.all(C >= -cut))
        nonpos = bool(np.all(C <= cut))
        tp = tp and nonneg
        stp = stp and bool(np.all(C > cut))
        if signature is not None:
            if nonneg:
                signature.append(1)
                strict.append(bool(np.all(C > cut)))
            elif nonpos:
                signature.append(-1)
                strict.append(bool(np.all(C < -cut)))
            else:
                signature = None
        strict_part = detect_js(C, strict=True, tol=tol)
        part = strict_part or detect_js(C, strict=False, tol=tol)
        partitions.append(part)
        stjs = stjs and strict_part is not None
        tjs = tjs and part is not None

    cut1 = _zero_cut(M, tol)
    return PositivityClass(
        n=n,
        k_checked=k,
        nonnegative=bool(np.all(M >= -cut1)),
        positive=bool(np.all(M > cut1)),
        tp=tp,
        stp=stp,
        tjs=tjs,
        stjs=stjs,
        sr_signature=tuple(signature) if signature is not None else None,
        sr_strict=tuple(strict) if signature is not None else None,
        js_partition=partitions[0],
        js_partitions=partitions,
    )


def first_failing_order(A, strict: bool = True, tol: float = DEFAULT_TOL,
                        max_entries: int | None = None) -> int | None:
    """Smallest j whose compound is not (strictly) JS, or ``None`` if all are."""
    M = as_matrix(A, square=True)
    for j in range(1, M.shape[0] + 1):
        C = M if j == 1 else compound_body(M, j, max_entries)
        if detect_js(C, strict=strict, tol=tol) is None:
            return j
    return None
