"""Integer diagonalisation of relation and boundary matrices.

Unimodular row and column operations bring a matrix to diagonal form; the
pivot is always the entry of least absolute value in the remaining block
(first in row-major order), so the output is deterministic. Arithmetic starts
in ``int64`` and switches to Python integers once entries grow past
``_INT64_GUARD``.
"""
from __future__ import annotations

import logging
from math import gcd, prod
from typing import List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_INT64_GUARD = 2**31


def _as_matrix(matrix, cols: Optional[int] = None) -> np.ndarray:
    if isinstance(matrix, np.ndarray) and matrix.dtype == object:
        A = matrix
    else:
        A = np.array(matrix, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else np.zeros((0, cols or 0), dtype=np.int64)
    return A


def _widen(*arrays: np.ndarray) -> List[np.ndarray]:
    if all(a.dtype == object for a in arrays):
        return list(arrays)
    biggest = max((int(np.abs(a).max()) for a in arrays if a.size), default=0)
    if biggest <= _INT64_GUARD:
        return list(arrays)
    logger.debug("normal form switches to exact integers (entry %d)", biggest)
    return [a.astype(object) for a in arrays]


def diagonalize(matrix, transform: bool = False, cols: Optional[int] = None) -> Tuple[List[int], Optional[np.ndarray]]:
    """Diagonal entries of ``P·A·Q`` (absolute values, leading block only).

    With ``transform`` the column transform ``Q`` is returned as well; the row
    span of ``A`` times ``Q`` is then the row span of the diagonal matrix.
    """
    A = _as_matrix(matrix, cols=cols).copy()
    rows, n_cols = A.shape
    Q = np.eye(n_cols, dtype=np.int64) if transform else np.zeros((0, 0), dtype=np.int64)
    diagonal: List[int] = []
    s = 0
    while s < min(rows, n_cols):
        block = A[s:, s:]
        nonzero = np.argwhere(block != 0)
        if nonzero.size == 0:
            break
        while True:
            values = np.abs(block[nonzero[:, 0], nonzero[:, 1]].astype(object))
            k = min(range(len(values)), key=lambda t: values[t])
            i, j = int(nonzero[k][0]) + s, int(nonzero[k][1]) + s
            if i != s:
                A[[s, i]] = A[[i, s]]
            if j != s:
                A[:, [s, j]] = A[:, [j, s]]
                if transform:
                    Q[:, [s, j]] = Q[:, [j, s]]
            A, Q = _widen(A, Q)
            p = A[s, s]
            q_rows = A[s + 1:, s] // p
            A[s + 1:] -= np.outer(q_rows, A[s]).astype(A.dtype)
            q_cols = A[s, s + 1:] // p
            A[:, s + 1:] -= np.outer(A[:, s], q_cols).astype(A.dtype)
            if transform:
                Q[:, s + 1:] -= np.outer(Q[:, s], q_cols).astype(Q.dtype)
            # remainders left in the pivot row or column become the next pivot
            edge = np.concatenate([A[s + 1:, s], A[s, s + 1:]])
            if not np.any(edge != 0):
                break
            block = A[s:, s:]
            nonzero = np.array(
                [(r - s, 0) for r in range(s + 1, rows) if A[r, s] != 0]
                + [(0, c - s) for c in range(s + 1, n_cols) if A[s, c] != 0],
                dtype=np.int64,
            )
        diagonal.append(abs(int(A[s, s])))
        s += 1
    return diagonal, (Q if transform else None)


def rank(matrix) -> int:
    diagonal, _ = diagonalize(matrix)
    return sum(1 for d in diagonal if d != 0)


def invariant_factors(diagonal: Sequence[int]) -> List[int]:
    """Normalise a diagonal so each entry divides the next (zeros and units dropped)."""
    d = sorted(int(x) for x in diagonal if x != 0)
    for a in range(len(d)):
        for b in range(a + 1, len(d)):
            g = gcd(d[a], d[b])
            d[a], d[b] = g, d[a] * d[b] // g
    return [x for x in d if x != 1]


def torsion(diagonal: Sequence[int]) -> Tuple[int, ...]:
    return tuple(invariant_factors(diagonal))


def finite_abelian_group(relations, generators: int) -> Tuple[Tuple[int, ...], Tuple[int, ...], np.ndarray]:
    """``Z^generators / rowspan(relations)`` as ``⊕ Z/moduli``.

    Returns ``(moduli, columns, Q)``: the coordinates of a coefficient vector
    ``v`` are ``(v·Q)[columns] mod moduli``. Trivial summands are dropped.
    """
    if generators == 0:
        return (), (), np.zeros((0, 0), dtype=np.int64)
    R = _as_matrix(relations, cols=generators)
    if R.shape[1] != generators:
        raise ValueError(f"relation matrix has {R.shape[1]} columns, expected {generators}")
    diagonal, Q = diagonalize(R, transform=True)
    if len(diagonal) < generators or 0 in diagonal:
        raise ValueError("relations do not present a finite group")
    columns = tuple(c for c, d in enumerate(diagonal) if d != 1)
    moduli = tuple(diagonal[c] for c in columns)
    return moduli, columns, Q


def coordinates(vector, moduli: Sequence[int], columns: Sequence[int], Q: np.ndarray) -> Tuple[int, ...]:
    if not columns:
        return ()
    image = np.asarray(vector, dtype=Q.dtype) @ Q
    return tuple(int(image[c]) % m for c, m in zip(columns, moduli))


def subgroup_order(vectors, moduli: Sequence[int]) -> int:
    """Order of the subgroup of ``⊕ Z/moduli`` generated by ``vectors``."""
    n = len(moduli)
    if n == 0:
        return 1
    V = _as_matrix(vectors, cols=n)
    if V.size == 0:
        return 1
    stacked = np.vstack([V.astype(object), np.diag([int(m) for m in moduli]).astype(object)])
    diagonal, _ = diagonalize(_shrink(stacked))
    return prod(int(m) for m in moduli) // prod(diagonal)


def _shrink(matrix: np.ndarray) -> np.ndarray:
    """Back to ``int64`` when every entry fits."""
    if matrix.size and max(abs(int(x)) for x in matrix.flat) > _INT64_GUARD:
        return matrix
    return matrix.astype(np.int64)
