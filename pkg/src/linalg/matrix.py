"""
Exact rational matrices

Entries are Fractions held in numpy object arrays, so slicing and products stay exact.
Floating point appears only in ``to_float`` and ``float_inertia``.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src import errors

logger = logging.getLogger(__name__)


class Inertia(BaseModel):
    """Counts of positive, zero and negative eigenvalues"""
    model_config = ConfigDict(frozen=True)

    n_plus: int = Field(0, ge=0)
    n_zero: int = Field(0, ge=0)
    n_minus: int = Field(0, ge=0)

    @property
    def n(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus


class RationalMatrix:
    """Dense square matrix of Fractions with a row/column label per index"""

    def __init__(self, entries: np.ndarray, labels: Optional[Sequence[str]] = None):
        entries = np.asarray(entries, dtype=object)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"matrix is not square (shape = {entries.shape})")
        n = entries.shape[0]
        self.entries = np.array(
            [[Fraction(entries[i, j]) for j in range(n)] for i in range(n)], dtype=object
        ).reshape(n, n)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be a bijection onto the indices")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels=None) -> "RationalMatrix":
        return cls(np.array(rows, dtype=object).reshape(len(rows), len(rows)), labels)

    @classmethod
    def zeros(cls, n: int, labels=None) -> "RationalMatrix":
        return cls(np.full((n, n), Fraction(0), dtype=object), labels)

    @classmethod
    def identity(cls, n: int, labels=None) -> "RationalMatrix":
        return cls(np.array([[Fraction(i == j) for j in range(n)] for i in range(n)]).reshape(n, n), labels)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.labels == other.labels and bool(np.all(self.entries == other.entries))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows()!r}, labels={self.labels!r})"

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def entry(self, row: str, column: str) -> Fraction:
        return self.entries[self.index(row), self.index(column)]

    def rows(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries.flat)

    def is_symmetric(self) -> bool:
        return bool(np.all(self.entries == self.entries.T))

    def submatrix(self, labels: Sequence[str]) -> "RationalMatrix":
        idx = [self.index(label) for label in labels]
        return RationalMatrix(self.entries[np.ix_(idx, idx)], labels)

    def congruent(self, s: np.ndarray) -> "RationalMatrix":
        """S^T H S"""
        s = np.asarray(s, dtype=object)
        return RationalMatrix(s.T.dot(self.entries).dot(s))

    def matvec(self, x: Sequence) -> List[Fraction]:
        return list(self.entries.dot(np.array([Fraction(v) for v in x], dtype=object)))

    def quadratic_form(self, x: Sequence) -> Fraction:
        x = [Fraction(v) for v in x]
        return sum((xi * yi for xi, yi in zip(x, self.matvec(x))), Fraction(0))

    def to_float(self) -> np.ndarray:
        return self.entries.astype(float)


def inertia(h: RationalMatrix, stop_at_negative: bool = False) -> Inertia:
    """
    Exact inertia by symmetric congruence elimination

    A nonzero diagonal pivot splits off one eigenvalue of its sign. When the remaining
    diagonal vanishes but some h_ij does not, the 2x2 block [[0, c], [c, 0]] splits off
    one positive and one negative eigenvalue. What is left at the end is the zero matrix.

    :param h: symmetric matrix
    :param stop_at_negative: return as soon as a negative eigenvalue is established;
        the remaining counts are then partial
    :return: the inertia triple
    """
    if not h.is_symmetric():
        raise errors.NotSymmetric("inertia requires a symmetric matrix")

    a = h.entries.copy()
    active = list(range(h.n))
    n_plus = n_minus = 0

    while active:
        diagonal = [i for i in active if a[i, i] != 0]
        if diagonal:
            # largest pivot keeps intermediate entries small
            p = max(diagonal, key=lambda i: abs(a[i, i]))
            pivot = a[p, p]
            if pivot > 0:
                n_plus += 1
            else:
                n_minus += 1
            active.remove(p)
            for i in active:
                if a[i, p] == 0:
                    continue
                factor = a[i, p] / pivot
                for j in active:
                    a[i, j] -= factor * a[p, j]
        else:
            pair = next(
                ((i, j) for i in active for j in active if i < j and a[i, j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            c = a[i, j]
            n_plus += 1
            n_minus += 1
            active.remove(i)
            active.remove(j)
            row_i = {k: a[i, k] for k in active}
            row_j = {k: a[j, k] for k in active}
            for p in active:
                for q in active:
                    a[p, q] -= (row_i[p] * row_j[q] + row_j[p] * row_i[q]) / c
        if stop_at_negative and n_minus:
            break

    result = Inertia(n_plus=n_plus, n_zero=len(active), n_minus=n_minus)
    logger.debug(f"Inertia of {h.n}x{h.n} matrix: {result}")
    return result


def row_echelon(m: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row-echelon form and the list of pivot columns"""
    m = np.array(m, dtype=object).copy()
    n_rows, n_cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        found = next((i for i in range(r, n_rows) if m[i, c] != 0), None)
        if found is None:
            continue
        if found != r:
            m[[r, found]] = m[[found, r]]
        m[r, :] = m[r, :] / m[r, c]
        for i in range(n_rows):
            if i != r and m[i, c] != 0:
                m[i, :] = m[i, :] - m[i, c] * m[r, :]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def kernel_basis(h: RationalMatrix) -> List[List[Fraction]]:
    """
    Basis of {x : Hx = 0}, one vector per free column of the echelon form

    Each vector has a 1 in its free column and 0 in the other free columns.
    """
    reduced, pivots = row_echelon(h.entries)
    free = [c for c in range(h.n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * h.n
        x[f] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -reduced[r, f]
        basis.append(x)
    return basis


def supersingular_witness(
    h: RationalMatrix, basis: Optional[List[List[Fraction]]] = None
) -> Optional[List[Fraction]]:
    """
    A kernel vector with no zero entry, or None when none exists

    Tries sum_j t^j u_j for t = 1, 2, ...; every coordinate is a nonzero polynomial in t of
    degree < m, so some t <= (m - 1) n + 1 works.
    """
    basis = kernel_basis(h) if basis is None else basis
    if not basis:
        return None
    n, m = h.n, len(basis)
    if any(all(u[i] == 0 for u in basis) for i in range(n)):
        return None
    for t in range(1, (m - 1) * n + 2):
        candidate = [
            sum((Fraction(t) ** j * u[i] for j, u in enumerate(basis)), Fraction(0))
            for i in range(n)
        ]
        if all(x != 0 for x in candidate):
            logger.debug(f"Supersingular witness found at t={t}")
            return candidate
    raise AssertionError("witness search exceeded its proven bound")


def laplacian_identity_rhs(h: RationalMatrix, l: Sequence, x: Sequence) -> Fraction:
    """1/2 sum |h_vv'| l_v l_v' (x_v/l_v - x_v'/l_v')^2 over ordered pairs v != v'"""
    total = Fraction(0)
    for i in range(h.n):
        for j in range(h.n):
            if i == j or h[i, j] == 0:
                continue
            diff = Fraction(x[i]) / l[i] - Fraction(x[j]) / l[j]
            total += abs(h[i, j]) * l[i] * l[j] * diff * diff
    return total / 2


def float_inertia(h: RationalMatrix, threshold: float = 1e-9) -> Tuple[Inertia, float]:
    """
    Inertia from a floating eigen-decomposition

    :return: the inertia and the distance of the spectrum to the +/- threshold boundary
    """
    if h.n == 0:
        return Inertia(), float("inf")
    eigenvalues = np.linalg.eigvalsh(h.to_float())
    counts = Inertia(
        n_plus=int(np.sum(eigenvalues > threshold)),
        n_zero=int(np.sum(np.abs(eigenvalues) <= threshold)),
        n_minus=int(np.sum(eigenvalues < -threshold)),
    )
    separation = float(np.min(np.abs(np.abs(eigenvalues) - threshold)))
    return counts, separation
