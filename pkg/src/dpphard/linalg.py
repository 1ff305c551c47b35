"""Exact rational linear algebra.

Values are :class:`fractions.Fraction` (integral vector entries are kept as
plain ``int`` to keep large gadget instances cheap).  Hot loops run on
``gmpy2.mpq``/``mpz`` and convert back at the boundary.  Irrational
quantities such as norms and volumes are exposed as exact squares plus a
float square root.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import operator
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

Scalar = Fraction
Vector = tuple
Subset = tuple


def as_scalar(x) -> Fraction:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to a Fraction.

    Floats are rejected: every input to this package is meant to be exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, type(mpq())):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, type(mpz())):
        return Fraction(int(x))
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _entry(x):
    q = as_scalar(x)
    return q.numerator if q.denominator == 1 else q


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _dot(u, v):
    return sum(map(operator.mul, u, v))


def make_vector(entries: Iterable) -> Vector:
    return tuple(x if type(x) is int else _entry(x) for x in entries)


def inner(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return _frac(_dot(map(mpq, u), map(mpq, v)))


def norm_sq(v: Sequence) -> Fraction:
    return inner(v, v)


def check_subset(S: Iterable[int], n: int) -> Subset:
    """Validate and return ``S`` as a sorted, duplicate-free tuple in ``range(n)``."""
    S = tuple(S)
    if any(not isinstance(i, (int, np.integer)) for i in S):
        raise TypeError("subset indices must be integers")
    S = tuple(int(i) for i in S)
    if any(b <= a for a, b in zip(S, S[1:])):
        raise ValueError(f"subset must be strictly increasing: {S}")
    if S and (S[0] < 0 or S[-1] >= n):
        raise IndexError(f"subset {S} out of range for order {n}")
    return S


def iter_subsets(n: int) -> Iterator[Subset]:
    """All subsets of ``range(n)``, by cardinality then lexicographically."""
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


@dataclasses.dataclass(frozen=True)
class VectorSet:
    """An ordered set of rational vectors sharing one dimension.

    ``scale_sq`` is a global symbolic scale: the vectors represented are
    ``sqrt(scale_sq) * v`` for each stored ``v``.  It lets irrational common
    factors such as ``1/sqrt(delta)`` ride along while every inner product
    stays rational.
    """

    vectors: tuple
    dim: int
    scale_sq: Fraction = Fraction(1)

    def __post_init__(self):
        vecs = tuple(make_vector(v) for v in self.vectors)
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for i, v in enumerate(vecs):
            if len(v) != self.dim:
                raise ValueError(f"vector {i} has dimension {len(v)}, expected {self.dim}")
        scale_sq = as_scalar(self.scale_sq)
        if scale_sq <= 0:
            raise ValueError("scale_sq must be positive")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "scale_sq", scale_sq)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], scale_sq=1) -> "VectorSet":
        rows = list(rows)
        if not rows:
            raise ValueError("use VectorSet((), dim) for an empty set")
        return cls(tuple(rows), len(rows[0]), scale_sq)

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, i: int) -> Vector:
        return self.vectors[i]

    def select(self, S: Iterable[int]) -> "VectorSet":
        S = check_subset(S, len(self))
        return VectorSet(tuple(self.vectors[i] for i in S), self.dim, self.scale_sq)

    def float_view(self) -> np.ndarray:
        out = np.array([[float(x) for x in v] for v in self.vectors], dtype=float)
        return out.reshape(len(self), self.dim) * math.sqrt(self.scale_sq)

    @cached_property
    def _mpq_rows(self):
        return [[mpq(x) for x in v] for v in self.vectors]

    @cached_property
    def _integer_rows(self):
        rows, dens = [], []
        for v in self.vectors:
            den = 1
            for x in v:
                if isinstance(x, Fraction):
                    den = math.lcm(den, x.denominator)
            rows.append([int(x * den) for x in v])
            dens.append(den)
        return rows, dens


def _integer_gram(rows: list[list[int]]) -> list[list[int]]:
    if not rows:
        return []
    bound = max((abs(x) for r in rows for x in r), default=0)
    if bound == 0 or bound * bound * len(rows[0]) < 2**62:
        m = np.array(rows, dtype=np.int64)
        return (m @ m.T).tolist()
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            out[i][j] = out[j][i] = _dot(rows[i], rows[j])
    return out


def is_symmetric(rows: Sequence[Sequence]) -> bool:
    n = len(rows)
    return all(len(r) == n for r in rows) and all(
        rows[i][j] == rows[j][i] for i in range(n) for j in range(i + 1, n)
    )


def is_psd(rows: Sequence[Sequence]) -> bool:
    """Exact PSD test by symmetric elimination (rational LDL^T).

    A zero pivot is allowed only when the rest of its row is zero too;
    any negative pivot rejects.
    """
    if not is_symmetric(rows):
        return False
    a = [[mpq(x) for x in r] for r in rows]
    n = len(a)
    for k in range(n):
        d = a[k][k]
        if d < 0:
            return False
        row_k = a[k]
        if d == 0:
            if any(row_k[j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f == 0:
                continue
            row_i = a[i]
            for j in range(k + 1, n):
                if row_k[j]:
                    row_i[j] -= f * row_k[j]
    return True


@dataclasses.dataclass(frozen=True)
class GramMatrix:
    """Exactly symmetric, PSD-certified rational matrix."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_scalar(x) for x in r) for r in self.rows)
        n = len(rows)
        if n < 1:
            raise ValueError("matrix order must be positive")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if not is_symmetric(rows):
            raise ValueError("matrix is not symmetric")
        if not is_psd(rows):
            raise ValueError("matrix is not positive semi-definite")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int, scale=1) -> "GramMatrix":
        c = as_scalar(scale)
        return cls(tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence) -> "GramMatrix":
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)))

    def submatrix(self, S: Iterable[int]) -> tuple:
        S = check_subset(S, self.n)
        return tuple(tuple(self.rows[i][j] for j in S) for i in S)

    def shifted(self, c) -> tuple:
        """Rows of ``A + c*I`` (not certified; ``c`` may be negative)."""
        c = as_scalar(c)
        return tuple(
            tuple(x + c if i == j else x for j, x in enumerate(r)) for i, r in enumerate(self.rows)
        )

    def float_view(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)

    @cached_property
    def _mpq_rows(self):
        return [[mpq(x) for x in r] for r in self.rows]


def _bareiss(m: list[list]) -> int:
    """Fraction-free elimination on an integer matrix (modified in place)."""
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - f * row_k[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant; the empty matrix has determinant 1."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    m, scale = [], mpz(1)
    for r in rows:
        qs = [mpq(x) for x in r]
        den = mpz(1)
        for q in qs:
            den = gmpy2.lcm(den, q.denominator)
        m.append([q.numerator * (den // q.denominator) for q in qs])
        scale *= den
    return _frac(mpq(_bareiss(m), scale))


def principal_minor(A: GramMatrix, S: Iterable[int]) -> Fraction:
    return determinant(A.submatrix(S))


def principal_minors(A: GramMatrix) -> dict[Subset, Fraction]:
    """Every principal minor of a PSD matrix, keyed by subset.

    Depth-first over increasing index sequences with an incremental LDL^T,
    so each subset costs O(|S|^2).  Once a pivot hits zero the whole subtree
    is singular (a singular principal block of a PSD matrix stays singular
    under extension) and is filled with zeros.
    """
    a = A._mpq_rows
    n = A.n
    out: dict[Subset, Fraction] = {(): Fraction(1)}

    def extend(chosen, LD, D, det):
        start = chosen[-1] + 1 if chosen else 0
        for j in range(start, n):
            col = [a[s][j] for s in chosen]
            ell = []
            for t in range(len(chosen)):
                w = col[t]
                ld_t = LD[t]
                for u in range(t):
                    w -= ld_t[u] * ell[u]
                ell.append(w / D[t])
            dj = a[j][j] - sum(ell[t] * ell[t] * D[t] for t in range(len(chosen)))
            S = chosen + (j,)
            if dj == 0:
                rest = range(j + 1, n)
                for r in range(n - j):
                    for tail in itertools.combinations(rest, r):
                        out[S + tail] = Fraction(0)
                continue
            new_det = det * dj
            out[S] = _frac(new_det)
            extend(S, LD + [[ell[t] * D[t] for t in range(len(chosen))]], D + [dj], new_det)

    extend((), [], [], mpq(1))
    return out


def gram_from_vectors(V: VectorSet) -> GramMatrix:
    if len(V) == 0:
        raise ValueError("vector set is empty")
    rows, dens = V._integer_rows
    G = _integer_gram(rows)
    s = V.scale_sq
    n = len(V)
    return GramMatrix(
        tuple(tuple(s * Fraction(G[i][j], dens[i] * dens[j]) for j in range(n)) for i in range(n))
    )


def _orthogonal_basis(rows):
    basis = []
    for v in rows:
        r = _residual(v, basis)
        rr = _dot(r, r)
        if rr:
            basis.append((r, rr))
    return basis


def _residual(v, basis):
    r = list(v)
    for b, bb in basis:
        c = _dot(v, b) / bb
        if c:
            r = [ri - c * bi for ri, bi in zip(r, b)]
    return r


def volume_squared(V: VectorSet, S: Iterable[int]) -> Fraction:
    """Squared volume of the parallelepiped spanned by ``V[S]``.

    Computed as the product of squared residual norms of successive
    orthogonal projections, never through a determinant.
    """
    S = check_subset(S, len(V))
    rows = V._mpq_rows
    basis = []
    vol = mpq(1)
    for i in S:
        r = _residual(rows[i], basis)
        rr = _dot(r, r)
        if rr == 0:
            return Fraction(0)
        vol *= rr
        basis.append((r, rr))
    return _frac(vol) * V.scale_sq ** len(S)


def volume(V: VectorSet, S: Iterable[int]) -> float:
    return math.sqrt(volume_squared(V, S))


def _check_dims(v, Q: VectorSet):
    if len(v) != Q.dim:
        raise ValueError(f"dimension mismatch: {len(v)} vs {Q.dim}")


def project_onto_span(v: Sequence, Q: VectorSet) -> Vector:
    """Orthogonal projection of ``v`` onto span(Q); ``Q.scale_sq`` does not change the span."""
    _check_dims(v, Q)
    vq = [mpq(x) for x in v]
    proj = [mpq(0)] * len(vq)
    for b, bb in _orthogonal_basis(Q._mpq_rows):
        c = _dot(vq, b) / bb
        if c:
            proj = [p + c * bi for p, bi in zip(proj, b)]
    return tuple(_entry(_frac(p)) for p in proj)


def distance_sq_to_span(v: Sequence, Q: VectorSet) -> Fraction:
    _check_dims(v, Q)
    r = _residual([mpq(x) for x in v], _orthogonal_basis(Q._mpq_rows))
    return _frac(_dot(r, r))


def distance_to_span(v: Sequence, Q: VectorSet) -> float:
    return math.sqrt(distance_sq_to_span(v, Q))


def min_eigenvalue_at_least(A: GramMatrix, lam) -> bool:
    """True iff every eigenvalue of ``A`` is >= ``lam`` (exact)."""
    return is_psd(A.shifted(-as_scalar(lam)))


def min_eigenvalue_bracket(A: GramMatrix, tol=Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= lambda_min < hi`` and ``hi - lo <= tol``.

    ``lo`` is certified by an exact PSD test of ``A - lo*I``.
    """
    tol = as_scalar(tol)
    lo = Fraction(0)
    hi = min(A.rows[i][i] for i in range(A.n)) + 1
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if min_eigenvalue_at_least(A, mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def log_of(q) -> float:
    """Natural log of a nonnegative exact rational; ``-inf`` at zero."""
    q = as_scalar(q)
    if q < 0:
        raise ValueError("log of a negative number")
    if q == 0:
        return -math.inf
    return math.log(q.numerator) - math.log(q.denominator)
