"""Exact and heuristic determinant maximization.

All exact routines enumerate subsets and break ties by smallest
cardinality, then lexicographic order of the sorted index tuple.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
import math
from fractions import Fraction
from typing import Callable

from gmpy2 import mpq

from .config import check_guard, guards
from .linalg import (
    GramMatrix,
    Subset,
    VectorSet,
    _frac,
    as_scalar,
    log_of,
    min_eigenvalue_at_least,
    principal_minor,
    principal_minors,
)


@dataclasses.dataclass(frozen=True)
class SolveResult:
    subset: Subset
    det: Fraction
    method: str
    certified_exact: bool
    monotone: bool | None = None

    @property
    def log_det(self) -> float:
        return log_of(self.det)

    def verify(self, A: GramMatrix) -> bool:
        """Recompute the objective independently of the solver."""
        return principal_minor(A, self.subset) == self.det


def _tie_key(S: Subset):
    return (len(S), S)


def maxdet_exact(A: GramMatrix, guard: int | None = None) -> SolveResult:
    """Exact ``max_S det(A_S)`` over all subsets, the empty set (det 1) included."""
    check_guard(A.n, guards().detmax_order if guard is None else guard, "DetMax")
    best_S, best = (), Fraction(1)
    for S, d in principal_minors(A).items():
        if d > best or (d == best and _tie_key(S) < _tie_key(best_S)):
            best_S, best = S, d
    return SolveResult(best_S, best, "exact", True)


def maxdet_k_exact(A: GramMatrix, k: int, guard: int | None = None) -> SolveResult:
    """Exact ``max det(A_S)`` over subsets of size exactly ``k``."""
    if not 0 <= k <= A.n:
        raise ValueError(f"k = {k} outside 0..{A.n}")
    check_guard(math.comb(A.n, k), guards().detmax_k_subsets if guard is None else guard, "k-DetMax")
    best_S, best = None, None
    for S in itertools.combinations(range(A.n), k):
        d = principal_minor(A, S)
        if best is None or d > best:
            best_S, best = S, d
    return SolveResult(best_S, best, f"exact_k{k}", True)


def maxdet_all_sizes(A: GramMatrix, guard: int | None = None) -> list[Fraction]:
    """``maxdet_k(A)`` for ``k = 0..n`` from a single sweep."""
    check_guard(A.n, guards().detmax_order if guard is None else guard, "DetMax")
    best = [Fraction(0)] * (A.n + 1)
    for S, d in principal_minors(A).items():
        if d > best[len(S)]:
            best[len(S)] = d
    best[0] = Fraction(1)
    return best


def greedy_volmax(V: VectorSet, k: int) -> SolveResult:
    """Pick ``k`` vectors, each time the one farthest from the span so far.

    Distances are compared exactly as squared residual norms; ties go to
    the smallest index.  The product of the chosen squared distances is the
    squared volume, i.e. the determinant of the selected Gram block.
    """
    n = len(V)
    if not 0 <= k <= n:
        raise ValueError(f"k = {k} outside 0..{n}")
    resid = [list(r) for r in V._mpq_rows]
    dist = [sum(x * x for x in r) for r in resid]
    chosen, vol = [], mpq(1)
    for _ in range(k):
        free = [j for j in range(n) if j not in chosen]
        p = max(free, key=lambda j: (dist[j], -j))
        b, bb = resid[p], dist[p]
        chosen.append(p)
        vol *= bb
        if bb == 0:
            continue
        for j in free:
            if j == p:
                continue
            c = sum(x * y for x, y in zip(resid[j], b)) / bb
            if c:
                resid[j] = [x - c * y for x, y in zip(resid[j], b)]
                dist[j] = sum(x * x for x in resid[j])
    det = _frac(vol) * V.scale_sq ** k
    return SolveResult(tuple(sorted(chosen)), det, "greedy_volmax", False)


def _schur_greedy(A: GramMatrix, steps: int):
    """Greedy by largest Schur-complement pivot; yields (index, pivot) pairs."""
    n = A.n
    C = [row[:] for row in A._mpq_rows]
    free = list(range(n))
    for _ in range(steps):
        p = max(free, key=lambda j: (C[j][j], -j))
        d = C[p][p]
        free.remove(p)
        yield p, d
        if d == 0:
            continue
        col = [C[i][p] for i in range(n)]
        for i in free:
            if col[i]:
                f = col[i] / d
                Ci = C[i]
                for j in free:
                    Ci[j] -= f * col[j]


def greedy_logdet(A: GramMatrix, k: int) -> SolveResult:
    """Standard greedy on the marginal gain of ``log det``.

    The gain of adding ``j`` to ``S`` is ``log`` of the Schur pivot
    ``A_jj - A_jS A_S^{-1} A_Sj``, so greedy picks the largest pivot.  The
    ``monotone`` flag records whether every eigenvalue is at least 1, the
    case where the (1 - 1/e) guarantee applies.
    """
    if not 0 <= k <= A.n:
        raise ValueError(f"k = {k} outside 0..{A.n}")
    chosen, det = [], mpq(1)
    for p, d in _schur_greedy(A, k):
        chosen.append(p)
        det *= d
    return SolveResult(
        tuple(sorted(chosen)), _frac(det), "greedy_logdet", False, monotone=min_eigenvalue_at_least(A, 1)
    )


def greedy_best_prefix(A: GramMatrix) -> SolveResult:
    """Run the pivot greedy to completion and keep the best prefix (empty included)."""
    best_S, best = (), mpq(1)
    chosen, det = [], mpq(1)
    for p, d in _schur_greedy(A, A.n):
        if d == 0:
            break
        chosen.append(p)
        det *= d
        if det > best:
            best_S, best = tuple(sorted(chosen)), det
    return SolveResult(best_S, _frac(best), "greedy_prefix", False)


# Stand-in for log det of a singular block: finite, so marginal differences
# stay defined, and far below any log det this package can produce.
SINGULAR_LOG = -1e6


def _clamped_log(A: GramMatrix, S) -> float:
    d = principal_minor(A, S)
    return log_of(d) if d > 0 else SINGULAR_LOG


def double_greedy_logdet(A: GramMatrix) -> SolveResult:
    """Deterministic double greedy for unconstrained ``log det`` maximization.

    Keeps ``X`` (grows from empty) and ``Y`` (shrinks from everything); at
    index ``i`` adds ``i`` to ``X`` if ``f(X+i) - f(X) >= f(Y-i) - f(Y)`` and
    otherwise drops it from ``Y``.  Singular blocks are clamped to
    ``SINGULAR_LOG``.
    """
    X, Y = [], list(range(A.n))
    fX, fY = 0.0, _clamped_log(A, Y)
    for i in range(A.n):
        Xi = X + [i]
        Yi = [j for j in Y if j != i]
        fXi, fYi = _clamped_log(A, Xi), _clamped_log(A, Yi)
        if fXi - fX >= fYi - fY:
            X, fX = Xi, fXi
        else:
            Y, fY = Yi, fYi
    S = tuple(X)
    return SolveResult(S, principal_minor(A, S), "double_greedy", False)


class Gap(enum.Enum):
    AT_LEAST_C = "at_least_c"
    BELOW_S = "below_s"
    BETWEEN = "between"


def classify(value, s, c) -> Gap:
    s, c = as_scalar(s), as_scalar(c)
    if not s < c:
        raise ValueError("thresholds need s < c")
    if value >= c:
        return Gap.AT_LEAST_C
    if value < s:
        return Gap.BELOW_S
    return Gap.BETWEEN


def gap_decide(A: GramMatrix, s, c, guard: int | None = None) -> Gap:
    """Place ``maxdet(A)`` relative to the thresholds ``s < c``."""
    s, c = as_scalar(s), as_scalar(c)
    if not s < c:
        raise ValueError("thresholds need s < c")
    return classify(maxdet_exact(A, guard).det, s, c)


@dataclasses.dataclass(frozen=True)
class DetMaxApproximator:
    """A DetMax routine plus its guarantee ``det(A_S) >= maxdet(A) / factor(n)``."""

    name: str
    solve: Callable[[GramMatrix], SolveResult]
    factor: Callable[[int], Fraction]


EXACT = DetMaxApproximator("exact", maxdet_exact, lambda n: Fraction(1))
# No published guarantee is known for the unconstrained best-prefix greedy;
# (n!)^2 is what the k-greedy bound gives at the optimal size.
GREEDY = DetMaxApproximator("greedy_prefix", greedy_best_prefix, lambda n: Fraction(math.factorial(n) ** 2))
