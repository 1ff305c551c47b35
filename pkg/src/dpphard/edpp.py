"""Exponentiated DPPs: distributions with mass proportional to ``det(A_S)^p``.

Integer ``p`` is handled in exact rationals.  Any other positive rational
``p`` makes ``det^p`` irrational; those values are computed with mpmath at
256-bit precision and carry an explicit relative error bound.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import mpmath
import numpy as np

from .config import check_guard, guards
from .linalg import GramMatrix, Subset, as_scalar, check_subset, determinant, iter_subsets, principal_minors
from .solvers import EXACT, DetMaxApproximator, Gap

PRECISION_BITS = 256


@dataclasses.dataclass(frozen=True)
class EdppModel:
    A: GramMatrix
    p: Fraction

    def __post_init__(self):
        p = as_scalar(self.p)
        if p <= 0:
            raise ValueError("exponent p must be positive")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def exact(self) -> bool:
        return self.p.denominator == 1


def _power(d: Fraction, p: Fraction):
    """``d^p``: a Fraction for integer ``p``, else an mpf at the working precision."""
    if p.denominator == 1:
        return d ** p.numerator
    if d == 0:
        return mpmath.mpf(0)
    return mpmath.power(mpmath.mpf(d.numerator) / d.denominator, mpmath.mpf(p.numerator) / p.denominator)


def _minors(M: EdppModel, guard: int | None):
    check_guard(M.n, guards().edpp_order if guard is None else guard, "E-DPP normalizer")
    return principal_minors(M.A)


def z_exact(M: EdppModel, guard: int | None = None):
    """``sum_S det(A_S)^p`` over all ``2^n`` subsets."""
    minors = _minors(M, guard)
    if M.exact:
        return sum((d ** M.p.numerator for d in minors.values()), Fraction(0))
    with mpmath.workprec(PRECISION_BITS):
        return mpmath.fsum(_power(d, M.p) for d in minors.values())


def z_error_bound(M: EdppModel) -> float:
    """Relative error bound on :func:`z_exact` (0 when exact).

    Each power is correct to a few ulps and the sum has nonnegative terms,
    so ``2^n`` terms times a generous 8 ulps each bounds the total.
    """
    if M.exact:
        return 0.0
    return 8.0 * 2.0 ** M.n * 2.0 ** (-PRECISION_BITS)


def z_closed_form_p1(A: GramMatrix) -> Fraction:
    """``sum_S det(A_S) = det(A + I)``."""
    return determinant(A.shifted(1))


@dataclasses.dataclass(frozen=True)
class ZApprox:
    estimate: object
    lower: object
    upper: object
    rho: object
    subset: Subset


def z_approx(M: EdppModel, approximator: DetMaxApproximator = EXACT) -> ZApprox:
    """Estimate ``Z^p`` from one approximate DetMax solution.

    With ``det(A_S) >= maxdet / gamma`` and ``maxdet^p <= Z^p <= 2^n maxdet^p``,
    ``Z^p`` lies in ``[det^p, rho * det^p]`` for ``rho = 2^n gamma^p``; the
    estimate is the upper end, which is a ``rho``-approximation.
    """
    res = approximator.solve(M.A)
    gamma = as_scalar(approximator.factor(M.n))
    if M.exact:
        rho = 2**M.n * gamma ** M.p.numerator
        low = res.det ** M.p.numerator
    else:
        with mpmath.workprec(PRECISION_BITS):
            rho = 2**M.n * _power(gamma, M.p)
            low = _power(res.det, M.p)
    return ZApprox(rho * low, low, rho * low, rho, res.subset)


@dataclasses.dataclass(frozen=True)
class DistributionTable:
    """Masses over all subsets of ``[n]`` in cardinality-then-lexicographic order."""

    n: int
    subsets: tuple
    masses: tuple
    dets: tuple | None = None
    z: object = None

    @property
    def exact(self) -> bool:
        return all(isinstance(m, Fraction) for m in self.masses)

    def mass(self, S) -> object:
        return self.as_dict()[check_subset(S, self.n)]

    def as_dict(self) -> dict:
        return dict(zip(self.subsets, self.masses))

    def cdf(self) -> np.ndarray:
        c = np.cumsum([float(m) for m in self.masses])
        return c / c[-1]


def build_distribution(M: EdppModel, guard: int | None = None) -> DistributionTable:
    minors = _minors(M, guard)
    subsets = tuple(iter_subsets(M.n))
    dets = tuple(minors[S] for S in subsets)
    if M.exact:
        w = [d ** M.p.numerator for d in dets]
        z = sum(w, Fraction(0))
        masses = tuple(x / z for x in w)
    else:
        with mpmath.workprec(PRECISION_BITS):
            w = [_power(d, M.p) for d in dets]
            z = mpmath.fsum(w)
            masses = tuple(x / z for x in w)
    return DistributionTable(M.n, subsets, masses, dets, z)


def sample_exact(T: DistributionTable, seed: int, size: int | None = None):
    """Inverse-CDF sampling over the table order, deterministic in ``seed``.

    The CDF is rounded to doubles, so each subset's probability is off by
    at most about ``2^-52``.
    """
    rng = np.random.default_rng(seed)
    cdf = T.cdf()
    u = rng.random(1 if size is None else size)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
    out = [T.subsets[i] for i in idx]
    return out[0] if size is None else out


def empirical_table(samples, n: int) -> DistributionTable:
    subsets = tuple(iter_subsets(n))
    counts = dict.fromkeys(subsets, 0)
    for S in samples:
        counts[check_subset(S, n)] += 1
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no samples")
    return DistributionTable(n, subsets, tuple(Fraction(counts[S], total) for S in subsets))


def tv_distance(T1: DistributionTable, T2: DistributionTable):
    """Total variation distance; exact when both tables are exact."""
    if T1.n != T2.n:
        raise ValueError(f"ground sets differ: n = {T1.n} vs {T2.n}")
    d1, d2 = T1.as_dict(), T2.as_dict()
    if T1.exact and T2.exact:
        return sum((abs(d1[S] - d2[S]) for S in d1), Fraction(0)) / 2
    return 0.5 * sum(abs(float(d1[S]) - float(d2[S])) for S in d1)


def tv_noise_bound(T: DistributionTable, draws: int, sigmas: float = 3.0) -> float:
    """Rough ``sigmas``-level bound on the TV distance of an honest empirical table.

    Sums per-cell multinomial standard deviations ``sqrt(p(1-p)/draws)``.
    """
    return 0.5 * sigmas * sum(math.sqrt(float(m) * (1 - float(m)) / draws) for m in T.masses)


def certificate_mass(T: DistributionTable, s) -> object:
    """Probability that a sample ``S`` has ``det(A_S) > s``."""
    if T.dets is None:
        raise ValueError("table has no determinants attached")
    s = as_scalar(s)
    return sum((m for m, d in zip(T.masses, T.dets) if d > s), Fraction(0) if T.exact else 0)


def max_gap_rho(n: int, s, c, p) -> Fraction:
    """Largest approximation factor that still separates ``maxdet >= c`` from ``maxdet < s``.

    Yes instances have ``Z >= c^p``; no instances have ``Z < 2^n s^p``.  A
    ``rho``-approximation separates them whenever ``rho * 2^n s^p <= c^p``.
    """
    s, c, p = as_scalar(s), as_scalar(c), as_scalar(p)
    if p.denominator != 1:
        raise ValueError("exact gap factor needs integer p")
    return (c / s) ** p.numerator / 2**n


def gap_decide_from_z(estimate, c, p) -> Gap:
    """Decide the gap problem from an overestimate ``Z <= estimate <= rho Z``.

    Valid whenever ``rho <= max_gap_rho(n, s, c, p)``.
    """
    c, p = as_scalar(c), as_scalar(p)
    if p.denominator != 1:
        raise ValueError("exact gap decision needs integer p")
    return Gap.AT_LEAST_C if estimate >= c ** p.numerator else Gap.BELOW_S


def rp_success_lower_bound(q, n: int) -> float:
    """``2/3 - 1/(1 + 2^((q-1)n))``: chance a 1/3-close sampler finds a certificate."""
    q = float(q)
    return 2 / 3 - 1 / (1 + 2 ** ((q - 1) * n))
