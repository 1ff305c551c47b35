"""Hardness gadgets: the half-overlap block family, the game-to-vector
reductions (plain and with an identity tail), completeness witnesses and
the repetition/unsatisfied-edge diagnostics used by the soundness side.

Reduced vectors are stored as integer coordinates plus one global
``scale_sq`` (see :class:`~dpphard.linalg.VectorSet`), so every inner
product and squared volume is an exact rational even though the vectors
themselves carry factors like ``1/sqrt(delta)``.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

import mpmath
import numpy as np

from .config import check_guard, guards
from .games import Labeling, ProjectionGame, regular_degree, unsatisfied_edges
from .linalg import GramMatrix, Subset, VectorSet, as_scalar, check_subset, gram_from_vectors


@dataclasses.dataclass(frozen=True)
class BlockFamily:
    """``2^m`` unit vectors of dimension ``2^(m+1)`` with pairwise inner product 1/2.

    Block ``i`` is ``2^(-m/2)`` times the 0/1 vector ``indicators[i]``.  The
    complement of a block is ``2^(-m/2) * ones - block``.
    """

    m: int
    indicators: tuple

    @property
    def scale_sq(self) -> Fraction:
        return Fraction(1, 2**self.m)

    @property
    def dim(self) -> int:
        return 2 ** (self.m + 1)

    def __len__(self) -> int:
        return len(self.indicators)

    def squared_entries(self, i: int, complement: bool = False) -> tuple:
        ind = self.indicators[i]
        return tuple(self.scale_sq if (t != complement) else Fraction(0) for t in ind)

    def float_block(self, i: int, complement: bool = False) -> np.ndarray:
        ind = np.array(self.indicators[i], dtype=float)
        if complement:
            ind = 1.0 - ind
        return ind * 2.0 ** (-self.m / 2)

    def inner(self, i: int, j: int, complement_i: bool = False, complement_j: bool = False) -> Fraction:
        a, b = self.indicators[i], self.indicators[j]
        hits = sum(1 for s, t in zip(a, b) if (s != complement_i) and (t != complement_j))
        return hits * self.scale_sq


@lru_cache(maxsize=None)
def _family(m: int) -> BlockFamily:
    # Coordinates are u in GF(2)^(m+1); block i is the indicator of the
    # hyperplane <c_i, u> = 0 with c_i = i + 1 (distinct and nonzero).
    # Two distinct hyperplanes through 0 meet in 2^(m-1) points.
    dim = 2 ** (m + 1)
    rows = []
    for i in range(2**m):
        c = i + 1
        rows.append(tuple(1 - (bin(c & u).count("1") & 1) for u in range(dim)))
    return BlockFamily(m, tuple(rows))


def verify_block_family(fam: BlockFamily) -> list[str]:
    """Exhaustively check norms, pairwise and complement inner products."""
    ind = np.array(fam.indicators, dtype=np.float64)
    size = 2**fam.m
    problems = []
    if ind.shape != (size, fam.dim):
        return [f"shape {ind.shape}, expected {(size, fam.dim)}"]
    if not np.all((ind == 0) | (ind == 1)):
        problems.append("entries outside {0, 2^(-m/2)}")
    gram = ind @ ind.T
    support = np.diag(gram).copy()
    comp = support[:, None] - gram  # |supp b_i minus supp b_j| = <b_i, complement b_j> * 2^m
    off = ~np.eye(size, dtype=bool)
    if not np.all(support == size):
        problems.append("some block is not unit norm")
    if size > 1 and not np.all(gram[off] * 2 == size):
        problems.append("some pair of blocks does not have inner product 1/2")
    if size > 1 and not np.all(comp[off] * 2 == size):
        problems.append("some block/complement pair does not have inner product 1/2")
    if not np.all(np.diag(comp) == 0):
        problems.append("some block is not orthogonal to its own complement")
    return problems


def build_block_family(m: int, guard: int | None = None, verify: bool = True) -> BlockFamily:
    if m < 0:
        raise ValueError("m must be nonnegative")
    check_guard(m, guards().block_m if guard is None else guard, "block family")
    fam = _family(m)
    if verify:
        problems = verify_block_family(fam)
        if problems:
            raise AssertionError(f"block family m={m} is broken: {problems}")
    return fam


def complement_block(b: Sequence[int], m: int) -> tuple:
    """Complement of a family member (or of a complement), given as a 0/1 indicator."""
    b = tuple(int(t) for t in b)
    members = set(_family(m).indicators)
    flipped = tuple(1 - t for t in b)
    if b not in members and flipped not in members:
        raise ValueError(f"vector is not a member of the m={m} block family or a complement of one")
    return flipped


def default_block_parameter(sigma: int, augmented: bool = False) -> int:
    """Smallest ``m`` with ``2^m >= sigma``, rounded up to even for ``augmented``.

    Even ``m`` keeps ``2^(m/2)`` an integer, so the identity-tail entry of the
    augmented reduction is a rational multiple of the block entries.
    """
    m = max(0, (sigma - 1).bit_length())
    return m + (m % 2) if augmented else m


@dataclasses.dataclass(frozen=True)
class ReducedInstance:
    """Vectors produced from a regular projection game, one per (vertex, label).

    Index layout: left vertex ``x`` with label ``i`` is ``x*sigma + i``;
    right vertex ``y`` with label ``j`` is ``(x_count + y)*sigma + j``.
    """

    vectors: VectorSet
    delta: int
    x_count: int
    y_count: int
    sigma: int
    m: int
    augmented: bool

    @property
    def N(self) -> int:
        return len(self.vectors)

    @property
    def K(self) -> int:
        return self.x_count + self.y_count

    def index(self, side: str, vertex: int, label: int) -> int:
        if not 0 <= label < self.sigma:
            raise IndexError(f"label {label} out of range")
        if side == "X" and 0 <= vertex < self.x_count:
            return vertex * self.sigma + label
        if side == "Y" and 0 <= vertex < self.y_count:
            return (self.x_count + vertex) * self.sigma + label
        raise IndexError(f"no vertex {side}{vertex}")

    def key(self, idx: int) -> tuple[str, int, int]:
        v, label = divmod(idx, self.sigma)
        if v < self.x_count:
            return ("X", v, label)
        return ("Y", v - self.x_count, label)

    @cached_property
    def index_of(self) -> dict:
        return {self.key(i): i for i in range(self.N)}

    @cached_property
    def gram(self) -> GramMatrix:
        return gram_from_vectors(self.vectors)


def reduce_game(G: ProjectionGame, augmented: bool = False, m: int | None = None) -> ReducedInstance:
    """Build one unit vector per (vertex, label) from a regular game.

    Each vector has one block per edge.  On an edge incident to left vertex
    ``x`` the block of ``v[x, i]`` is the complement of ``b[pi_e(i)]``; on an
    edge incident to right vertex ``y`` the block of ``v[y, j]`` is
    ``b[j]``; all blocks are scaled by ``1/sqrt(delta)``.  With
    ``augmented`` the scale is ``1/sqrt(delta + 1)`` and each vector gets one
    extra private coordinate equal to that scale.
    """
    delta = regular_degree(G)
    if delta is None:
        raise ValueError("reduction needs a game whose vertices all have the same degree")
    if m is None:
        m = default_block_parameter(G.sigma, augmented)
    if 2**m < G.sigma:
        raise ValueError(f"block family m={m} has fewer than sigma={G.sigma} blocks")
    if augmented and m % 2:
        raise ValueError("augmented reduction needs an even block parameter m")
    fam = build_block_family(m)
    ind = np.array(fam.indicators, dtype=np.int64)
    D = fam.dim
    N = (G.x_count + G.y_count) * G.sigma
    dim = G.edge_count * D + (N if augmented else 0)
    coords = np.zeros((N, dim), dtype=np.int64)
    s = G.sigma
    for e, ((x, y), table) in enumerate(zip(G.edges, G.tables)):
        block = slice(e * D, (e + 1) * D)
        for i in range(s):
            coords[x * s + i, block] = 1 - ind[table[i]]
            coords[(G.x_count + y) * s + i, block] = ind[i]
    if augmented:
        tail = 2 ** (m // 2)
        base = G.edge_count * D
        coords[np.arange(N), base + np.arange(N)] = tail
        scale_sq = Fraction(1, (delta + 1) * 2**m)
    else:
        scale_sq = Fraction(1, delta * 2**m)
    vs = VectorSet(tuple(map(tuple, coords.tolist())), dim, scale_sq)
    return ReducedInstance(vs, delta, G.x_count, G.y_count, G.sigma, m, augmented)


def _check_matches(G: ProjectionGame, R: ReducedInstance) -> None:
    if (G.x_count, G.y_count, G.sigma) != (R.x_count, R.y_count, R.sigma):
        raise ValueError("reduced instance was not built from this game")


def orthonormal_witness(G: ProjectionGame, L: Labeling, R: ReducedInstance) -> Subset:
    """Indices of ``v[z, L(z)]`` for every vertex; orthonormal when ``L`` satisfies ``G``."""
    _check_matches(G, R)
    bad = unsatisfied_edges(G, L)
    if bad:
        e = bad[0]
        raise ValueError(f"labeling leaves edge {e} = {G.edges[e]} unsatisfied ({len(bad)} in total)")
    S = [R.index("X", x, L.x_labels[x]) for x in range(G.x_count)]
    S += [R.index("Y", y, L.y_labels[y]) for y in range(G.y_count)]
    return tuple(sorted(S))


class RepCounts(NamedTuple):
    rep_x: int
    rep_y: int
    x_vertices: int
    y_vertices: int


def split_sides(R: ReducedInstance, S: Iterable[int]) -> tuple[Subset, Subset]:
    S = check_subset(S, R.N)
    cut = R.x_count * R.sigma
    return tuple(i for i in S if i < cut), tuple(i for i in S if i >= cut)


def rep_counts(R: ReducedInstance, S: Iterable[int]) -> RepCounts:
    """How many selected vectors repeat an already-used vertex, per side."""
    sx, sy = split_sides(R, S)
    xs = {R.key(i)[1] for i in sx}
    ys = {R.key(i)[1] for i in sy}
    return RepCounts(len(sx) - len(xs), len(sy) - len(ys), len(xs), len(ys))


def unsatisfied_incident_count(G: ProjectionGame, L: Labeling, x: int, ys: Iterable[int]) -> int:
    if not 0 <= x < G.x_count:
        raise IndexError(f"no left vertex {x}")
    L.check(G)
    ys = set(ys)
    return sum(
        1
        for (u, y), table in zip(G.edges, G.tables)
        if u == x and y in ys and table[L.x_labels[x]] != L.y_labels[y]
    )


def soundness_labeling(R: ReducedInstance, S: Iterable[int]) -> Labeling:
    """Label each vertex touched by ``S`` with its first selected label; others get 0."""
    xl = [None] * R.x_count
    yl = [None] * R.y_count
    for i in check_subset(S, R.N):
        side, v, label = R.key(i)
        target = xl if side == "X" else yl
        if target[v] is None:
            target[v] = label
    return Labeling([0 if t is None else t for t in xl], [0 if t is None else t for t in yl])


def scale_vector_set(V: VectorSet, c=None, *, c_sq=None) -> VectorSet:
    """Multiply every vector by ``c > 0``; pass ``c_sq`` for irrational ``c``."""
    if (c is None) == (c_sq is None):
        raise ValueError("give exactly one of c or c_sq")
    if c is not None:
        c = as_scalar(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        c_sq = c * c
    c_sq = as_scalar(c_sq)
    if c_sq <= 0:
        raise ValueError("scale must be positive")
    return VectorSet(V.vectors, V.dim, V.scale_sq * c_sq)


def same_vertex_distance_sq_bound(delta: int, augmented: bool) -> Fraction:
    """Upper bound on the squared distance from ``v[z, i]`` to ``v[z, i']``, ``i != i'``.

    Two labels of one vertex have inner product at least 1/2 (plain) or
    ``delta / (2(delta + 1))`` (augmented).
    """
    if not augmented:
        return Fraction(3, 4)
    c = Fraction(delta, 2 * (delta + 1))
    return 1 - c * c


def rep_volume_bound_sq(rep: int, augmented: bool) -> Fraction:
    """Stated squared-volume bound for one side: ``(3/4)^rep`` or ``(3.01/4)^rep``.

    The augmented constant only dominates the exact per-repeat factor when
    ``delta >= 199``; see :func:`same_vertex_distance_sq_bound`.
    """
    return (Fraction(301, 400) if augmented else Fraction(3, 4)) ** rep


def max_rep_for_volume(vol_sq: Fraction, base_sq: Fraction = Fraction(3, 4)) -> float:
    """Largest repetition count compatible with ``vol_sq <= base_sq^rep``."""
    if vol_sq <= 0:
        return math.inf
    return math.log(vol_sq) / math.log(base_sq)


@dataclasses.dataclass(frozen=True)
class HardnessConstants:
    """Constants of the exponential gap, kept as base-10 logarithms.

    None of these fit in a float (``beta`` is ``10^(-10^13)``); the checks
    compare logarithms computed with mpmath at 50 significant digits.
    """

    alpha: Fraction = Fraction(2, 10**12)
    label_cover_gap: Fraction = Fraction(1, 206401)
    log10_beta_circ: str = "-10**12.4"
    log10_beta: str = "-10**13"

    @property
    def ell(self) -> int:
        return math.ceil(4 / self.alpha)

    def _mp(self, expr: str):
        base, exp = expr.lstrip("-").split("**")
        return -(mpmath.mpf(base) ** mpmath.mpf(exp))

    def logs(self) -> dict:
        with mpmath.workdps(50):
            lb0 = self._mp(self.log10_beta_circ)
            l7 = self.ell * mpmath.log10(7)
            return {
                "beta_circ": lb0,
                "beta": self._mp(self.log10_beta),
                "lambda_c": mpmath.log10(2) + lb0 - l7,
                "lambda_s": mpmath.log10(mpmath.mpf(8) / 5) + lb0 - l7,
                "lambda_gap": mpmath.log10(mpmath.mpf(2) / 5) + lb0 - l7,
            }

    def checks(self) -> dict[str, bool]:
        with mpmath.workdps(50):
            lg = self.logs()
            a = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
            ell = self.ell
            eps = mpmath.mpf(self.label_cover_gap.numerator) / self.label_cover_gap.denominator
            per_round = mpmath.log(1 - eps**2 / 16, 2)
            tail = 2 ** (-a * ell + 1)
            l15 = ell * mpmath.log10(15)
            rhs_plain = mpmath.log10(1 - 5 * tail) - (l15 + mpmath.log10(64 * mpmath.log(2)))
            rhs_aug = mpmath.log10(1 - tail) - (l15 + mpmath.log10(32 * mpmath.log(2)))
            return {
                "ell = ceil(4/alpha)": ell == 2 * 10**12,
                "repetition beats 2^(-alpha*ell)": per_round < -a,
                "lambda_c > lambda_s": lg["lambda_c"] > lg["lambda_s"],
                "lambda_c / lambda_s = 5/4": abs(lg["lambda_c"] - lg["lambda_s"] - mpmath.log10(mpmath.mpf(5) / 4)) < mpmath.mpf(10) ** -30,
                "beta < lambda_c - lambda_s": lg["beta"] < lg["lambda_gap"],
                "lambda_c - lambda_s > 10^(-10^12.7)": lg["lambda_gap"] > -(mpmath.mpf(10) ** mpmath.mpf("12.7")),
                # the additive 160 and 40 are negligible against 15^ell
                "beta_circ small enough (plain soundness)": lg["beta_circ"] < rhs_plain,
                "beta_circ small enough (augmented soundness)": lg["beta_circ"] < rhs_aug,
            }
