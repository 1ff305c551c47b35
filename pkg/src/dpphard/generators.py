"""Seeded random instances for tests, scripts and the CLI."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .games import Labeling, ProjectionGame
from .linalg import GramMatrix, VectorSet, determinant, gram_from_vectors
from .satgame import CnfFormula, e3sat5_to_game, specialize_game


def rng_of(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_vectors(seed, n: int, d: int, num: int = 5, den: int = 4) -> VectorSet:
    """``n`` vectors in dimension ``d`` with entries ``a/b``, ``|a| <= num``, ``1 <= b <= den``."""
    rng = rng_of(seed)
    a = rng.integers(-num, num + 1, size=(n, d))
    b = rng.integers(1, den + 1, size=(n, d))
    return VectorSet.from_rows([[Fraction(int(x), int(y)) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def random_psd(seed, n: int, rank: int | None = None, num: int = 3, den: int = 2) -> GramMatrix:
    """Gram matrix of ``n`` random rational vectors in dimension ``rank`` (default ``n + 2``)."""
    rng = rng_of(seed)
    return gram_from_vectors(random_vectors(rng, n, n + 2 if rank is None else rank, num, den))


def random_positive_definite(seed, n: int, num: int = 3, den: int = 2) -> GramMatrix:
    """Random PSD matrix guaranteed nonsingular (redrawn until det > 0)."""
    rng = rng_of(seed)
    while True:
        A = random_psd(rng, n, n + 2, num, den)
        if determinant(A.rows) > 0:
            return A


def random_regular_game(
    seed, k: int, delta: int, sigma: int, satisfiable: bool = True
) -> tuple[ProjectionGame, Labeling | None]:
    """``delta``-regular game on ``k + k`` vertices (a union of random perfect matchings).

    With ``satisfiable`` a random labeling is planted and every table agrees
    with it; otherwise tables are uniform and no labeling is returned.
    """
    rng = rng_of(seed)
    edges = []
    for _ in range(delta):
        perm = rng.permutation(k)
        edges += [(x, int(perm[x])) for x in range(k)]
    tables = [list(rng.integers(0, sigma, size=sigma)) for _ in edges]
    planted = None
    if satisfiable:
        planted = Labeling(rng.integers(0, sigma, size=k), rng.integers(0, sigma, size=k))
        for (x, y), t in zip(edges, tables):
            t[planted.x_labels[x]] = planted.y_labels[y]
    return ProjectionGame(k, k, sigma, tuple(edges), tuple(map(tuple, tables))), planted


def random_biregular_game(seed, x_count: int, left_deg: int, right_deg: int, sigma: int) -> ProjectionGame:
    """Random game with the given side degrees (configuration model, parallel edges allowed)."""
    if (x_count * left_deg) % right_deg:
        raise ValueError("x_count * left_deg must be divisible by right_deg")
    rng = rng_of(seed)
    y_count = x_count * left_deg // right_deg
    stubs = rng.permutation(np.repeat(np.arange(y_count), right_deg))
    edges = [(x, int(stubs[x * left_deg + t])) for x in range(x_count) for t in range(left_deg)]
    tables = [tuple(int(v) for v in rng.integers(0, sigma, size=sigma)) for _ in edges]
    return ProjectionGame(x_count, y_count, sigma, tuple(edges), tuple(tables))


def random_e3sat5(seed, n: int, planted: bool = True, max_tries: int = 10_000) -> CnfFormula:
    """Random formula with every variable in 5 clauses of 3 distinct variables.

    With ``planted`` a random assignment is fixed and every clause is made
    to agree with it on at least one literal, so the formula is satisfiable.
    """
    if n % 3 or n < 3:
        raise ValueError("n must be a positive multiple of 3")
    rng = rng_of(seed)
    for _ in range(max_tries):
        stubs = rng.permutation(np.repeat(np.arange(1, n + 1), 5)).reshape(-1, 3)
        if all(len(set(c)) == 3 for c in stubs):
            break
    else:
        raise RuntimeError("could not place clauses on distinct variables")
    signs = rng.choice([-1, 1], size=stubs.shape)
    clauses = stubs * signs
    if planted:
        truth = rng.integers(0, 2, size=n + 1).astype(bool)
        for c in clauses:
            if not any(truth[abs(l)] == (l > 0) for l in c):
                j = rng.integers(0, 3)
                c[j] = -c[j]
    return CnfFormula(n, tuple(tuple(int(l) for l in c) for c in clauses))


def toy_special_game(seed=0, n: int = 3) -> ProjectionGame:
    """Smallest special-shaped game: a specialized random satisfiable E3SAT(5) instance."""
    return specialize_game(e3sat5_to_game(random_e3sat5(seed, n)))
