"""Quick invariant suites, one per module, runnable from the CLI.

Each check returns ``(name, passed, detail)``; suites are small enough to
finish in a few seconds each.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

from . import edpp, gadgets, games, generators, linalg, satgame, solvers

Check = tuple[str, bool, str]


def _run(name: str, fn: Callable[[], tuple[bool, str] | bool]) -> Check:
    try:
        out = fn()
    except Exception as exc:  # a crash is a failed invariant, not a crashed report
        return name, False, f"{type(exc).__name__}: {exc}"
    ok, detail = out if isinstance(out, tuple) else (out, "")
    return name, bool(ok), detail


def suite_linalg(seed: int = 0) -> list[Check]:
    rng = generators.rng_of(seed)

    def volume_is_minor():
        for _ in range(20):
            V = generators.random_vectors(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)))
            minors = linalg.principal_minors(linalg.gram_from_vectors(V))
            for S in linalg.iter_subsets(len(V)):
                if linalg.volume_squared(V, S) != minors[S]:
                    return False, f"mismatch at {S}"
        return True, "20 sets, all subsets"

    def hadamard():
        V = generators.random_vectors(rng, 5, 4)
        return all(
            linalg.volume_squared(V, S) <= math.prod((linalg.norm_sq(V[i]) for i in S), start=Fraction(1))
            for S in linalg.iter_subsets(5)
        )

    def residual_orthogonal():
        V = generators.random_vectors(rng, 4, 6)
        Q = V.select((0, 1, 2))
        r = [a - b for a, b in zip(V[3], linalg.project_onto_span(V[3], Q))]
        return all(linalg.inner(r, q) == 0 for q in Q.vectors)

    def psd_certificate():
        try:
            linalg.GramMatrix(((1, 2), (2, 1)))
        except ValueError:
            return True
        return False, "indefinite matrix accepted"

    return [
        _run("volume_squared == principal_minor", volume_is_minor),
        _run("Hadamard inequality", hadamard),
        _run("residual orthogonal to span", residual_orthogonal),
        _run("PSD certificate rejects [[1,2],[2,1]]", psd_certificate),
        _run("empty determinant is 1", lambda: linalg.determinant(()) == 1),
    ]


def suite_games(seed: int = 0) -> list[Check]:
    rng = generators.rng_of(seed)

    def repetition_bound():
        for _ in range(5):
            G = generators.random_regular_game(rng, 2, 2, 2, satisfiable=False)[0]
            v = games.value_exact(G)
            if v == 1:
                continue
            for ell in (1, 2):
                if games.value_exact(games.parallel_repetition(G, ell)) > games.repetition_value_bound(1 - v, ell):
                    return False, f"ell={ell}"
        return True

    def perfect_stays_perfect():
        G, _ = generators.random_regular_game(rng, 2, 2, 2)
        return games.value_exact(games.parallel_repetition(G, 2)) == 1

    def product_supermultiplicative():
        G1 = generators.random_regular_game(rng, 2, 1, 2, satisfiable=False)[0]
        G2 = generators.random_regular_game(rng, 2, 2, 2, satisfiable=False)[0]
        return games.value_exact(games.product(G1, G2)) >= games.value_exact(G1) * games.value_exact(G2)

    return [
        _run("repetition value bound", repetition_bound),
        _run("value 1 survives repetition", perfect_stays_perfect),
        _run("product value >= product of values", product_supermultiplicative),
        _run("toy special game is special", lambda: games.is_special(generators.toy_special_game(seed))[0]),
    ]


def suite_gadgets(seed: int = 0) -> list[Check]:
    rng = generators.rng_of(seed)

    def family():
        bad = {m: gadgets.verify_block_family(gadgets.build_block_family(m, verify=False)) for m in range(1, 7)}
        bad = {m: p for m, p in bad.items() if p}
        return not bad, str(bad) if bad else "m = 1..6"

    def witness(augmented):
        def check():
            for _ in range(5):
                G, L = generators.random_regular_game(rng, 3, 2, 3)
                R = gadgets.reduce_game(G, augmented)
                S = gadgets.orthonormal_witness(G, L, R)
                if linalg.volume_squared(R.vectors, S) != 1:
                    return False
            return True

        return check

    def eigen_floor():
        G, _ = generators.random_regular_game(rng, 3, 3, 3)
        R = gadgets.reduce_game(G, augmented=True)
        return linalg.min_eigenvalue_at_least(R.gram, Fraction(1, R.delta + 1))

    def constants():
        c = gadgets.HardnessConstants().checks()
        bad = [k for k, v in c.items() if not v]
        return not bad, ", ".join(bad)

    return [
        _run("block family properties", family),
        _run("plain witness has volume 1", witness(False)),
        _run("augmented witness has volume 1", witness(True)),
        _run("augmented eigenvalue floor 1/(delta+1)", eigen_floor),
        _run("gap constants", constants),
    ]


def suite_solvers(seed: int = 0) -> list[Check]:
    rng = generators.rng_of(seed)

    def greedy_bound():
        for _ in range(10):
            n = int(rng.integers(1, 7))
            V = generators.random_vectors(rng, n, n + 1)
            A = linalg.gram_from_vectors(V)
            k = int(rng.integers(0, n + 1))
            g = solvers.greedy_volmax(V, k)
            if g.det * math.factorial(k) ** 2 < solvers.maxdet_k_exact(A, k).det:
                return False
        return True

    def examples():
        A = linalg.GramMatrix(((2, 1), (1, 2)))
        return (
            solvers.maxdet_exact(A).det == 3
            and solvers.gap_decide(A, 2, 3) is solvers.Gap.AT_LEAST_C
            and solvers.gap_decide(A, 1, 4) is solvers.Gap.BETWEEN
        )

    def submodular():
        A = generators.random_psd(rng, 6)
        f = lambda S: linalg.log_of(linalg.principal_minor(A, sorted(S)))
        for _ in range(50):
            S = {i for i in range(6) if rng.random() < 0.5}
            T = {i for i in range(6) if rng.random() < 0.5}
            if f(S) + f(T) < f(S | T) + f(S & T) - 1e-9:
                return False
        return True

    return [
        _run("greedy volmax within (k!)^2", greedy_bound),
        _run("small exact examples", examples),
        _run("log det submodular", submodular),
    ]


def suite_edpp(seed: int = 0) -> list[Check]:
    rng = generators.rng_of(seed)

    def closed_form():
        for _ in range(5):
            A = generators.random_psd(rng, int(rng.integers(1, 7)))
            if edpp.z_closed_form_p1(A) != edpp.z_exact(edpp.EdppModel(A, 1)):
                return False
        return True

    def sandwich():
        for _ in range(5):
            A = generators.random_psd(rng, int(rng.integers(1, 7)))
            md = solvers.maxdet_exact(A).det
            for p in (1, 2, 3):
                z = edpp.z_exact(edpp.EdppModel(A, p))
                if not md**p <= z <= 2**A.n * md**p:
                    return False
        return True

    def approx_interval():
        A = generators.random_psd(rng, 5)
        M = edpp.EdppModel(A, 2)
        a = edpp.z_approx(M)
        return a.lower <= edpp.z_exact(M) <= a.upper

    return [
        _run("closed form at p = 1", closed_form),
        _run("maxdet^p <= Z^p <= 2^n maxdet^p", sandwich),
        _run("approximation interval contains Z", approx_interval),
    ]


def suite_satgame(seed: int = 0) -> list[Check]:
    rng = generators.rng_of(seed)

    def chain():
        phi = generators.random_e3sat5(rng, 3)
        H = satgame.specialize_game(satgame.e3sat5_to_game(phi))
        return games.is_special(H)[0] and games.value_exact(H) == 1

    def preserve():
        for _ in range(3):
            G = generators.random_biregular_game(rng, 2, 3, 2, 2)
            if games.value_exact(satgame.specialize_game(G)) != games.value_exact(G):
                return False
        return True

    def contradiction():
        return satgame.max3sat_exact(satgame.CnfFormula(1, ((1,), (-1,)))) == Fraction(1, 2)

    return [
        _run("satisfiable E3SAT(5) -> special game of value 1", chain),
        _run("specialization preserves value", preserve),
        _run("max3sat of x and not x", contradiction),
    ]


SUITES = {
    "linalg": suite_linalg,
    "games": suite_games,
    "gadgets": suite_gadgets,
    "solvers": suite_solvers,
    "edpp": suite_edpp,
    "satgame": suite_satgame,
}


def run_suite(name: str, seed: int = 0) -> dict[str, list[Check]]:
    if name == "all":
        return {k: fn(seed) for k, fn in SUITES.items()}
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return {name: SUITES[name](seed)}
