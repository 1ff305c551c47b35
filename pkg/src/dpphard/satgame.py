"""CNF formulas, brute-force Max-3SAT, and the clause/variable projection game.

Literals follow DIMACS: variable ``v`` (1-based) is ``v`` and its negation
is ``-v``.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np

from .config import check_guard, guards
from .games import ProjectionGame, biregular_degrees

GAME_SIGMA = 7


@dataclasses.dataclass(frozen=True)
class CnfFormula:
    var_count: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        if self.var_count < 1:
            raise ValueError("need at least one variable")
        for k, c in enumerate(clauses):
            if not c:
                raise ValueError(f"clause {k} is empty")
            if len(c) > 3:
                raise ValueError(f"clause {k} has more than 3 literals")
            if any(l == 0 or abs(l) > self.var_count for l in c):
                raise ValueError(f"clause {k} has a literal out of range")
        object.__setattr__(self, "clauses", clauses)


@dataclasses.dataclass(frozen=True)
class Assignment:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    def satisfies(self, clause) -> bool:
        return any(self.values[abs(l) - 1] == (l > 0) for l in clause)


def satisfied_clauses(phi: CnfFormula, a: Assignment) -> int:
    if len(a.values) != phi.var_count:
        raise ValueError("assignment length does not match the formula")
    return sum(a.satisfies(c) for c in phi.clauses)


def max3sat_exact(phi: CnfFormula, guard: int | None = None) -> Fraction:
    """Largest satisfiable fraction of clauses, by vectorized enumeration."""
    check_guard(2**phi.var_count, guards().sat_assignments if guard is None else guard, "Max-3SAT")
    best = 0
    chunk = 1 << 16
    for start in range(0, 2**phi.var_count, chunk):
        idx = np.arange(start, min(start + chunk, 2**phi.var_count), dtype=np.int64)
        bits = (idx[:, None] >> np.arange(phi.var_count)[None, :]) & 1
        count = np.zeros(len(idx), dtype=np.int64)
        for c in phi.clauses:
            sat = np.zeros(len(idx), dtype=bool)
            for l in c:
                sat |= bits[:, abs(l) - 1] == (1 if l > 0 else 0)
            count += sat
        best = max(best, int(count.max()))
        if best == len(phi.clauses):
            break
    return Fraction(best, len(phi.clauses))


def validate_e3sat5(phi: CnfFormula) -> tuple[bool, list[str]]:
    """Exactly-3 literals on distinct variables per clause, each variable in 5 clauses."""
    problems = []
    n = phi.var_count
    if n % 3:
        problems.append(f"variable count {n} is not divisible by 3")
    if len(phi.clauses) * 3 != 5 * n:
        problems.append(f"{len(phi.clauses)} clauses, expected 5n/3 = {5 * n / 3:g}")
    for k, c in enumerate(phi.clauses):
        if len(c) != 3:
            problems.append(f"clause {k} has {len(c)} literals")
        elif len({abs(l) for l in c}) != 3:
            problems.append(f"clause {k} repeats a variable")
    occ = Counter(abs(l) for c in phi.clauses for l in c)
    bad = [v for v in range(1, n + 1) if occ[v] != 5]
    if bad:
        problems.append(f"variables not in exactly 5 clauses: {bad[:10]}")
    return not problems, problems


def clause_labels(clause) -> list[tuple[bool, ...]]:
    """The 7 satisfying assignments of a 3-literal clause, in binary order."""
    out = []
    for bits in itertools.product((False, True), repeat=len(clause)):
        if any(b == (l > 0) for b, l in zip(bits, clause)):
            out.append(bits)
    return out


def e3sat5_to_game(phi: CnfFormula) -> ProjectionGame:
    """Clause/variable game with alphabet 7.

    Left vertices are clauses (degree 3), labeled by one of their 7
    satisfying assignments; right vertices are variables (degree 5) whose
    labels 0/1 are truth values and 2..6 are padding no table ever
    produces.  The edge (clause, variable) projects a clause label to the
    value it gives that variable.
    """
    ok, problems = validate_e3sat5(phi)
    if not ok:
        raise ValueError("not an E3SAT(5) formula: " + "; ".join(problems))
    edges, tables = [], []
    for k, c in enumerate(phi.clauses):
        labels = clause_labels(c)
        for pos, l in enumerate(c):
            edges.append((k, abs(l) - 1))
            tables.append(tuple(int(bits[pos]) for bits in labels))
    return ProjectionGame(len(phi.clauses), phi.var_count, GAME_SIGMA, tuple(edges), tuple(tables))


def specialize_game(G: ProjectionGame) -> ProjectionGame:
    """Copy every vertex once per unit of its degree and join all copy pairs.

    For a game with left degree ``a`` and right degree ``b`` the result is
    ``ab``-regular with ``|E|`` vertices per side and ``ab|E|`` edges; tables
    are inherited.  Copy ``t`` of vertex ``v`` gets index ``v * copies + t``.
    """
    degs = biregular_degrees(G)
    if degs is None:
        raise ValueError("specialization needs a biregular game")
    a, b = degs
    edges, tables = [], []
    for (x, y), table in zip(G.edges, G.tables):
        for s in range(a):
            for t in range(b):
                edges.append((x * a + s, y * b + t))
                tables.append(table)
    return ProjectionGame(G.x_count * a, G.y_count * b, G.sigma, tuple(edges), tuple(tables))


def read_dimacs(text: str) -> CnfFormula:
    var_count, clauses, current = None, [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            var_count = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if var_count is None:
        raise ValueError("missing 'p cnf' line")
    return CnfFormula(var_count, tuple(clauses))


def write_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.var_count} {len(phi.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def load_dimacs(path) -> CnfFormula:
    return read_dimacs(Path(path).read_text())
