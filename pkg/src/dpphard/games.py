"""Projection games: exact value, products and parallel repetition.

Vertices and labels are 0-based.  A product pairs indices row-major:
vertex ``(a, b)`` becomes ``a * count_2 + b`` and label ``(i1, i2)``
becomes ``i1 * sigma_2 + i2``.
"""

from __future__ import annotations

import dataclasses
from collections import Counter
from fractions import Fraction

import numpy as np

from .config import check_guard, guards


@dataclasses.dataclass(frozen=True)
class ProjectionGame:
    """Bipartite constraint graph with one lookup table per edge.

    ``tables[e][i]`` is the label the right endpoint of edge ``e`` must
    carry when the left endpoint carries ``i``.  Parallel edges are allowed
    and count with multiplicity.
    """

    x_count: int
    y_count: int
    sigma: int
    edges: tuple
    tables: tuple

    def __post_init__(self):
        edges = tuple((int(x), int(y)) for x, y in self.edges)
        tables = tuple(tuple(int(t) for t in table) for table in self.tables)
        if self.x_count < 1 or self.y_count < 1 or self.sigma < 1:
            raise ValueError("vertex counts and alphabet size must be positive")
        if not edges:
            raise ValueError("a game needs at least one edge")
        if len(tables) != len(edges):
            raise ValueError("one table per edge required")
        for e, ((x, y), table) in enumerate(zip(edges, tables)):
            if not (0 <= x < self.x_count and 0 <= y < self.y_count):
                raise ValueError(f"edge {e} = {(x, y)} has an endpoint out of range")
            if len(table) != self.sigma or any(not 0 <= t < self.sigma for t in table):
                raise ValueError(f"table of edge {e} is not a map [sigma] -> [sigma]")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "tables", tables)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def x_degrees(self) -> list[int]:
        c = Counter(x for x, _ in self.edges)
        return [c[x] for x in range(self.x_count)]

    def y_degrees(self) -> list[int]:
        c = Counter(y for _, y in self.edges)
        return [c[y] for y in range(self.y_count)]

    def incident(self, side: str, v: int) -> list[int]:
        k = 0 if side == "X" else 1
        return [e for e, edge in enumerate(self.edges) if edge[k] == v]


@dataclasses.dataclass(frozen=True)
class Labeling:
    x_labels: tuple
    y_labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "x_labels", tuple(int(i) for i in self.x_labels))
        object.__setattr__(self, "y_labels", tuple(int(i) for i in self.y_labels))

    def check(self, G: ProjectionGame) -> None:
        if len(self.x_labels) != G.x_count or len(self.y_labels) != G.y_count:
            raise ValueError("labeling does not match the game's vertex counts")
        for i in self.x_labels + self.y_labels:
            if not 0 <= i < G.sigma:
                raise ValueError(f"label {i} outside alphabet of size {G.sigma}")


def biregular_degrees(G: ProjectionGame) -> tuple[int, int] | None:
    """``(left degree, right degree)`` if every vertex on each side shares one degree."""
    dx, dy = set(G.x_degrees()), set(G.y_degrees())
    if len(dx) == 1 and len(dy) == 1:
        return dx.pop(), dy.pop()
    return None


def regular_degree(G: ProjectionGame) -> int | None:
    degs = biregular_degrees(G)
    if degs is None or degs[0] != degs[1]:
        return None
    return degs[0]


def satisfied_count(G: ProjectionGame, L: Labeling) -> int:
    L.check(G)
    return sum(
        1 for (x, y), table in zip(G.edges, G.tables) if table[L.x_labels[x]] == L.y_labels[y]
    )


def satisfied_fraction(G: ProjectionGame, L: Labeling) -> Fraction:
    return Fraction(satisfied_count(G, L), G.edge_count)


def unsatisfied_edges(G: ProjectionGame, L: Labeling) -> list[int]:
    L.check(G)
    return [
        e
        for e, ((x, y), table) in enumerate(zip(G.edges, G.tables))
        if table[L.x_labels[x]] != L.y_labels[y]
    ]


def _search_domains(G: ProjectionGame, side: str) -> list[list[int]]:
    """Labels worth trying per vertex when ``side`` is enumerated.

    Right side: only labels some incident table can produce (others satisfy
    nothing).  Left side: one representative per class of labels with the
    same projections on every incident edge.
    """
    doms = []
    if side == "Y":
        for y in range(G.y_count):
            image = sorted({G.tables[e][i] for e in G.incident("Y", y) for i in range(G.sigma)})
            doms.append(image or [0])
    else:
        for x in range(G.x_count):
            inc = G.incident("X", x)
            seen, reps = set(), []
            for i in range(G.sigma):
                key = tuple(G.tables[e][i] for e in inc)
                if key not in seen:
                    seen.add(key)
                    reps.append(i)
            doms.append(reps)
    return doms


def _product_size(doms) -> int:
    size = 1
    for d in doms:
        size *= len(d)
    return size


def solve_game(G: ProjectionGame, guard: int | None = None, chunk: int = 1 << 14):
    """Exact value and an optimal labeling.

    One side is enumerated (the one with the smaller pruned search space);
    each vertex on the other side then independently takes its best label.
    Ties resolve to the first labeling in mixed-radix order and the smallest
    label, so the result is deterministic.
    """
    guard = guards().game_labelings if guard is None else guard
    doms_y, doms_x = _search_domains(G, "Y"), _search_domains(G, "X")
    size_y, size_x = _product_size(doms_y), _product_size(doms_x)
    enum_side = "Y" if size_y <= size_x else "X"
    doms, total = (doms_y, size_y) if enum_side == "Y" else (doms_x, size_x)
    check_guard(total, guard, "game value")

    n_opt = G.x_count if enum_side == "Y" else G.y_count
    sigma = G.sigma
    # compat[e][a, b] = 1 iff edge e is satisfied with enumerated endpoint on
    # domain slot a and the optimised endpoint on label b.
    pairs, compat = [], []
    for (x, y), table in zip(G.edges, G.tables):
        if enum_side == "Y":
            dom = doms[y]
            c = np.array([[table[i] == a for i in range(sigma)] for a in dom], dtype=np.int32)
            pairs.append((y, x))
        else:
            dom = doms[x]
            c = np.array([[table[a] == j for j in range(sigma)] for a in dom], dtype=np.int32)
            pairs.append((x, y))
        compat.append(c)

    radices = np.array([len(d) for d in doms], dtype=np.int64)
    strides = np.ones(len(doms), dtype=np.int64)
    for t in range(len(doms) - 2, -1, -1):
        strides[t] = strides[t + 1] * radices[t + 1]

    best, best_idx, best_scores = -1, None, None
    m = G.edge_count
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // strides[None, :]) % radices[None, :]
        scores = np.zeros((len(idx), n_opt, sigma), dtype=np.int32)
        for (ev, ov), c in zip(pairs, compat):
            scores[:, ov, :] += c[digits[:, ev]]
        totals = scores.max(axis=2).sum(axis=1)
        k = int(np.argmax(totals))
        if totals[k] > best:
            best, best_idx, best_scores = int(totals[k]), int(idx[k]), scores[k]
            if best == m:
                break

    digits = [(best_idx // int(strides[t])) % int(radices[t]) for t in range(len(doms))]
    enum_labels = [doms[t][digits[t]] for t in range(len(doms))]
    opt_labels = [int(np.argmax(best_scores[v])) for v in range(n_opt)]
    if enum_side == "Y":
        labeling = Labeling(opt_labels, enum_labels)
    else:
        labeling = Labeling(enum_labels, opt_labels)
    return Fraction(best, m), labeling


def value_exact(G: ProjectionGame, guard: int | None = None) -> Fraction:
    return solve_game(G, guard)[0]


def product(G1: ProjectionGame, G2: ProjectionGame, max_entries: int | None = None) -> ProjectionGame:
    max_entries = guards().product_entries if max_entries is None else max_entries
    sigma = G1.sigma * G2.sigma
    check_guard(G1.edge_count * G2.edge_count * sigma, max_entries, "game product")
    s2 = G2.sigma
    edges, tables = [], []
    for (x1, y1), t1 in zip(G1.edges, G1.tables):
        for (x2, y2), t2 in zip(G2.edges, G2.tables):
            edges.append((x1 * G2.x_count + x2, y1 * G2.y_count + y2))
            tables.append(tuple(t1[i1] * s2 + t2[i2] for i1 in range(G1.sigma) for i2 in range(s2)))
    return ProjectionGame(G1.x_count * G2.x_count, G1.y_count * G2.y_count, sigma, tuple(edges), tuple(tables))


def parallel_repetition(G: ProjectionGame, ell: int, max_entries: int | None = None) -> ProjectionGame:
    if ell < 1:
        raise ValueError("repetition count must be positive")
    max_entries = guards().product_entries if max_entries is None else max_entries
    check_guard(G.edge_count**ell * G.sigma**ell, max_entries, "parallel repetition")
    out = G
    for _ in range(ell - 1):
        out = product(out, G, max_entries)
    return out


def unit_game() -> ProjectionGame:
    """One edge, one label: the identity for :func:`product`."""
    return ProjectionGame(1, 1, 1, ((0, 0),), ((0,),))


def repetition_value_bound(eps: Fraction, ell: int) -> Fraction:
    """Upper bound ``(1 - eps^2/16)^ell`` on the value of an ``ell``-fold repeated
    projection game whose value is at most ``1 - eps``."""
    eps = Fraction(eps)
    return (1 - eps * eps / 16) ** ell


def is_special(G: ProjectionGame) -> tuple[bool, list[str]]:
    """Check the 15-regular, ``|X| = |Y| = 5n``, ``|E| = 75n``, 3 | n, sigma = 7 shape."""
    problems = []
    if G.x_count != G.y_count:
        problems.append(f"|X| = {G.x_count} differs from |Y| = {G.y_count}")
    if G.x_count % 5:
        problems.append(f"|X| = {G.x_count} is not a multiple of 5")
    n = G.x_count // 5
    if n < 1 or n % 3:
        problems.append(f"n = |X|/5 = {G.x_count / 5:g} is not a positive multiple of 3")
    if G.edge_count != 75 * n:
        problems.append(f"|E| = {G.edge_count}, expected 75n = {75 * n}")
    bad_x = [x for x, d in enumerate(G.x_degrees()) if d != 15]
    bad_y = [y for y, d in enumerate(G.y_degrees()) if d != 15]
    if bad_x:
        problems.append(f"left vertices without degree 15: {bad_x[:10]}")
    if bad_y:
        problems.append(f"right vertices without degree 15: {bad_y[:10]}")
    if G.sigma != 7:
        problems.append(f"alphabet size {G.sigma}, expected 7")
    return not problems, problems

