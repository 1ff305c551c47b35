"""JSON encodings with exact rationals as ``"p/q"`` strings."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import mpmath

from .games import ProjectionGame
from .gadgets import ReducedInstance
from .linalg import GramMatrix, VectorSet, as_scalar, gram_from_vectors
from .satgame import CnfFormula
from .solvers import SolveResult


def scalar_to_json(q) -> str:
    if isinstance(q, mpmath.mpf):
        return mpmath.nstr(q, 60)
    return str(as_scalar(q))


def scalar_from_json(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise TypeError("rationals must be encoded as strings or integers")
    return as_scalar(s)


def _entry_from_json(s):
    # integer strings dominate reduced instances; skip Fraction parsing for them
    if isinstance(s, str) and "/" not in s:
        try:
            return int(s)
        except ValueError:
            pass
    return scalar_from_json(s)


def gram_to_json(A: GramMatrix) -> dict:
    return {"type": "gram", "n": A.n, "rows": [[scalar_to_json(x) for x in r] for r in A.rows]}


def gram_from_json(d: dict) -> GramMatrix:
    A = GramMatrix(tuple(tuple(scalar_from_json(x) for x in r) for r in d["rows"]))
    if "n" in d and d["n"] != A.n:
        raise ValueError(f"declared n = {d['n']} but matrix has order {A.n}")
    return A


def vectors_to_json(V: VectorSet) -> dict:
    return {
        "type": "vectors",
        "dim": V.dim,
        "vectors": [[scalar_to_json(x) for x in v] for v in V.vectors],
        "scale_sq": scalar_to_json(V.scale_sq),
    }


def vectors_from_json(d: dict) -> VectorSet:
    V = VectorSet.from_rows(
        [[_entry_from_json(x) for x in v] for v in d["vectors"]], scalar_from_json(d.get("scale_sq", "1"))
    )
    if V.dim != d.get("dim", V.dim):
        raise ValueError(f"declared dim = {d['dim']} but vectors have dimension {V.dim}")
    return V


def game_to_json(G: ProjectionGame) -> dict:
    return {
        "type": "game",
        "x_count": G.x_count,
        "y_count": G.y_count,
        "sigma": G.sigma,
        "edges": [list(e) for e in G.edges],
        "tables": [list(t) for t in G.tables],
    }


def game_from_json(d: dict) -> ProjectionGame:
    return ProjectionGame(d["x_count"], d["y_count"], d["sigma"], tuple(map(tuple, d["edges"])), tuple(map(tuple, d["tables"])))


def reduced_to_json(R: ReducedInstance) -> dict:
    d = vectors_to_json(R.vectors)
    d["type"] = "reduced"
    d["sidecar"] = {
        "index_of": [[side, v, label, idx] for (side, v, label), idx in R.index_of.items()],
        "delta": R.delta,
        "augmented": R.augmented,
        "x_count": R.x_count,
        "y_count": R.y_count,
        "sigma": R.sigma,
        "m": R.m,
    }
    return d


def reduced_from_json(d: dict) -> ReducedInstance:
    s = d["sidecar"]
    R = ReducedInstance(vectors_from_json(d), s["delta"], s["x_count"], s["y_count"], s["sigma"], s["m"], s["augmented"])
    stored = {(side, v, label): idx for side, v, label, idx in s["index_of"]}
    if stored != R.index_of:
        raise ValueError("sidecar index map disagrees with the instance layout")
    return R


def cnf_to_json(phi: CnfFormula) -> dict:
    return {"type": "cnf", "var_count": phi.var_count, "clauses": [list(c) for c in phi.clauses]}


def cnf_from_json(d: dict) -> CnfFormula:
    return CnfFormula(d["var_count"], tuple(map(tuple, d["clauses"])))


def solve_result_to_json(r: SolveResult) -> dict:
    return {
        "subset": list(r.subset),
        "det": scalar_to_json(r.det),
        "log_det": r.log_det,
        "method": r.method,
        "exact": r.certified_exact,
    }


def solve_result_from_json(d: dict) -> SolveResult:
    return SolveResult(tuple(d["subset"]), scalar_from_json(d["det"]), d["method"], d["exact"])


def distribution_to_json(T) -> dict:
    return {
        "type": "distribution",
        "n": T.n,
        "subsets": [list(S) for S in T.subsets],
        "masses": [scalar_to_json(m) for m in T.masses],
        "z": None if T.z is None else scalar_to_json(T.z),
    }


def load_matrix(d: dict) -> GramMatrix:
    """A Gram matrix from either a matrix file or any vector-set file."""
    if d.get("type") in ("vectors", "reduced") or "vectors" in d:
        return gram_from_vectors(vectors_from_json(d))
    return gram_from_json(d)


def read_json(path) -> dict:
    with open(path) as f:
        return json.load(f)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def write_json_atomic(path, obj) -> None:
    """Write via a temporary file in the same directory plus rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(dumps(obj))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
