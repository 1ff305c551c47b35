"""Reduce a special-shaped toy game both ways and report the exact diagnostics.

    python3 scripts/reduction_diagnostics.py --seed 0 --samples 200
"""

import argparse
import json
from fractions import Fraction

import numpy as np

from dpphard.gadgets import (
    orthonormal_witness,
    reduce_game,
    rep_counts,
    rep_volume_bound_sq,
    same_vertex_distance_sq_bound,
    split_sides,
)
from dpphard.games import is_special, solve_game
from dpphard.generators import toy_special_game
from dpphard.linalg import min_eigenvalue_at_least, volume_squared


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=200)
    args = ap.parse_args()

    G = toy_special_game(args.seed)
    value, L = solve_game(G)
    rng = np.random.default_rng(args.seed)
    rows = []
    for augmented in (False, True):
        R = reduce_game(G, augmented)
        S = orthonormal_witness(G, L, R)
        worst = Fraction(0)
        for _ in range(args.samples):
            x = int(rng.integers(0, G.x_count))
            labels = rng.choice(G.sigma, size=int(rng.integers(1, G.sigma + 1)), replace=False)
            picked = sorted(R.index("X", x, int(i)) for i in labels)
            SX, _ = split_sides(R, picked)
            rep = rep_counts(R, picked).rep_x
            worst = max(worst, volume_squared(R.vectors, SX) / same_vertex_distance_sq_bound(R.delta, augmented) ** rep)
        row = {
            "augmented": augmented,
            "N": R.N,
            "K": R.K,
            "delta": R.delta,
            "dim": R.vectors.dim,
            "witness_vol_sq": str(volume_squared(R.vectors, S)),
            "per_repeat_factor": str(same_vertex_distance_sq_bound(R.delta, augmented)),
            "stated_factor": str(rep_volume_bound_sq(1, augmented)),
            "max_vol_over_bound": str(worst),
        }
        if augmented:
            row["eig_floor_1_over_delta_plus_1"] = min_eigenvalue_at_least(R.gram, Fraction(1, R.delta + 1))
        rows.append(row)
    print(json.dumps({"special": is_special(G)[0], "value": str(value), "reductions": rows}, indent=1))


if __name__ == "__main__":
    main()
