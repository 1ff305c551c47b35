"""Command-line entry point: ``dpphard {gen,reduce,solve,edpp,verify,gap}``.

Results go to stdout as JSON, or to ``--out`` together with a run manifest
at ``<out>.manifest.json``.  Exit codes: 0 success, 2 invalid input,
3 guard exceeded, 4 gap instance outside the promise.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from fractions import Fraction

from . import __version__, edpp, gadgets, generators, jsonio, solvers, verify
from .config import GuardExceeded, guards
from .games import is_special, regular_degree
from .linalg import as_scalar

EXIT_OK, EXIT_INVALID, EXIT_GUARD, EXIT_BETWEEN = 0, 2, 3, 4
MANIFEST_SCHEMA = 1


class InvalidInput(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def cmd_gen(args) -> tuple[dict, int]:
    seed = args.seed
    if args.kind == "random-psd":
        A = generators.random_psd(seed, args.n, args.rank)
        return jsonio.gram_to_json(A), EXIT_OK
    if args.kind == "random-game":
        G, planted = generators.random_regular_game(seed, args.k, args.delta, args.sigma, not args.unsatisfiable)
        out = jsonio.game_to_json(G)
        if planted is not None:
            out["planted"] = {"x_labels": list(planted.x_labels), "y_labels": list(planted.y_labels)}
        return out, EXIT_OK
    if args.kind == "e3sat5":
        return jsonio.cnf_to_json(generators.random_e3sat5(seed, args.n, not args.unsatisfiable)), EXIT_OK
    if args.kind == "toy-special":
        return jsonio.game_to_json(generators.toy_special_game(seed, args.n)), EXIT_OK
    raise InvalidInput(f"unknown kind {args.kind}")


def cmd_reduce(args) -> tuple[dict, int]:
    G = jsonio.game_from_json(jsonio.read_json(args.game))
    if regular_degree(G) is None:
        raise InvalidInput("game is not regular: every vertex needs the same degree")
    R = gadgets.reduce_game(G, augmented=args.augmented, m=args.m)
    out = jsonio.reduced_to_json(R)
    if args.scale_sq is not None:
        V = gadgets.scale_vector_set(R.vectors, c_sq=args.scale_sq)
        out.update(jsonio.vectors_to_json(V))
        out["type"] = "reduced"
    info = {"N": R.N, "K": R.K, "delta": R.delta, "dim": R.vectors.dim, "special": is_special(G)[0]}
    print(json.dumps(info), file=sys.stderr)
    return out, EXIT_OK


def cmd_solve(args) -> tuple[dict, int]:
    d = jsonio.read_json(args.matrix)
    A = jsonio.load_matrix(d)
    k = A.n if args.k is None else args.k
    if args.mode == "exact":
        res = solvers.maxdet_exact(A) if args.k is None else solvers.maxdet_k_exact(A, k)
    elif args.mode == "greedy":
        if "vectors" in d:
            res = solvers.greedy_volmax(jsonio.vectors_from_json(d), k)
        else:
            res = solvers.greedy_logdet(A, k)
    elif args.mode == "double-greedy":
        res = solvers.double_greedy_logdet(A)
    else:
        raise InvalidInput(f"unknown mode {args.mode}")
    out = jsonio.solve_result_to_json(res)
    if args.mode != "exact" and A.n <= guards().detmax_order:
        opt = solvers.maxdet_exact(A) if args.k is None or args.mode == "double-greedy" else solvers.maxdet_k_exact(A, k)
        out["oracle"] = jsonio.solve_result_to_json(opt)
        out["ratio"] = jsonio.scalar_to_json(res.det / opt.det) if opt.det else None
    return out, EXIT_OK


def cmd_edpp(args) -> tuple[dict, int]:
    if args.p <= 0:
        raise InvalidInput("exponent p must be positive")
    A = jsonio.load_matrix(jsonio.read_json(args.matrix))
    M = edpp.EdppModel(A, args.p)
    out = {"n": A.n, "p": str(M.p), "mode": args.mode}
    if args.mode == "exact":
        out["z"] = jsonio.scalar_to_json(edpp.z_exact(M))
        out["relative_error_bound"] = edpp.z_error_bound(M)
    elif args.mode == "closed-form":
        if M.p != 1:
            raise InvalidInput("closed form needs p = 1")
        out["z"] = jsonio.scalar_to_json(edpp.z_closed_form_p1(A))
    elif args.mode == "approx":
        a = edpp.z_approx(M)
        out.update(
            estimate=jsonio.scalar_to_json(a.estimate),
            interval=[jsonio.scalar_to_json(a.lower), jsonio.scalar_to_json(a.upper)],
            rho=jsonio.scalar_to_json(a.rho),
            subset=list(a.subset),
        )
    elif args.mode == "sample":
        T = edpp.build_distribution(M)
        samples = edpp.sample_exact(T, args.seed, args.samples)
        out["seed"] = args.seed
        out["samples"] = [list(S) for S in samples]
        if args.samples >= 1000:
            out["tv_to_exact"] = float(edpp.tv_distance(edpp.empirical_table(samples, A.n), T))
    else:
        raise InvalidInput(f"unknown mode {args.mode}")
    return out, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    try:
        report = verify.run_suite(args.suite, args.seed)
    except KeyError as exc:
        raise InvalidInput(str(exc)) from exc
    out = {
        suite: [{"check": name, "passed": ok, "detail": detail} for name, ok, detail in checks]
        for suite, checks in report.items()
    }
    ok = all(c["passed"] for checks in out.values() for c in checks)
    return {"passed": ok, "suites": out}, EXIT_OK if ok else 1


def cmd_gap(args) -> tuple[dict, int]:
    if not args.s < args.c:
        raise InvalidInput("thresholds need s < c")
    A = jsonio.load_matrix(jsonio.read_json(args.matrix))
    res = solvers.maxdet_exact(A)
    verdict = solvers.classify(res.det, args.s, args.c)
    out = {"verdict": verdict.name, "maxdet": jsonio.scalar_to_json(res.det), "subset": list(res.subset)}
    return out, EXIT_BETWEEN if verdict is solvers.Gap.BETWEEN else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dpphard", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=False):
        sp.add_argument("--out", help="write the result here (plus <out>.manifest.json)")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("kind", choices=["random-psd", "random-game", "e3sat5", "toy-special"])
    g.add_argument("--n", type=int, default=3, help="matrix order, or number of variables")
    g.add_argument("--rank", type=int, help="vector dimension behind random-psd (default n + 2)")
    g.add_argument("--k", type=int, default=3, help="vertices per side of random-game")
    g.add_argument("--delta", type=int, default=2)
    g.add_argument("--sigma", type=int, default=3)
    g.add_argument("--unsatisfiable", action="store_true", help="skip the planted solution")
    common(g, seed=True)
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("reduce", help="game -> vector set")
    r.add_argument("game")
    r.add_argument("--augmented", action="store_true")
    r.add_argument("--m", type=int, help="block family parameter (default: smallest even m with 2^m >= sigma)")
    r.add_argument("--scale-sq", type=_rational, dest="scale_sq", help="multiply vectors by sqrt of this")
    common(r)
    r.set_defaults(fn=cmd_reduce)

    s = sub.add_parser("solve", help="determinant maximization")
    s.add_argument("matrix")
    s.add_argument("--mode", choices=["exact", "greedy", "double-greedy"], default="exact")
    s.add_argument("--k", type=int)
    common(s)
    s.set_defaults(fn=cmd_solve)

    e = sub.add_parser("edpp", help="exponentiated DPP normalizer and sampling")
    e.add_argument("matrix")
    e.add_argument("--p", type=_rational, default=Fraction(1))
    e.add_argument("--mode", choices=["exact", "closed-form", "approx", "sample"], default="exact")
    e.add_argument("--samples", type=int, default=1)
    common(e, seed=True)
    e.set_defaults(fn=cmd_edpp)

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("suite")
    common(v, seed=True)
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("gap", help="classify maxdet against s < c")
    c.add_argument("matrix")
    c.add_argument("--s", type=_rational, required=True)
    c.add_argument("--c", type=_rational, required=True)
    common(c)
    c.set_defaults(fn=cmd_gap)
    return p


def _manifest(args, argv, wall: float) -> dict:
    inputs = [getattr(args, k) for k in ("game", "matrix") if getattr(args, k, None)]
    return {
        "schema": MANIFEST_SCHEMA,
        "command": args.command,
        "argv": list(argv),
        "inputs": inputs,
        "seed": getattr(args, "seed", None),
        "guards": dataclasses.asdict(guards()),
        "outputs": [args.out],
        "version": __version__,
        "wall_clock_seconds": round(wall, 6),
    }


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        out, code = args.fn(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, TypeError, KeyError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        jsonio.write_json_atomic(args.out, out)
        jsonio.write_json_atomic(args.out + ".manifest.json", _manifest(args, argv, time.perf_counter() - start))
    else:
        sys.stdout.write(jsonio.dumps(out))
    if args.command == "gap":
        print(out["verdict"])
    return code


if __name__ == "__main__":
    sys.exit(main())
