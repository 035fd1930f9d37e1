"""Command-line front end.

Every subcommand prints one JSON report on stdout and diagnostics on stderr.
Exit codes: 0 success, 2 usage error, 3 bad input, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import adversary, defense, mixed
from .exceptions import ConvergenceError, NumericError
from .graph import Graph, load_graph
from .report import Report
from .sdp import default_rank
from .spectral import CLUSTER_TOL

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4
THREADS_ENV = "DISCORD_LAB_THREADS"


class UsageError(Exception):
    pass


def _graph(path: str) -> Graph:
    return load_graph(Path(path))


def _objective(args) -> adversary.ObjectiveSpec:
    T = math.inf if str(args.T).lower() in ("inf", "infinity") else int(args.T)
    return adversary.ObjectiveSpec(adversary.ObjectiveKind(args.objective), args.R, T)


def _objective_inputs(args) -> dict:
    out = {"graph": args.graph, "objective": args.objective, "R": args.R}
    if args.objective == "repeated":
        out["T"] = str(args.T)
    return out


# ----------------------------------------------------------------- commands


def cmd_attack(args) -> Report:
    g = _graph(args.graph)
    obj = _objective(args)
    inputs = {**_objective_inputs(args), "budget": args.budget}
    if args.budget != "l2" and obj.kind is adversary.ObjectiveKind.PD:
        raise UsageError("the pd objective is only defined for the l2 budget")

    if args.budget == "l2":
        res = adversary.l2_attack(g, obj)
        results = {
            "optimal_value": res.optimal_value,
            "argmax_eigenvalue": res.argmax_eigenvalue,
            "argmax_indices": list(res.argmax_indices),
            "is_unique_eigenspace": res.is_unique_eigenspace,
            "tied_eigenvalues": list(res.tied_eigenvalues),
            "seeds": res.seed_basis.T,
        }
        return Report("attack", inputs, results, {"cluster_tol": CLUSTER_TOL})

    S = adversary.sigma(g, obj)
    r2 = obj.R**2
    if args.budget == "l1":
        res = adversary.l1_attack(S)
        seed = np.zeros(g.n)
        seed[res.index] = obj.R
        results = {
            "index": res.index,
            "optimal_value": r2 * res.value,
            "lower_bound": r2 * res.lower_bound,
            "upper_bound": r2 * res.upper_bound,
            "seed": seed,
        }
        return Report("attack", inputs, results)

    # linf: s in [-R, R]^n, so values scale with R^2 and seeds with R
    sdp = adversary.linf_attack_sdp(S, rng_seed=args.seed)
    s, val = adversary.linf_round(S, sdp.gram_vectors, args.trials, args.seed)
    results = {
        "sdp_value": r2 * sdp.sdp_value,
        "sdp_upper_bound": r2 * sdp.upper_bound,
        "sdp_gap": r2 * sdp.gap,
        "rounded_vector": obj.R * s,
        "rounded_value": r2 * val,
        "trials": args.trials,
    }
    if args.brute:
        bs, bv = adversary.linf_brute(S)
        results["brute_vector"] = obj.R * bs
        results["brute_value"] = r2 * bv
    inputs.update(trials=args.trials, brute=args.brute)
    tol = {"sdp_rel_gap": 1e-9, "rank": default_rank(g.n)}
    return Report("attack", inputs, results, tol, rng_seed=args.seed)


def cmd_sweep(args) -> Report:
    g = _graph(args.graph)
    rows = adversary.t_sweep(g, args.resolution, args.R)
    results = {
        "columns": ["t", "argmax_index", "value", "eigenvalue", "critical"],
        "rows": [list(r) for r in rows],
        "critical_points": [[r.t, r.argmax_index, r.value] for r in rows if r.critical],
    }
    inputs = {"graph": args.graph, "resolution": args.resolution, "R": args.R}
    return Report("sweep", inputs, results, {"cluster_tol": CLUSTER_TOL})


def cmd_defend(args) -> Report:
    g = _graph(args.graph)
    obj = _objective(args)
    if obj.kind is adversary.ObjectiveKind.PD:
        raise UsageError("the pd objective has no Sigma form to defend against")
    res = defense.defend(g, obj, defense.Budget(args.h))
    results = {
        "weights": res.weights,
        "defense_value": res.defense_value,
        "value_error": res.value_error,
        "sdp_weights": res.sdp_weights,
        "feasibility_slack": res.feasibility_slack,
        "undefended_value": res.undefended_value,
    }
    inputs = {**_objective_inputs(args), "h": args.h}
    return Report("defend", inputs, results)


def cmd_mixed(args) -> Report:
    pair = mixed.GraphPair(_graph(args.g1), _graph(args.g2))
    inputs = {"g1": args.g1, "g2": args.g2, "what": args.what}
    seed = None
    if args.what == "value":
        results = {"mixed_objective": mixed.mixed_objective(pair)}
    elif args.what == "bounds":
        from .dynamics import fj_operator

        sim = mixed.spectral_similarity(pair)
        lo, hi = mixed.matbound(pair.M, fj_operator(pair.L))
        slo, shi = mixed.similarity_bracket(pair, sim.epsilon_spectral)
        plo, phi, delta = mixed.physical_similarity_bracket(pair)
        results = {
            "mixed_objective": mixed.mixed_objective(pair),
            "spectral_lower_bound": mixed.mixed_lower_bound(pair),
            "matbound": [lo, hi],
            "similarity_bracket": [slo, shi],
            "epsilon_spectral": sim.epsilon_spectral,
            "physical_bracket": [plo, phi],
            "delta": delta,
        }
    elif args.what == "similarity":
        sim = mixed.spectral_similarity(pair)
        results = sim._asdict()
    else:
        res = mixed.cut_bounds_sweep(pair, args.mode, args.samples, args.seed, args.criterion)
        results = {"best_set": list(res.best_set), **res.bounds._asdict(), "evaluated": res.evaluated}
        inputs.update(mode=args.mode, samples=args.samples, criterion=args.criterion)
        seed = args.seed if args.mode == "random" else None
    return Report("mixed", inputs, results, rng_seed=seed)


# ------------------------------------------------------------------- parser


def _positive_float(text: str) -> float:
    x = float(text)
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive and finite, got {text}")
    return x


def _horizon(text: str) -> str:
    if text.lower() in ("inf", "infinity"):
        return "inf"
    try:
        if int(text) >= 0:
            return text
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"T must be a nonnegative integer or 'inf', got {text}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="discord-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def objective_args(sp):
        sp.add_argument("--graph", required=True, help="edge-list file")
        sp.add_argument("--objective", default="disagreement", choices=[k.value for k in adversary.ObjectiveKind])
        sp.add_argument("--T", type=_horizon, default="0", help="horizon for the repeated objective (or 'inf')")
        sp.add_argument("--R", type=_positive_float, default=1.0, help="budget radius")

    a = sub.add_parser("attack", help="optimal adversarial seed")
    objective_args(a)
    a.add_argument("--budget", default="l2", choices=["l2", "linf", "l1"])
    a.add_argument("--trials", type=int, default=200, help="hyperplane roundings (linf)")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--brute", action="store_true", help="also enumerate sign vectors (linf, n <= 22)")
    a.set_defaults(func=cmd_attack)

    s = sub.add_parser("sweep", help="optimal eigenspace across scalings tL")
    s.add_argument("--graph", required=True)
    s.add_argument("--resolution", type=int, default=64, help="grid points per decade")
    s.add_argument("--R", type=_positive_float, default=1.0)
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("defend", help="optimal defender weights")
    objective_args(d)
    d.add_argument("--h", default="l1", choices=[b.value for b in defense.Budget])
    d.set_defaults(func=cmd_defend)

    m = sub.add_parser("mixed", help="opinion graph g1 versus measurement graph g2")
    m.add_argument("what", choices=["value", "bounds", "similarity", "cutsweep"])
    m.add_argument("--g1", required=True, help="opinion graph")
    m.add_argument("--g2", required=True, help="measurement graph")
    m.add_argument("--mode", default="exhaustive", choices=["exhaustive", "random"])
    m.add_argument("--samples", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--criterion", default="prop", choices=["prop", "cor", "cor_exact"])
    m.set_defaults(func=cmd_mixed)
    return p


def _thread_limit():
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, int(raw)))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    try:
        with _thread_limit():
            report = args.func(args)
    except UsageError as e:
        print(f"discord-lab: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, ConvergenceError) as e:
        print(f"discord-lab: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as e:
        print(f"discord-lab: bad input: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.to_json())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
