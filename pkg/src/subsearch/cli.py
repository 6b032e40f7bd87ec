"""``subsearch`` command line.

Exit codes: 0 ok, 2 invalid input or failed validation, 3 instance too
large for the requested method, 4 not series-parallel decomposable when an
exact decomposition method was demanded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import generators
from .density import InstanceError, max_density_subset
from .game import (
    best_response_searcher,
    curvature_approx_strategies,
    expected_cost_vector,
    game_value_spd,
    in_scaled_base_polyhedron,
    matrix_game_solve,
    modular_game_solution,
)
from .instances import (
    DocumentError,
    canonical_dumps,
    digest,
    document_kind,
    instance_from_doc,
    loads,
    precedence_from_doc,
    precedence_to_doc,
    search_to_doc,
    tree_to_doc,
)
from .numeric import format_value
from .sched import noprec_ratio, schedule
from .setfn import CapacityError, ModularFunction
from .sidney import brute_force_optimal, sidney_decomposition, two_approx_search
from .spd import NotDecomposable, NotDecomposableError, spd_decompose, spd_optimal_search, tree_to_json

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_NOT_DECOMPOSABLE = 0, 2, 3, 4


def _v(x):
    if isinstance(x, (list, tuple)):
        return [_v(y) for y in x]
    return format_value(x)


def _names(inst, mask):
    return inst.ground.names(mask)


def _order(inst, order):
    return [inst.ground.labels[i] for i in order]


def _load(args):
    with open(args.instance, encoding="utf-8") as fh:
        doc = loads(fh.read())
    if args.mode:
        doc = dict(doc, mode=args.mode)
    return doc


def _instance(args, doc):
    return instance_from_doc(doc, validate=not args.no_validate)


# --- commands ---------------------------------------------------------------------

def cmd_validate(args, doc):
    inst = instance_from_doc(doc, validate=False)
    bad = inst.violations()
    results = {
        "valid": not bad,
        "n": inst.n,
        "mode": inst.mode,
        "violations": [{"check": v.check, "message": v.message, "witness": v.witness} for v in bad],
    }
    return results, {}, EXIT_OK if not bad else EXIT_INVALID


def cmd_solve(args, doc):
    inst = _instance(args, doc)
    method = args.method or "sidney"
    if method == "sidney":
        rep = two_approx_search(inst)
        results = {
            "order": _order(inst, rep.order),
            "cost": _v(rep.cost),
            "blocks": [_names(inst, b) for b in rep.blocks],
        }
        cert = {"lower_bound": _v(rep.lower_bound), "ratio_bound": _v(rep.ratio_bound),
                "within_two": bool(rep.cost <= 2 * rep.lower_bound)}
    elif method in ("brute", "perm"):
        order, cost = brute_force_optimal(inst, "dp" if method == "brute" else "perm")
        results = {"order": _order(inst, order), "cost": _v(cost)}
        cert = {"exact": True}
    elif method == "spd":
        order, cost = spd_optimal_search(inst)
        results = {"order": _order(inst, order), "cost": _v(cost)}
        cert = {"exact": True}
    else:
        raise DocumentError(f"unknown solve method {method!r}")
    results["method"] = method
    return results, cert, EXIT_OK


def cmd_decompose(args, doc):
    inst = _instance(args, doc)
    tree = spd_decompose(inst, policy=args.policy)
    ok = not isinstance(tree, NotDecomposable)
    return {"decomposable": ok, "tree": tree_to_json(tree, inst.ground.labels)}, {}, EXIT_OK


def cmd_density(args, doc):
    inst = _instance(args, doc)
    res = max_density_subset(inst)
    dec = sidney_decomposition(inst)
    results = {
        "max_density_set": _names(inst, res.set),
        "density": _v(res.rho),
        "rounds": res.rounds,
        "blocks": [{"set": _names(inst, b), "density": _v(r)} for b, r in zip(dec.blocks, dec.rhos)],
    }
    return results, {}, EXIT_OK


def cmd_game(args, doc):
    inst = _instance(args, doc)
    f = inst.f
    labels = f.ground.labels
    method = args.method or "spd"
    cert = {}
    if method in ("spd", "modular", "approx"):
        if method == "spd":
            sol = game_value_spd(f)
        elif method == "modular":
            if not isinstance(f, ModularFunction):
                raise DocumentError("--method modular needs a modular cost function")
            sol = modular_game_solution(f)
        else:
            _, _, factor = curvature_approx_strategies(f)
            surrogate = ModularFunction(f.ground, [f(1 << s) for s in range(f.n)], f.mode)
            sol = modular_game_solution(surrogate)
            cert["factor"] = _v(factor)
        results = sol.to_json(labels)
        if method == "approx":
            del results["value"], results["phi"]
        costs = expected_cost_vector(f, sol.searcher)
        ok, witness = in_scaled_base_polyhedron(f, sol.hider)
        _, br = best_response_searcher(f, sol.hider)
        cert.update({
            "cost_vector": {labels[s]: _v(c) for s, c in enumerate(costs)},
            "max_cost": _v(max(costs)),
            "hider_guarantee": _v(br),
            "hider_in_base_polyhedron": ok,
            "polyhedron_witness": None if ok else f.ground.names(witness),
        })
    elif method in ("oracle", "lp"):
        res = matrix_game_solve(f, "fictitious_play" if method == "oracle" else "exact_lp",
                                iters=args.iters, tol=args.tol)
        results = {
            "value": _v(res.value),
            "hider": {labels[s]: _v(x) for s, x in enumerate(res.hider)},
            "searcher": [{"order": [labels[s] for s in pi], "p": _v(p)}
                         for pi, p in sorted(res.searcher.items())],
            "method": res.method,
        }
        cert = {"lower": _v(res.lower), "upper": _v(res.upper), "iterations": res.iterations,
                "converged": res.converged}
    else:
        raise DocumentError(f"unknown game method {method!r}")
    return results, cert, EXIT_OK


def cmd_sched(args, doc):
    if document_kind(doc) != "precedence":
        raise DocumentError("sched needs a precedence document with 'p' and 'w' or 'wA'")
    pinst = precedence_from_doc(doc)
    method = args.method or "sidney"
    rep = schedule(pinst, method)
    results = {
        "order": [pinst.labels[j] for j in rep.order],
        "cost": _v(rep.cost),
        "method": method,
        "feasible": pinst.is_feasible(rep.order),
    }
    cert = {"lower_bound": _v(rep.lower_bound), "ratio_bound": _v(rep.ratio_bound)}
    if not pinst.edges and pinst.w is not None:
        cert["noprec_ratio"] = _v(noprec_ratio(pinst.h, sum(pinst.p)))
    return results, cert, EXIT_OK


def cmd_gen(args):
    fam, n, seed = args.family, args.n, args.seed
    if fam == "coverage":
        doc = search_to_doc(generators.coverage_instance(n, seed))
    elif fam == "concave_modular":
        doc = search_to_doc(generators.concave_modular_instance(n, seed))
    elif fam == "modular":
        doc = search_to_doc(generators.modular_pair(n, seed))
    elif fam == "tree":
        import random
        rng = random.Random(seed)
        tree = generators.random_tree(n, rng)
        doc = tree_to_doc(tree, [rng.randint(1, 9) for _ in range(n)])
    elif fam == "gsp":
        doc = precedence_to_doc(generators.gsp_instance(n, seed))
    elif fam == "kuniform":
        doc = precedence_to_doc(generators.kuniform_instance(n, args.k, seed))
    else:
        raise DocumentError(f"unsupported family {fam!r}; choose from {', '.join(generators.FAMILIES)}")
    return doc


COMMANDS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "decompose": cmd_decompose,
    "density": cmd_density,
    "game": cmd_game,
    "sched": cmd_sched,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subsearch", description="Submodular search problems and games.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, methods=None):
        p.add_argument("instance", help="instance JSON file")
        if methods:
            p.add_argument("--method", choices=methods)
        p.add_argument("--mode", choices=("rational", "float"), help="override the arithmetic mode")
        p.add_argument("--no-validate", action="store_true", help="skip standing-assumption checks")
        p.add_argument("--json", action="store_true", help="print the full JSON report")
        return p

    common(sub.add_parser("validate", help="check structure and standing assumptions"))
    common(sub.add_parser("solve", help="search order and cost"), ("sidney", "spd", "brute", "perm"))
    p = common(sub.add_parser("decompose", help="series-parallel decomposition tree"))
    p.add_argument("--policy", choices=("series-first", "parallel-first"), default="series-first")
    common(sub.add_parser("density", help="maximum-density set and block decomposition"))
    p = common(sub.add_parser("game", help="search game value and strategies"), ("spd", "modular", "approx", "oracle", "lp"))
    p.add_argument("--iters", type=int, default=200_000, help="fictitious play iterations")
    p.add_argument("--tol", type=float, default=1e-3, help="fictitious play stopping gap")
    common(sub.add_parser("sched", help="schedule a precedence instance"), ("sidney", "spd", "brute"))
    p = sub.add_parser("gen", help="emit a random instance")
    p.add_argument("family", choices=generators.FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("seed_pos", nargs="?", type=int, metavar="seed")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--k", type=int, default=2, help="subset size for kuniform")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    return ap


def _print_text(results, cert, out):
    for block in (results, cert):
        for k in sorted(block):
            v = block[k]
            if isinstance(v, (dict, list)):
                v = json.dumps(v, sort_keys=True)
            print(f"{k}: {v}", file=out)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "gen":
            args.seed = args.seed if args.seed is not None else (args.seed_pos or 0)
            text = json.dumps(cmd_gen(args), indent=2, sort_keys=True) + "\n"
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return EXIT_OK
        start = time.perf_counter()
        doc = _load(args)
        results, cert, code = COMMANDS[args.command](args, doc)
    except (DocumentError, InstanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(f"witness: {json.dumps(witness)}", file=sys.stderr)
        return EXIT_INVALID
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NotDecomposableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DECOMPOSABLE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {
        "command": [args.command] + [a for a in argv[1:] if a != args.instance],
        "digest": digest(doc),
        "results": results,
        "certification": cert,
        "wall_time": round(time.perf_counter() - start, 6),
    }
    if args.json:
        out.write(canonical_dumps(report) + "\n")
    else:
        _print_text(results, cert, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
