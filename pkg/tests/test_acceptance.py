"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
where the lines are repeated in the terminal summary.
"""
import itertools
import math
import random
import time
from fractions import Fraction as Fr


from subsearch.density import SearchInstance, max_density_subset
from subsearch.game import (
    ParallelNode,
    best_response_searcher,
    curvature_approx_strategies,
    expected_cost_vector,
    game_value_spd,
    in_scaled_base_polyhedron,
    matrix_game_solve,
    modular_game_solution,
)
from subsearch.generators import (
    concave_modular,
    coverage,
    dual_coverage,
    gsp_instance,
    modular_pair,
    private_coverage,
    random_tree,
    sparse_subset_instance,
    tree_instance,
)
from subsearch.sched import (
    ExpDiscount,
    Log,
    TreeCost,
    cost_oracle,
    dummy_job_reduction,
    noprec_ratio,
    search_instance,
    smith_rule,
)
from subsearch.setfn import GroundSet, ModularFunction, curvature, dual, verify_structure
from subsearch.sidney import (
    brute_force_optimal,
    curvature_ratio_bound,
    epsilon,
    expected_cost,
    reverse,
    two_approx_search,
)
from subsearch.spd import NotDecomposable, spd_decompose, spd_optimal_search

import oracles
from conftest import ACCEPTANCE_LINES, make_f3


def report(num, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}  {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


# --- fixture suites ---------------------------------------------------------------

def density_suite(count=200):
    """Coverage f with dual-coverage g, n in 3..7."""
    return [SearchInstance(coverage(3 + k % 5, rng := random.Random(1000 + k)), dual_coverage(3 + k % 5, rng))
            for k in range(count)]


def low_curvature_pairs(count=100):
    """Private-item coverage f and the dual of another; both curvatures stay below 1."""
    out = []
    for k in range(count):
        n = 3 + k % 5
        rng = random.Random(2000 + k)
        out.append(SearchInstance(private_coverage(n, rng), dual(private_coverage(n, rng))))
    return out


def strictly_increasing(t, n):
    return all(t[A | 1 << s] > t[A] for A in range(1 << n) for s in range(n) if not A >> s & 1)


def decomposable_suite(count=120):
    out = []
    for k in range(count):
        n = 2 + k % 8
        kind = k % 3
        if kind == 0:
            out.append(("tree", tree_instance(n, k)))
        elif kind == 1:
            out.append(("gsp", search_instance(gsp_instance(n, k))))
        else:
            out.append(("modular", modular_pair(n, k)))
    return out


def game_suite(count=60):
    out = []
    for k in range(count):
        rng = random.Random(500 + k)
        n = 1 + k % 6
        kind = k % 3
        if kind == 0:
            out.append(TreeCost(random_tree(n, rng)))
        elif kind == 1:
            out.append(cost_oracle(gsp_instance(n, rng)))
        else:
            out.append(ModularFunction(GroundSet.of_size(n), [rng.randint(1, 7) for _ in range(n)]))
    return out


def low_curvature_suite():
    out = []
    for k in range(40):
        n = 2 + k % 5
        f = private_coverage(n, 900 + k) if k % 2 else concave_modular(n, 900 + k)
        if curvature(f) < Fr(1, 2):
            out.append(f)
    return out


def tables(inst):
    return inst.f.table(), inst.g.table(), inst.n


# --- criteria ---------------------------------------------------------------------

def test_criterion_01_density_law():
    start = time.perf_counter()
    suite = density_suite()
    orders, bad_orders, bad_instances, bad_strict_g, weak_fail = 0, 0, 0, 0, 0
    for inst in suite:
        M = max_density_subset(inst).set
        size = bin(M).count("1")
        ft, gt, n = tables(inst)
        _, best = oracles.optimum(ft, gt, n)
        orders += len(best)
        bad = [pi for pi in best if sum(1 << s for s in pi[:size]) != M]
        bad_orders += len(bad)
        bad_instances += bool(bad)
        bad_strict_g += bool(bad) and strictly_increasing(gt, n)
        weak_fail += len(bad) == len(best)
    elapsed = time.perf_counter() - start
    # The "every optimal order" form can fail when g has zero marginals inside M;
    # the failures are reported, not filtered out.
    report(1, "optimal orders start with M", bad_orders == 0 and elapsed < 60,
           f"{len(suite)} instances, {orders} optimal orders, {bad_orders} violating orders on {bad_instances} "
           f"instances ({bad_strict_g} of them with g strictly increasing), "
           f"instances where no optimal order starts with M: {weak_fail}, {elapsed:.1f}s")


def test_criterion_02_two_approximation():
    worst, worst_curv, applicable, bad = Fr(0), Fr(0), 0, 0
    suite = density_suite()
    for inst in suite + low_curvature_pairs():
        opt, _ = oracles.optimum(*tables(inst))
        cost = two_approx_search(inst).cost
        ratio = Fr(cost) / Fr(opt)
        worst = max(worst, ratio)
        bad += ratio > 2
        if curvature(inst.f) < 1 and curvature(dual(inst.g)) < 1:
            applicable += 1
            bound = curvature_ratio_bound(inst)
            worst_curv = max(worst_curv, ratio / bound)
            bad += ratio > bound
    report(2, "sidney order within 2 and the curvature bound", bad == 0 and applicable > 0,
           f"{len(suite)} coverage instances plus 100 low-curvature pairs, max ratio {float(worst):.4f}; "
           f"curvature bound applied on {applicable} instances, max ratio/bound {float(worst_curv):.4f}")


def test_criterion_03_full_set_band():
    found, bad, k = 0, 0, 0
    while found < 50 and k < 1000:
        n = 3 + k % 4
        inst = SearchInstance(coverage(n, 3000 + k), dual_coverage(n, 7000 + k))
        k += 1
        if max_density_subset(inst).set != inst.f.full:
            continue
        found += 1
        ft, gt, n = tables(inst)
        full = (1 << n) - 1
        top = gt[full] * ft[full]
        bad += sum(not (top / 2 <= c <= top) for c in oracles.all_costs(ft, gt, n).values())
    report(3, "M = S costs lie in [g(S)f(S)/2, g(S)f(S)]", found >= 50 and bad == 0,
           f"{found} instances with M = S out of {k} drawn, {bad} permutations outside the band")


def test_criterion_04_spd_exactness():
    suite = decomposable_suite()
    mismatch, failed, counts = 0, 0, {}
    for kind, inst in suite:
        counts[kind] = counts.get(kind, 0) + 1
        if isinstance(spd_decompose(inst), NotDecomposable):
            failed += 1
            continue
        _, cost = spd_optimal_search(inst)
        _, opt = brute_force_optimal(inst)
        mismatch += cost != opt
        if inst.n <= 6:
            mismatch += cost != oracles.optimum(*tables(inst))[0]
    gsp_total = sum(1 for kind, _ in suite if kind == "gsp")
    gsp_fail = sum(1 for kind, inst in suite if kind == "gsp" and isinstance(spd_decompose(inst), NotDecomposable))
    report(4, "spd optimum equals brute force", mismatch == 0 and failed == 0 and len(suite) >= 100,
           f"{len(suite)} instances {counts}, {mismatch} mismatches, {failed} undecomposed, "
           f"gsp decomposed {gsp_total - gsp_fail}/{gsp_total}")


def test_criterion_05_game_value():
    suite = game_suite()
    lp_bad, eq_bad, poly_bad, fp_gap = 0, 0, 0, 0.0
    for f in suite:
        sol = game_value_spd(f)
        lp = matrix_game_solve(f, "exact_lp")
        lp_bad += not (lp.converged and lp.value == sol.value)
        lp_bad += abs(oracles.game_value_lp(f.table(), f.n) - float(sol.value)) > 1e-7
        fp = matrix_game_solve(f)
        fp_gap = max(fp_gap, abs(float(sol.value) - fp.value))
        eq_bad += expected_cost_vector(f, sol.searcher) != [sol.value] * f.n
        poly_bad += not in_scaled_base_polyhedron(f, sol.hider)[0]
    ok = len(suite) >= 50 and lp_bad == 0 and eq_bad == 0 and poly_bad == 0 and fp_gap <= 1e-2
    report(5, "game value, equalization and hider polyhedron", ok,
           f"{len(suite)} games, LP mismatches {lp_bad}, max |V - V_fp| {fp_gap:.2e}, "
           f"unequal cost vectors {eq_bad}, polyhedron violations {poly_bad}")


def test_criterion_06_modular_closed_form():
    f = ModularFunction(GroundSet.of_size(2), [1, 2])
    sol, spd = modular_game_solution(f), game_value_spd(f)
    ok = (sol.value == spd.value == Fr(7, 3) and sol.hider == spd.hider == [Fr(1, 3), Fr(2, 3)]
          and isinstance(spd.searcher, ParallelNode) and spd.searcher.q == Fr(1, 3))
    gaps = [abs(matrix_game_solve(f).value - 7 / 3)]
    for n in range(1, 7):
        u = ModularFunction(GroundSet.of_size(n), [1] * n)
        ok &= modular_game_solution(u).value == Fr(n + 1, 2)
        gaps.append(abs(matrix_game_solve(u).value - (n + 1) / 2))
    ok &= max(gaps) <= 1e-3
    report(6, "modular closed form", ok,
           f"V(1,2) = {sol.value}, q = {spd.searcher.q}, x = {[str(v) for v in sol.hider]}, "
           f"uniform n = 1..6 match (n+1)/2, max oracle gap {max(gaps):.2e}")


def test_criterion_07_curvature_strategies():
    suite = low_curvature_suite()
    bad, slack_hi, slack_lo = 0, math.inf, math.inf
    for f in suite:
        kappa = curvature(f)
        lp, fp = matrix_game_solve(f, "exact_lp"), matrix_game_solve(f)
        V = float(lp.value)
        bad += not (lp.converged and fp.lower - 1e-9 <= V <= fp.upper + 1e-9)
        x, p, _ = curvature_approx_strategies(f)
        hi = float(max(expected_cost_vector(f, p)))
        lo = float(best_response_searcher(f, x)[1])
        slack_hi = min(slack_hi, V / (1 - float(kappa)) + 1e-3 - hi)
        slack_lo = min(slack_lo, lo - (1 - float(kappa)) * V + 1e-3)
    bad += (slack_hi < 0) + (slack_lo < 0)
    report(7, "curvature strategies within 1/(1-kappa)", bad == 0 and len(suite) >= 10,
           f"{len(suite)} fixtures with kappa < 1/2, V exact by LP inside the fictitious-play bracket, min slack searcher {slack_hi:.4f}, hider {slack_lo:.4f}")


def weighted_completion(p, w, order):
    t, total = 0, 0
    for j in order:
        t += p[j]
        total += w[j] * t
    return total


def test_criterion_08_scheduling_formulas():
    r_log = noprec_ratio(Log(Fr(1)), 1)
    r_exp = noprec_ratio(ExpDiscount(math.log(2)))
    ok = r_log == Fr(4, 3) and r_exp == 4 / 3
    rng = random.Random(8)
    fixtures, bad = 0, 0
    for n in range(1, 9):
        for _ in range(6 if n < 8 else 3):
            p = [rng.randint(1, 9) for _ in range(n)]
            w = [rng.randint(0, 9) for _ in range(n)]
            best = min(weighted_completion(p, w, pi) for pi in itertools.permutations(range(n)))
            bad += weighted_completion(p, w, smith_rule(p, w)) != best
            fixtures += 1
    report(8, "no-precedence ratios and Smith's rule", ok and bad == 0,
           f"log ratio {r_log}, discount ratio {r_exp!r}, Smith's rule optimal on {fixtures - bad}/{fixtures}")


def subset_objective(inst, order):
    """Sum of w_A times the completion time of the last job of A."""
    t, when = 0, {}
    for j in order:
        t += inst.p[j]
        when[j] = t
    return sum(w * max(when[j] for j in range(inst.n) if B >> j & 1) for B, w in inst.wA.items())


def feasible_orders(inst):
    return [pi for pi in itertools.permutations(range(inst.n)) if inst.is_feasible(pi)]


def test_criterion_09_structural_verifiers():
    f3 = make_f3()
    rep = verify_structure(f3)
    t = f3.table()
    f3_ok = rep.submodular and rep.nondecreasing and oracles.is_submodular(t, 3) and oracles.is_nondecreasing(t, 3)
    fixtures, bad = 0, 0
    for n in range(1, 5):
        for seed in range(15):
            inst = sparse_subset_instance(n, 40 * n + seed)
            red = dummy_job_reduction(inst)
            direct = min(subset_objective(inst, pi) for pi in feasible_orders(inst))
            reduced = min(weighted_completion(red.p, red.w, pi) for pi in feasible_orders(red))
            lib = (brute_force_optimal(search_instance(inst))[1], brute_force_optimal(search_instance(red))[1])
            bad += not (direct == reduced == lib[0] == lib[1])
            fixtures += 1
    report(9, "F3 structure and dummy-job reduction", f3_ok and bad == 0,
           f"F3 submodular and monotone: {f3_ok}; reduction objective equal on {fixtures - bad}/{fixtures}")


def test_criterion_10_duality():
    checked, bad = 0, 0
    for k in range(24):
        n = 1 + k % 6
        rng = random.Random(77 + k)
        inst = SearchInstance(coverage(n, rng), dual_coverage(n, rng))
        twin = SearchInstance(dual(inst.g), dual(inst.f))
        for pi in itertools.permutations(range(n)):
            bad += expected_cost(inst, pi) != expected_cost(twin, reverse(pi))
            bad += epsilon(inst, pi) != epsilon(twin, reverse(pi))
            bad += expected_cost(inst, pi) != oracles.order_cost(
                oracles.dual_table(inst.g.table(), n), oracles.dual_table(inst.f.table(), n), reverse(pi))
            checked += 1
    report(10, "cost and epsilon duality", bad == 0, f"{checked} orders on 24 instances, {bad} mismatches")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
