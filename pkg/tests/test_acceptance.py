"""Acceptance criteria 1-11. Each test records a PASS/FAIL line shown in the terminal summary.

Run with ``pytest tests/test_acceptance.py -s`` to also see the lines as they happen,
and add ``--long-budget`` for the t=4 certification attempt.
"""
import math
import random
import time
from itertools import product

import pytest

from coopcolor.construction import (build_construction, construction_stats, extract_star_family)
from coopcolor.decomposition import star_split, threshold_split
from coopcolor.exhaustive import (Budget, Status, brute_force_adapted, closure, find_qary_tree,
                                  is_subgraph, solve_adapted_exact, solve_cooperative_exact,
                                  treedepth_exact)
from coopcolor.graphs import (EdgeColoredMultigraph, Graph, all_cooperative_colorings,
                              family_to_adapted, family_to_transversal, is_star_forest,
                              transversal_to_coloring)
from coopcolor.solvers import (SolverParams, greedy_solve, lll_solve, partition_solve_generic,
                               sample_random_double_star_family, sample_random_family,
                               sample_random_star_family, star_partition_solve)

from .conftest import ACCEPTANCE_RESULTS, complete_graph, path_graph, star_graph


def report(key, ok, msg):
    ACCEPTANCE_RESULTS[key] = (ok, msg)
    print(f"\n{'PASS' if ok else 'FAIL'}  criterion {key}: {msg}")
    assert ok, msg


def independent_check(family, coloring):
    """Direct re-check of a cooperative coloring from raw member data."""
    asg = coloring.assignment
    if set(asg) != set(family.universal_vertices):
        return False
    for v, i in asg.items():
        if not 1 <= i <= family.k or v not in family.member(i).vertices:
            return False
    for i, g in enumerate(family.members, start=1):
        for u, v in g.edges:
            if asg[u] == i and asg[v] == i:
                return False
    return True


def test_1_recurrence_fidelity():
    t0 = time.perf_counter()
    expected = [2, 5, 16, 65, 326, 1957, 13700, 109601, 986410, 9864101]
    ok = True
    prev_v = None
    for t in range(1, 11):
        s = construction_stats(t)
        v_oracle = 2 if t == 1 else t * prev_v + 1
        d_oracle = 1 if t == 1 else prev_v
        ok &= s.vertex_count == v_oracle == expected[t - 1] and s.max_mono_degree == d_oracle
        prev_v = v_oracle
    worst = max(abs(construction_stats(t).vertex_count / math.factorial(t) - math.e)
                * math.factorial(t + 1) / 2 for t in range(5, 11))
    ok &= worst < 1
    dt = time.perf_counter() - t0
    report("1 recurrence", ok and dt < 1,
           f"values exact, max |V_t/t! - e| / (2/(t+1)!) = {worst:.3f}, {dt:.3f}s")


def test_2_built_graph_consistency():
    t0 = time.perf_counter()
    ok, notes = True, []
    for t in range(1, 7):
        c = build_construction(t)
        s = construction_stats(t)
        classes = [c.multigraph.color_class(i) for i in range(1, t + 1)]
        stars = all(is_star_forest(g) for g in classes)
        mono = c.multigraph.max_mono_degree()
        good = len(c.multigraph.vertices) == s.vertex_count and stars and mono == s.max_mono_degree
        ok &= good
        notes.append(f"t={t}:{len(c.multigraph.vertices)}v/D{mono}")
    dt = time.perf_counter() - t0
    report("2 built-graph consistency", ok and dt < 30, f"{' '.join(notes)}, {dt:.1f}s")


def test_3_unsat_certification(long_budget):
    ok, notes = True, []
    for t in (1, 2, 3):
        m = build_construction(t).multigraph
        t0 = time.perf_counter()
        out = solve_adapted_exact(m, range(1, t + 1), Budget(nodes=10 ** 7))
        dt = time.perf_counter() - t0
        ok &= out.status is Status.UNSAT
        if t == 3:
            ok &= dt < 5
        notes.append(f"t={t}:{out.status.value}/{out.stats['nodes']}n/{dt:.2f}s")
    # t=2 against all 2^5 assignments
    m2 = build_construction(2).multigraph
    valid = 0
    for choice in product((1, 2), repeat=5):
        if not any(choice[u] == c == choice[v] for u, v, c in m2.colored_edges):
            valid += 1
    ok &= valid == 0 and brute_force_adapted(m2, [1, 2]) == []
    notes.append("t=2 enumeration 0/32")
    if long_budget:
        t0 = time.perf_counter()
        out = solve_adapted_exact(build_construction(4).multigraph, range(1, 5), Budget(nodes=10 ** 8))
        ok &= out.status in (Status.UNSAT, Status.UNKNOWN)
        notes.append(f"t=4:{out.status.value}/{out.stats['nodes']}n/{time.perf_counter() - t0:.1f}s")
    else:
        notes.append("t=4 skipped (pass --long-budget)")
    report("3 unsat certification", ok, ", ".join(notes))


def _components_oracle(m, palette):
    """Brute force each connected component separately; returns one full coloring or None."""
    g = Graph.build(m.vertices, [(u, v) for u, v, _ in m.colored_edges])
    merged = {}
    for comp in g.components():
        sols = brute_force_adapted(m.induced(comp), palette)
        if not sols:
            return None
        merged.update(sols[0].assignment)
    return merged


def test_4_apex_deleted_colorability():
    t0 = time.perf_counter()
    ok, notes = True, []
    for t in (2, 3):
        c = build_construction(t)
        m = c.multigraph.without_vertex(c.apex)
        out = solve_adapted_exact(m, range(1, t + 1))
        oracle = _components_oracle(m, range(1, t + 1))
        witness_ok = out.is_sat and not any(
            out.witness[u] == col == out.witness[v] for u, v, col in m.colored_edges)
        ok &= witness_ok and oracle is not None
        notes.append(f"t={t}:{out.status.value}")
    dt = time.perf_counter() - t0
    report("4 apex-deleted colorability", ok and dt < 5, f"{', '.join(notes)}, oracle agrees, {dt:.2f}s")


def _fuzz_instances(count):
    rng = random.Random(2024)
    for idx in range(count):
        kind = idx % 4
        if kind == 0:
            n, k, d = rng.randint(1, 40), rng.randint(2, 8), rng.randint(1, 6)
            yield "star", sample_random_star_family(n, k, d, idx)
        elif kind == 1:
            n, k, d = rng.randint(2, 40), rng.randint(2, 6), rng.randint(2, 8)
            yield "double-star", sample_random_double_star_family(n, k, d, idx)
        elif kind == 2:
            yield "er", sample_random_family(rng.randint(1, 12), rng.randint(1, 4), rng.random() * 0.6, idx)
        else:
            yield "er-list", sample_random_family(rng.randint(1, 12), rng.randint(1, 4), rng.random() * 0.6,
                                                  idx, list_mode=True)


def test_5_solver_soundness():
    t0 = time.perf_counter()
    instances = sat = bad = errors = runs = 0
    for idx, (kind, fam) in enumerate(_fuzz_instances(1200)):
        instances += 1
        params = SolverParams(seed=idx, resample_cap=300, epsilon=(0.25, 0.5, 1.0)[idx % 3])
        calls = [greedy_solve, lll_solve,
                 lambda f, p: partition_solve_generic(f, lambda g: threshold_split(g, 2, 2), params=p),
                 lambda f, p: solve_cooperative_exact(f, Budget(nodes=10 ** 5))]
        if kind == "star":
            calls.append(lambda f, p: partition_solve_generic(f, star_split, params=p))
            if all(len(ix) >= 2 for ix in fam.memberships.values()):
                calls.append(star_partition_solve)
        for solve in calls:
            runs += 1
            try:
                out = solve(fam, params)
            except Exception:  # noqa: BLE001
                errors += 1
                continue
            if out.status is Status.SAT:
                sat += 1
                bad += not independent_check(fam, out.witness)
            elif out.witness is not None:
                bad += 1
    dt = time.perf_counter() - t0
    ok = instances >= 1000 and bad == 0 and errors == 0 and dt < 120
    report("5 solver soundness", ok,
           f"{instances} instances, {runs} runs, {sat} sat verified, {bad} invalid, {errors} exceptions, {dt:.1f}s")


def test_6_lll_regime():
    t0 = time.perf_counter()
    sat, max_res = 0, 0
    for seed in range(100):
        fam = sample_random_star_family(200, 44, 8, seed)
        out = lll_solve(fam, SolverParams(seed=seed, resample_cap=10 ** 6))
        if out.is_sat and independent_check(fam, out.witness):
            sat += 1
        max_res = max(max_res, out.stats["resamples"])
    dt = time.perf_counter() - t0
    report("6 LLL regime", sat >= 99 and dt < 120, f"{sat}/100 sat, max resamples {max_res}, {dt:.1f}s")


@pytest.mark.slow
def test_7_partition_solver_scaling():
    t0 = time.perf_counter()
    sat, heavy, res = 0, 0, 0
    for seed in range(100):
        fam = sample_random_star_family(10 ** 4, 12, 10 ** 3, seed)
        out = star_partition_solve(fam, SolverParams(seed=seed))
        if out.is_sat and independent_check(fam, out.witness):
            sat += 1
        heavy += out.stats["heavy"]
        res += out.stats["resamples"]
    dt = time.perf_counter() - t0
    report("7 partition-solver scaling", sat >= 95 and dt < 600,
           f"{sat}/100 sat, mean heavy {heavy / 100:.1f}, total resamples {res}, {dt:.1f}s")


def test_8_noncolorable_detection():
    t0 = time.perf_counter()
    ok, notes = True, []
    for t in (2, 3):
        fam = extract_star_family(build_construction(t))
        statuses = set()
        for seed in range(5):
            for cap in (10, 1000):
                p = SolverParams(seed=seed, resample_cap=cap)
                outs = [lll_solve(fam, p), star_partition_solve(fam, p),
                        partition_solve_generic(fam, star_split, params=p), greedy_solve(fam, p)]
                statuses |= {o.status for o in outs}
                ok &= all(o.witness is None for o in outs)
        exact = solve_cooperative_exact(fam).status
        ok &= statuses == {Status.UNKNOWN} and exact is Status.UNSAT
        notes.append(f"t={t}: randomized {sorted(s.value for s in statuses)}, exact {exact.value}")
    dt = time.perf_counter() - t0
    report("8 non-colorable detection", ok and dt < 60, f"{'; '.join(notes)}, {dt:.1f}s")


def _audit_graphs(rng):
    """Random sparse graphs, trees, and hub graphs on at most 14 vertices."""
    while True:
        n = rng.randint(3, 14)
        style = rng.choice((0, 1, 2, 2, 2))
        if style == 0:
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 2.0 / n]
        elif style == 1:
            edges = [(v, rng.randrange(v)) for v in range(1, n)]
        else:
            hubs = rng.sample(range(n), rng.randint(1, 2))
            edges = []
            for h in hubs:
                edges += [(h, v) for v in range(n) if v != h and rng.random() < 0.75]
            edges += [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 3))]
            edges = [(u, v) for u, v in edges if u != v]
        yield Graph.build(range(n), edges)


def test_9_threshold_lemma_audit():
    t0 = time.perf_counter()
    rng = random.Random(33)
    audited = nonempty_b = violations = 0
    for g in _audit_graphs(rng):
        if audited >= 400:
            break
        if find_qary_tree(g, 2, 2).status is not Status.UNSAT:
            continue
        audited += 1
        s = threshold_split(g, 2, 2)
        if s.B:
            nonempty_b += 1
        if find_qary_tree(g.induced(s.B), 2, 1).status is not Status.UNSAT:
            violations += 1
    dt = time.perf_counter() - t0
    ok = audited >= 200 and violations == 0 and dt < 120
    report("9 threshold lemma audit", ok,
           f"{audited} tree-free graphs ({nonempty_b} with nonempty B), {violations} violations, {dt:.1f}s")


def test_10_treedepth_oracle():
    t0 = time.perf_counter()
    ok = True
    cases = [(path_graph(n), math.ceil(math.log2(n + 1))) for n in range(1, 11)]
    cases += [(star_graph(k), 2) for k in range(1, 11)]
    cases += [(complete_graph(n), n) for n in range(1, 8)]
    for g, want in cases:
        depth, forest = treedepth_exact(g)
        ok &= depth == want and forest.height() == depth - 1 and is_subgraph(g, closure(forest))
    dt = time.perf_counter() - t0
    report("10 treedepth oracle", ok and dt < 60, f"{len(cases)} graphs, {dt:.2f}s")


def test_11_translation_equivalences():
    t0 = time.perf_counter()
    rng = random.Random(77)
    agree = 0
    for idx in range(500):
        n, k = rng.randint(1, 8), rng.randint(1, 3)
        fam = sample_random_family(n, k, rng.choice([0.15, 0.3, 0.5, 0.8]), idx, list_mode=idx % 2 == 1)
        direct = set()
        verts = sorted(fam.universal_vertices)
        for choice in product(*(fam.memberships[v] for v in verts)):
            asg = dict(zip(verts, choice))
            if not any(asg[u] == i == asg[v] for i, g in enumerate(fam.members, start=1) for u, v in g.edges):
                direct.add(frozenset(asg.items()))
        as_family = {frozenset(c.assignment.items()) for c in all_cooperative_colorings(fam)}
        m = family_to_adapted(fam)
        m = EdgeColoredMultigraph(m.vertices, m.colored_edges, m.palette_size,
                                  {v: frozenset(ix) for v, ix in fam.memberships.items()})
        as_adapted = {frozenset(c.assignment.items()) for c in brute_force_adapted(m, range(1, k + 1))}
        h = family_to_transversal(fam)
        as_transversal = {frozenset(transversal_to_coloring(h, tr).assignment.items())
                          for tr in h.independent_transversals()}
        agree += direct == as_family == as_adapted == as_transversal
    dt = time.perf_counter() - t0
    report("11 translation equivalences", agree == 500 and dt < 120, f"{agree}/500 agree, {dt:.1f}s")
