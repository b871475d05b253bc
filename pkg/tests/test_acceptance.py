"""Exit criteria for the package.

Each test records a one-line verdict that pytest prints in an
"acceptance criteria" section at the end of the run. The two statistical
sweeps (about five minutes on one core) are shared between criteria.
Deselect with ``-m "not slow"``.
"""

import copy

import numpy as np
import pytest
from scipy import stats as sps

from nkhdea import bench, engines, genetics, nk_model, stats
from nkhdea.engines import Algorithm

pytestmark = pytest.mark.slow

MASTER_SEED = 0
TRIALS = 10_000

HEADLINE = bench.SweepConfig(
    n_values=(50, 100), k_values=(0, 6, 10, 15), p_values=(30,),
    algorithms=("EA", "HDEA"), master_seed=MASTER_SEED,
)


@pytest.fixture(scope="module")
def headline():
    return bench.run_sweep(HEADLINE)


def _significant_gain(result, n, k):
    cell = result.cell(n, k, 30)
    w = cell.welch[(Algorithm.HDEA, Algorithm.EA)]
    gain = cell.summaries[Algorithm.HDEA].mean - cell.summaries[Algorithm.EA].mean
    return gain > 0 and w.p_value < 0.05, f"K={k}: HDEA-EA={gain:+.5f} p={w.p_value:.3g}"


@pytest.mark.parametrize("n", [100, 50])
def test_c1_c2_hdea_beats_ea_on_rugged_landscapes(headline, criterion, n):
    label = {100: "C1", 50: "C2"}[n]
    results = [_significant_gain(headline, n, k) for k in (6, 10, 15)]
    k0 = headline.cell(n, 0, 30)
    detail = "; ".join(d for _, d in results)
    detail += f"; K=0 verdict {k0.verdict('HDEA', 'EA')} (not gated)"
    passed = all(ok for ok, _ in results)
    criterion(f"{label} HDEA > EA (Welch p<0.05), N={n}, K in {{6,10,15}}", passed, detail)
    assert passed, detail


def test_c3_k0_runs_reach_the_separable_optimum(headline, criterion):
    optimum = {}
    hits = {Algorithm.EA: 0, Algorithm.HDEA: 0}
    for row in bench.select(headline.rows, n=50, k=0, p=30):
        if row.landscape_idx not in optimum:
            ls = nk_model.generate(50, 0, row.landscape_seed)
            optimum[row.landscape_idx] = nk_model.separable_optimum(ls)
        hits[Algorithm(row.algorithm)] += row.final_best == optimum[row.landscape_idx]
    passed = all(h >= 90 for h in hits.values())
    detail = ", ".join(f"{a.value} {h}/100 exact" for a, h in hits.items())
    criterion("C3 K=0 optimum reached in >=90% of runs (N=50, P=30)", passed, detail)
    assert passed, detail


def test_c4_small_instances_near_brute_force_optimum(criterion):
    cfg = bench.SweepConfig(n_values=(12,), k_values=(4,), p_values=(30,),
                            algorithms=("EA", "HDEA"), master_seed=MASTER_SEED)
    result = bench.run_sweep(cfg)
    optimum = {}
    near = {Algorithm.EA: 0, Algorithm.HDEA: 0}
    for row in result.rows:
        if row.landscape_idx not in optimum:
            ls = nk_model.generate(12, 4, row.landscape_seed)
            optimum[row.landscape_idx] = nk_model.brute_force_optimum(ls)[1]
        near[Algorithm(row.algorithm)] += row.final_best >= 0.98 * optimum[row.landscape_idx]
    passed = all(v >= 90 for v in near.values())
    detail = ", ".join(f"{a.value} {v}/100 within 2%" for a, v in near.items())
    criterion("C4 N=12 K=4 runs reach >=98% of the brute-force optimum", passed, detail)
    assert passed, detail


def test_c5_evaluation_parity(headline, criterion):
    rows = bench.rows_from_csv(bench.rows_to_csv(headline.rows))
    bad = [r for r in rows if r.evaluations != r.p + HEADLINE.generations]
    passed = not bad and len(rows) == 1600
    criterion("C5 evaluations == P + generations for every run (CSV audit)", passed,
              f"{len(rows)} rows, {len(bad)} mismatches")
    assert passed


def test_c6_determinism_across_thread_counts(headline, criterion):
    again = bench.run_sweep(HEADLINE, threads=2)
    first, second = bench.rows_to_csv(headline.rows), bench.rows_to_csv(again.rows)
    passed = first == second
    criterion("C6 identical raw CSV for threads=1 and threads=2", passed,
              f"{len(first)} bytes, equal={passed}")
    assert passed


def _crossover_violations(rng):
    bad = 0
    for _ in range(TRIALS):
        n = int(rng.integers(2, 65))
        a, b = genetics.random_genome(n, rng), genetics.random_genome(n, rng)
        c1, c2 = genetics.one_point_crossover(a, b, rng)
        bad += not np.array_equal(np.sort([c1, c2], axis=0), np.sort([a, b], axis=0))
    return bad


def _mutation_violations(rng):
    bad = 0
    for _ in range(TRIALS):
        g = genetics.random_genome(int(rng.integers(1, 65)), rng)
        bad += int((genetics.point_mutate(g, rng) != g).sum()) != 1
    return bad


def _meiosis_violations(rng):
    ls = nk_model.generate(24, 5, seed=3)
    pop = genetics.Population.random(ls, 10, rng)
    bad = 0
    for _ in range(TRIALS):
        trace = {}
        nxt = engines.hdea_step(pop, ls, rng, mutate=False, trace=trace)
        # The four haploids of the two parent diploids.
        haploids = np.stack([pop.members[i] for a in trace["parents"]
                             for i in (a, trace["partners"][a])])
        ok = bool(np.all((haploids == trace["child"]).any(axis=0)))
        for gametes in trace["gametes"]:
            ok &= bool(np.all((gametes[2:] == gametes[0]) | (gametes[2:] == gametes[1])))
        bad += not ok
        pop = nxt
    return bad


def _replace_violations(rng):
    bad = 0
    for _ in range(TRIALS):
        p, n = int(rng.integers(2, 12)), int(rng.integers(1, 20))
        pop = genetics.Population(rng.integers(0, 2, (p, n)), rng.random(p).round(1))
        child = genetics.random_genome(n, rng)
        out = genetics.replace_worst(pop, child, float(rng.random()))
        slot = int(np.flatnonzero(pop.fitnesses == pop.fitnesses.min())[0])
        keep = np.arange(p) != slot
        bad += not (np.array_equal(out.members[keep], pop.members[keep])
                    and np.array_equal(out.fitnesses[keep], pop.fitnesses[keep])
                    and np.array_equal(out.members[slot], child) and out.p == p)
    return bad


def _tournament_violations(rng):
    bad = 0
    for _ in range(TRIALS):
        f = rng.random(int(rng.integers(2, 40))).round(1)
        i, j = genetics._pick_two(f.shape[0], copy.deepcopy(rng))
        winner = genetics.binary_tournament(f, rng)
        other = j if winner == i else i
        bad += winner not in (i, j) or i == j or f[winner] < f[other]
    return bad


def test_c7_operator_property_suite(criterion):
    rng = np.random.default_rng(MASTER_SEED)
    checks = {
        "crossover complementarity": _crossover_violations,
        "mutation Hamming-1": _mutation_violations,
        "meiosis allele provenance": _meiosis_violations,
        "replace-worst single slot": _replace_violations,
        "tournament dominance": _tournament_violations,
    }
    counts = {name: fn(rng) for name, fn in checks.items()}
    passed = not any(counts.values())
    detail = ", ".join(f"{name} {c}" for name, c in counts.items())
    criterion(f"C7 operator properties, {TRIALS} trials each, zero violations", passed, detail)
    assert passed, detail


def test_c8_welch_matches_reference(criterion):
    rng = np.random.default_rng(MASTER_SEED)
    worst = 0.0
    for _ in range(20):
        a = rng.normal(rng.uniform(-1, 1), rng.uniform(0.1, 2), int(rng.integers(2, 60)))
        b = rng.normal(rng.uniform(-1, 1), rng.uniform(0.1, 2), int(rng.integers(2, 60)))
        ours = stats.welch_t_test(a, b)
        ref = sps.ttest_ind(a, b, equal_var=False)
        worst = max(worst, abs(ours.t_statistic - ref.statistic), abs(ours.p_value - ref.pvalue))
    passed = worst <= 1e-6
    criterion("C8 Welch t-test vs scipy on 20 random pairs", passed, f"max abs error {worst:.2e}")
    assert passed


def test_c9_soft_population_size_and_pool_control(headline, criterion):
    cfg = bench.SweepConfig(n_values=(50, 100), k_values=(10, 15), p_values=(10, 30),
                            algorithms=("EA", "HDEA", "H2P"), master_seed=MASTER_SEED)
    result = bench.run_sweep(cfg)
    for n in (50, 100):
        for k in (10, 15):
            small = result.cell(n, k, 10).verdict("HDEA", "EA")
            pool = result.cell(n, k, 30).verdict("H2P", "EA")
            criterion(f"C9 (soft) N={n} K={k}", None,
                      f"P=10 HDEA vs EA: {small}; P=30 H2P vs EA: {pool}")
