import numpy as np
import pytest

from nkhdea import engines as E
from nkhdea import nk_model as nk
from nkhdea.errors import ConfigurationError
from nkhdea.genetics import Population


@pytest.fixture(scope="module")
def ls():
    return nk.generate(20, 3, seed=77)


def uniform_pop(ls, p, genome=None):
    g = np.zeros(ls.n, dtype=np.uint8) if genome is None else genome
    return Population.evaluated(ls, np.tile(g, (p, 1)))


def random_pop(ls, p, seed):
    return Population.random(ls, p, np.random.default_rng(seed))


def hamming(a, b):
    return int((np.asarray(a) != np.asarray(b)).sum())


@pytest.mark.parametrize("step", [E.ea_step, E.hdea_step, E.h2p_step])
def test_uniform_population_yields_a_point_mutant(ls, step):
    rng = np.random.default_rng(1)
    for p in (2, 5):
        pop = uniform_pop(ls, p)
        out = step(pop, ls, rng)
        g = pop.members[0]
        changed = [i for i in range(p) if not np.array_equal(out.members[i], g)]
        assert len(changed) == 1
        assert hamming(out.members[changed[0]], g) == 1
        assert out.fitnesses[changed[0]] == nk.evaluate(ls, out.members[changed[0]])


@pytest.mark.parametrize("step", [E.ea_step, E.hdea_step, E.h2p_step])
def test_one_evaluation_per_step_and_one_slot(ls, step):
    rng = np.random.default_rng(2)
    pop = random_pop(ls, 8, 3)
    tables_before = ls.tables.copy()
    for _ in range(50):
        out = step(pop, ls, rng)
        assert out.evaluations == pop.evaluations + 1
        assert int((out.members != pop.members).any(axis=1).sum()) <= 1
        assert int((out.fitnesses != pop.fitnesses).sum()) <= 1
        pop = out
    assert np.array_equal(ls.tables, tables_before)


@pytest.mark.parametrize("step", [E.ea_step, E.hdea_step, E.h2p_step])
def test_steps_are_deterministic(ls, step):
    def trajectory():
        rng = np.random.default_rng(11)
        pop = random_pop(ls, 6, 4)
        out = []
        for _ in range(100):
            pop = step(pop, ls, rng)
            out.append(pop.members.copy())
        return np.stack(out)

    assert np.array_equal(trajectory(), trajectory())


def test_hdea_uniform_population_diploid_fitness(ls):
    pop = uniform_pop(ls, 6, np.ones(ls.n, dtype=np.uint8))
    trace = {}
    E.hdea_step(pop, ls, np.random.default_rng(0), trace=trace)
    assert np.all(trace["diploid_fitness"] == pop.fitnesses[0])


def test_hdea_pairs_of_two_are_forced(ls):
    rng = np.random.default_rng(5)
    pop = random_pop(ls, 2, 1)
    for _ in range(20):
        trace = {}
        pop = E.hdea_step(pop, ls, rng, trace=trace)
        assert trace["partners"].tolist() == [1, 0]


def test_hdea_diploid_fitness_recomputed_every_step(ls):
    rng = np.random.default_rng(6)
    pop = random_pop(ls, 10, 2)
    for _ in range(300):
        trace = {}
        new = E.hdea_step(pop, ls, rng, trace=trace)
        partners = trace["partners"]
        assert np.all(partners != np.arange(pop.p))
        f = [nk.evaluate(ls, m) for m in pop.members]
        expected = [(f[i] + f[j]) / 2 for i, j in enumerate(partners)]
        assert trace["diploid_fitness"].tolist() == expected
        pop = new


def test_hdea_partners_are_uniform_over_others(ls):
    rng = np.random.default_rng(7)
    pop = random_pop(ls, 4, 3)
    counts = np.zeros((4, 4))
    for _ in range(3000):
        trace = {}
        E.hdea_step(pop, ls, rng, trace=trace)
        counts[np.arange(4), trace["partners"]] += 1
    assert np.all(np.diag(counts) == 0)
    assert np.allclose(counts[~np.eye(4, dtype=bool)] / 3000, 1 / 3, atol=0.04)


def test_hdea_gametes_come_from_parent_diploids(ls):
    rng = np.random.default_rng(8)
    pop = random_pop(ls, 6, 5)
    for _ in range(200):
        trace = {}
        E.hdea_step(pop, ls, rng, mutate=False, trace=trace)
        for parent, gametes in zip(trace["parents"], trace["gametes"]):
            first = pop.members[parent]
            second = pop.members[trace["partners"][parent]]
            assert np.array_equal(gametes[0], first)
            assert np.array_equal(gametes[1], second)
            assert np.all((gametes[2:] == first) | (gametes[2:] == second))
        child = trace["child"]
        assert any(np.array_equal(child, g) for gs in trace["gametes"] for g in gs)


def test_h2p_pool(ls):
    rng = np.random.default_rng(9)
    pop = random_pop(ls, 7, 6)
    for _ in range(100):
        trace = {}
        E.h2p_step(pop, ls, rng, trace=trace)
        pool = trace["pool"]
        assert pool.shape == (14,)
        assert set(range(7)) <= set(pool.tolist())
        assert trace["pool_fitness"].tolist() == pop.fitnesses[pool].tolist()


def test_ea_child_is_mutated_recombinant(ls):
    rng = np.random.default_rng(10)
    pop = random_pop(ls, 6, 7)
    for _ in range(200):
        trace = {}
        E.ea_step(pop, ls, rng, mutate=False, trace=trace)
        a, b = (pop.members[i] for i in trace["parents"])
        assert np.all((trace["child"] == a) | (trace["child"] == b))


def test_step_rejects_mismatched_population(ls):
    pop = random_pop(nk.generate(10, 1, seed=0), 4, 0)
    with pytest.raises(ConfigurationError):
        E.ea_step(pop, ls, np.random.default_rng(0))


def cfg(ls, algorithm="HDEA", generations=500, p=10, seed=3):
    return E.RunConfig(ls.n, ls.k, p, generations, algorithm, seed, ls)


def test_empty_run(ls):
    rec = E.run(cfg(ls, generations=0))
    assert rec.best_history.shape == (1,)
    assert rec.evaluations == 10
    assert rec.final_best == rec.final_population.fitnesses.max()


@pytest.mark.parametrize("algorithm", list(E.Algorithm))
def test_run_bookkeeping(ls, algorithm):
    rec = E.run(cfg(ls, algorithm, generations=1000))
    assert rec.best_history.shape == (1001,)
    assert rec.evaluations == 1010
    assert rec.final_best == rec.best_history[-1] == rec.final_population.fitnesses.max()
    assert np.all((rec.best_history >= 0) & (rec.best_history < 1))
    fits = [nk.evaluate(ls, m) for m in rec.final_population.members]
    assert rec.final_population.fitnesses.tolist() == fits


@pytest.mark.parametrize("algorithm", list(E.Algorithm))
def test_run_matches_public_steps(ls, algorithm):
    rec = E.run(cfg(ls, algorithm, generations=300))
    pop = Population.random(ls, 10, E.init_rng(3))
    rng = E.variation_rng(3, algorithm)
    history = [pop.best()]
    for _ in range(300):
        pop = E.STEPS[algorithm](pop, ls, rng)
        history.append(pop.best())
    assert np.array_equal(pop.members, rec.final_population.members)
    assert history == rec.best_history.tolist()
    assert pop.evaluations == rec.evaluations


def test_runs_share_initial_population(ls):
    starts = {
        a: Population.random(ls, 10, E.init_rng(42)).members for a in E.Algorithm
    }
    assert all(np.array_equal(starts[E.Algorithm.EA], m) for m in starts.values())
    ea, hdea = E.run(cfg(ls, "EA", seed=42)), E.run(cfg(ls, "HDEA", seed=42))
    assert ea.best_history[0] == hdea.best_history[0]


def test_run_is_deterministic(ls):
    a, b = E.run(cfg(ls, generations=2000)), E.run(cfg(ls, generations=2000))
    assert np.array_equal(a.best_history, b.best_history)
    assert np.array_equal(a.final_population.members, b.final_population.members)


def test_k0_runs_reach_the_separable_optimum():
    hits = 0
    for seed in range(10):
        ls0 = nk.generate(50, 0, seed=seed)
        for algorithm in ("EA", "HDEA"):
            rec = E.run(E.RunConfig(50, 0, 30, 20_000, algorithm, seed, ls0))
            hits += rec.final_best == nk.separable_optimum(ls0)
    assert hits >= 18


@pytest.mark.parametrize(
    "kwargs",
    [dict(p=1), dict(generations=-1), dict(algorithm="GA"), dict(seed=-1), dict(n=21)],
)
def test_bad_config(ls, kwargs):
    base = dict(n=ls.n, k=ls.k, p=10, generations=10, algorithm="EA", seed=0, landscape=ls)
    base.update(kwargs)
    with pytest.raises(ConfigurationError):
        E.RunConfig(**base)
