"""Steady-state optimizers: the haploid EA, the haploid-diploid EA and the 2P-pool control.

All three engines share the same cycle: pick parents, recombine, choose one
child, flip one bit, evaluate it once and overwrite the current worst member.
They differ only in what selection sees:

* ``EA``   - binary tournaments over the haploid population itself.
* ``HDEA`` - each member is paired with a random other member to form a
  temporary diploid whose fitness is the mean of the two cached fitnesses;
  tournaments pick two diploids, each undergoes two-step meiosis, one gamete
  is drawn from each and one of those two becomes the offspring.
* ``H2P``  - tournaments over a temporary pool of all members plus ``p``
  members drawn with replacement, each keeping its own fitness.

No engine ever re-evaluates an existing member, so every run costs exactly
``p + generations`` evaluations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConfigurationError
from .genetics import (
    Population,
    _crossover,
    _draw_gamete,
    _meiosis,
    _point_mutate,
    _tournament,
    _worst,
)
from .nk_model import Landscape, _evaluate


class Algorithm(str, enum.Enum):
    EA = "EA"
    HDEA = "HDEA"
    H2P = "H2P"

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {Algorithm.EA: 0, Algorithm.HDEA: 1, Algorithm.H2P: 2}


# --- compiled kernels ------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _ea_offspring(members, fits, rng, child, spare, mutate):
    a = _tournament(fits, rng)
    b = _tournament(fits, rng)
    _crossover(members[a], members[b], rng, child, spare)
    if rng.integers(0, 2) == 1:
        child[:] = spare
    if mutate:
        _point_mutate(child, rng)
    return a, b


@numba.njit(cache=True, nogil=True)
def _hdea_offspring(members, fits, rng, partners, dfits, gametes_a, gametes_b, child, mutate):
    p = fits.shape[0]
    # B, C: pair every member with a distinct random partner; average cached fitnesses.
    for i in range(p):
        j = rng.integers(0, p - 1)
        if j >= i:
            j += 1
        partners[i] = j
        dfits[i] = (fits[i] + fits[j]) / 2.0
    # D: two diploid parents.
    a = _tournament(dfits, rng)
    b = _tournament(dfits, rng)
    # E: meiosis in each parent, one gamete from each.
    _meiosis(members[a], members[partners[a]], rng, gametes_a)
    ga = _draw_gamete(rng)
    _meiosis(members[b], members[partners[b]], rng, gametes_b)
    gb = _draw_gamete(rng)
    # F: one of the fused pair becomes the offspring.
    if rng.integers(0, 2) == 0:
        child[:] = gametes_a[ga]
    else:
        child[:] = gametes_b[gb]
    if mutate:
        _point_mutate(child, rng)
    return a, b


@numba.njit(cache=True, nogil=True)
def _h2p_offspring(members, fits, rng, pool, pool_fits, child, spare, mutate):
    p = fits.shape[0]
    for i in range(p):
        pool[i] = i
    for i in range(p, 2 * p):
        pool[i] = rng.integers(0, p)
    for i in range(2 * p):
        pool_fits[i] = fits[pool[i]]
    a = pool[_tournament(pool_fits, rng)]
    b = pool[_tournament(pool_fits, rng)]
    _crossover(members[a], members[b], rng, child, spare)
    if rng.integers(0, 2) == 1:
        child[:] = spare
    if mutate:
        _point_mutate(child, rng)
    return a, b


@numba.njit(cache=True, nogil=True)
def _insert(members, fits, child, fitness):
    slot = _worst(fits)
    members[slot, :] = child
    fits[slot] = fitness
    return slot


@numba.njit(cache=True, nogil=True)
def _run_loop(code, members, fits, links, tables, rng, history):
    p, n = members.shape
    child = np.empty(n, dtype=np.uint8)
    spare = np.empty(n, dtype=np.uint8)
    partners = np.empty(p, dtype=np.int64)
    dfits = np.empty(p, dtype=np.float64)
    gametes_a = np.empty((4, n), dtype=np.uint8)
    gametes_b = np.empty((4, n), dtype=np.uint8)
    pool = np.empty(2 * p, dtype=np.int64)
    pool_fits = np.empty(2 * p, dtype=np.float64)
    history[0] = fits.max()
    for g in range(1, history.shape[0]):
        if code == 0:
            _ea_offspring(members, fits, rng, child, spare, True)
        elif code == 1:
            _hdea_offspring(members, fits, rng, partners, dfits, gametes_a, gametes_b, child, True)
        else:
            _h2p_offspring(members, fits, rng, pool, pool_fits, child, spare, True)
        _insert(members, fits, child, _evaluate(child, links, tables))
        history[g] = fits.max()


# --- single steps ----------------------------------------------------------


def _check_step(pop: Population, ls: Landscape):
    if pop.n != ls.n:
        raise ConfigurationError(f"population genomes have length {pop.n}, landscape has n={ls.n}")


def _finish(pop, ls, child):
    out = pop.copy()
    _insert(out.members, out.fitnesses, child, _evaluate(child, ls.links, ls.tables))
    out.evaluations += 1
    return out


def ea_step(pop: Population, ls: Landscape, rng, *, mutate=True, trace=None) -> Population:
    """One steady-state EA cycle; returns a new population with one slot replaced."""
    _check_step(pop, ls)
    child = np.empty(pop.n, dtype=np.uint8)
    spare = np.empty(pop.n, dtype=np.uint8)
    a, b = _ea_offspring(pop.members, pop.fitnesses, rng, child, spare, mutate)
    if trace is not None:
        trace.update(parents=(int(a), int(b)), child=child.copy())
    return _finish(pop, ls, child)


def hdea_step(pop: Population, ls: Landscape, rng, *, mutate=True, trace=None) -> Population:
    """One haploid-diploid cycle; the temporary diploid population is discarded afterwards.

    When ``trace`` is a dict it receives the partner index per member, the
    diploid fitness vector, the two parent diploid indices, both parents'
    gamete sets and the offspring before evaluation.
    """
    _check_step(pop, ls)
    p, n = pop.members.shape
    partners = np.empty(p, dtype=np.int64)
    dfits = np.empty(p, dtype=np.float64)
    gametes_a = np.empty((4, n), dtype=np.uint8)
    gametes_b = np.empty((4, n), dtype=np.uint8)
    child = np.empty(n, dtype=np.uint8)
    a, b = _hdea_offspring(
        pop.members, pop.fitnesses, rng, partners, dfits, gametes_a, gametes_b, child, mutate
    )
    if trace is not None:
        trace.update(
            partners=partners,
            diploid_fitness=dfits,
            parents=(int(a), int(b)),
            gametes=(gametes_a, gametes_b),
            child=child.copy(),
        )
    return _finish(pop, ls, child)


def h2p_step(pop: Population, ls: Landscape, rng, *, mutate=True, trace=None) -> Population:
    """One EA cycle whose tournaments draw from a temporary pool of size ``2p``."""
    _check_step(pop, ls)
    p, n = pop.members.shape
    pool = np.empty(2 * p, dtype=np.int64)
    pool_fits = np.empty(2 * p, dtype=np.float64)
    child = np.empty(n, dtype=np.uint8)
    spare = np.empty(n, dtype=np.uint8)
    a, b = _h2p_offspring(pop.members, pop.fitnesses, rng, pool, pool_fits, child, spare, mutate)
    if trace is not None:
        trace.update(pool=pool, pool_fitness=pool_fits, parents=(int(a), int(b)), child=child.copy())
    return _finish(pop, ls, child)


STEPS = {Algorithm.EA: ea_step, Algorithm.HDEA: hdea_step, Algorithm.H2P: h2p_step}


# --- whole runs ------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    n: int
    k: int
    p: int
    generations: int
    algorithm: Algorithm
    seed: int
    landscape: Landscape

    def __post_init__(self):
        try:
            object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        except ValueError:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}") from None
        if self.p < 2:
            raise ConfigurationError(f"population size must be >= 2, got {self.p}")
        if self.generations < 0:
            raise ConfigurationError(f"generations must be >= 0, got {self.generations}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.landscape.n != self.n or self.landscape.k != self.k:
            raise ConfigurationError(
                f"landscape is (n={self.landscape.n}, k={self.landscape.k}), "
                f"config says (n={self.n}, k={self.k})"
            )
        if self.n < 2:
            raise ConfigurationError("one-point crossover needs n >= 2")


@dataclass(frozen=True, eq=False)
class RunRecord:
    best_history: np.ndarray
    final_best: float
    final_population: Population
    evaluations: int

    @property
    def final_mean(self) -> float:
        return float(self.final_population.fitnesses.mean())


def init_rng(seed: int):
    """Stream for the initial population; independent of the algorithm."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def variation_rng(seed: int, algorithm: Algorithm):
    """Stream for selection and variation; one per algorithm."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, Algorithm(algorithm).code)))


def run(cfg: RunConfig) -> RunRecord:
    """Initialise ``p`` random genomes and apply ``generations`` steady-state cycles.

    The initial population depends only on ``cfg.seed`` so runs of different
    algorithms with the same seed start from the same genomes.
    """
    ls = cfg.landscape
    pop = Population.random(ls, cfg.p, init_rng(cfg.seed))
    history = np.empty(cfg.generations + 1, dtype=np.float64)
    _run_loop(
        cfg.algorithm.code, pop.members, pop.fitnesses, ls.links, ls.tables,
        variation_rng(cfg.seed, cfg.algorithm), history,
    )
    pop.evaluations += cfg.generations
    return RunRecord(history, float(history[-1]), pop, pop.evaluations)
