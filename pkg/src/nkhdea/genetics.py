"""Bitstring variation, selection and replacement operators, plus two-step meiosis.

Genomes are 1-D ``uint8`` arrays of 0/1 alleles. Every stochastic operator
takes an explicit ``numpy.random.Generator``. The underscore-prefixed kernels
are compiled with numba and shared with the engines, so the public wrappers
here consume random numbers exactly as a full run does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidParameterError
from .nk_model import Landscape, as_genome, evaluate

# --- compiled kernels ------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _crossover_at(a, b, cut, child1, child2):
    n = a.shape[0]
    for i in range(cut):
        child1[i] = a[i]
        child2[i] = b[i]
    for i in range(cut, n):
        child1[i] = b[i]
        child2[i] = a[i]


@numba.njit(cache=True, nogil=True)
def _crossover(a, b, rng, child1, child2):
    cut = rng.integers(1, a.shape[0])
    _crossover_at(a, b, cut, child1, child2)
    return cut


@numba.njit(cache=True, nogil=True)
def _point_mutate(genome, rng):
    locus = rng.integers(0, genome.shape[0])
    genome[locus] ^= 1
    return locus


@numba.njit(cache=True, nogil=True)
def _pick_two(size, rng):
    i = rng.integers(0, size)
    j = rng.integers(0, size - 1)
    if j >= i:
        j += 1
    return i, j


@numba.njit(cache=True, nogil=True)
def _tournament(fitnesses, rng):
    i, j = _pick_two(fitnesses.shape[0], rng)
    if fitnesses[i] > fitnesses[j]:
        return i
    if fitnesses[j] > fitnesses[i]:
        return j
    return i if rng.integers(0, 2) == 0 else j


@numba.njit(cache=True, nogil=True)
def _worst(fitnesses):
    worst = 0
    for i in range(1, fitnesses.shape[0]):
        if fitnesses[i] < fitnesses[worst]:
            worst = i
    return worst


@numba.njit(cache=True, nogil=True)
def _meiosis(first, second, rng, gametes):
    gametes[0, :] = first
    gametes[1, :] = second
    return _crossover(first, second, rng, gametes[2], gametes[3])


@numba.njit(cache=True, nogil=True)
def _draw_gamete(rng):
    return rng.integers(0, 4)


# --- public operators ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Diploid:
    """An ordered pair of haploids whose fitness is the mean of their cached fitnesses."""

    first: np.ndarray
    second: np.ndarray
    fitness: float

    @classmethod
    def pair(cls, first, first_fitness, second, second_fitness):
        first = np.asarray(first, dtype=np.uint8)
        second = np.asarray(second, dtype=np.uint8)
        if first.shape != second.shape:
            raise InvalidParameterError("diploid genomes must have equal length")
        return cls(first, second, (first_fitness + second_fitness) / 2.0)


class Population:
    """``p`` haploid genomes with their cached fitnesses.

    ``members`` is a ``(p, n)`` uint8 array and ``fitnesses`` a length-``p``
    float64 array aligned with it. ``evaluations`` counts fitness evaluations
    spent on this population so far.
    """

    def __init__(self, members, fitnesses, evaluations=0):
        members = np.array(members, dtype=np.uint8)
        fitnesses = np.array(fitnesses, dtype=np.float64)
        if members.ndim != 2 or members.shape[0] < 2:
            raise InvalidParameterError("a population needs at least 2 members")
        if fitnesses.shape != (members.shape[0],):
            raise InvalidParameterError("fitnesses must align with members")
        self.members = members
        self.fitnesses = fitnesses
        self.evaluations = int(evaluations)

    @classmethod
    def evaluated(cls, ls: Landscape, members):
        """Build a population by evaluating every member on ``ls``."""
        members = np.asarray(members, dtype=np.uint8)
        fits = [evaluate(ls, m) for m in members]
        return cls(members, fits, evaluations=len(fits))

    @classmethod
    def random(cls, ls: Landscape, p: int, rng):
        return cls.evaluated(ls, [random_genome(ls.n, rng) for _ in range(p)])

    @property
    def p(self):
        return self.members.shape[0]

    @property
    def n(self):
        return self.members.shape[1]

    def copy(self):
        return Population(self.members, self.fitnesses, self.evaluations)

    def best(self):
        return float(self.fitnesses.max())

    def __len__(self):
        return self.p

    def __repr__(self):
        return f"Population(p={self.p}, n={self.n}, best={self.best():.6f})"


def random_genome(n: int, rng) -> np.ndarray:
    if n < 1:
        raise InvalidParameterError(f"genome length must be positive, got {n}")
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def _pair(a, b):
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.ndim != 1 or a.shape != b.shape:
        raise InvalidParameterError("crossover parents must be 1-D and of equal length")
    if a.shape[0] < 2:
        raise InvalidParameterError("crossover needs genomes of length >= 2")
    return a, b


def one_point_crossover(a, b, rng, cut=None):
    """Return the complementary children ``a[:c]+b[c:]`` and ``b[:c]+a[c:]``.

    ``c`` is drawn uniformly from ``1..n-1`` unless ``cut`` is given.
    """
    a, b = _pair(a, b)
    child1 = np.empty_like(a)
    child2 = np.empty_like(a)
    if cut is None:
        _crossover(a, b, rng, child1, child2)
    else:
        if not 1 <= cut <= a.shape[0] - 1:
            raise InvalidParameterError(f"cut must lie in [1, {a.shape[0] - 1}], got {cut}")
        _crossover_at(a, b, cut, child1, child2)
    return child1, child2


def point_mutate(genome, rng, locus=None):
    """Return a copy of ``genome`` with exactly one locus flipped."""
    g = np.array(genome, dtype=np.uint8)
    if g.ndim != 1 or g.shape[0] < 1:
        raise InvalidParameterError("cannot mutate an empty genome")
    if locus is None:
        _point_mutate(g, rng)
    else:
        g[locus] ^= 1
    return g


def binary_tournament(fitnesses, rng) -> int:
    """Pick two distinct indices uniformly and return the fitter; ties are a coin flip."""
    f = np.asarray(fitnesses, dtype=np.float64)
    if f.ndim != 1 or f.shape[0] < 2:
        raise InvalidParameterError("binary tournament needs at least 2 entries")
    return int(_tournament(f, rng))


def worst_index(fitnesses) -> int:
    return int(_worst(np.asarray(fitnesses, dtype=np.float64)))


def replace_worst(pop: Population, child, child_fitness: float) -> Population:
    """Replace the lowest-fitness member (lowest index on ties), even by a worse child.

    Returns a new population; ``pop`` is left untouched.
    """
    child = as_genome(child, pop.n)
    out = pop.copy()
    slot = _worst(out.fitnesses)
    out.members[slot] = child
    out.fitnesses[slot] = child_fitness
    return out


def meiosis(d: Diploid, rng, cut=None) -> np.ndarray:
    """Two-step meiosis: both parental copies plus the two crossover recombinants.

    Returns a ``(4, n)`` array ordered first, second, recombinant 1, recombinant 2.
    """
    a, b = _pair(d.first, d.second)
    gametes = np.empty((4, a.shape[0]), dtype=np.uint8)
    if cut is None:
        _meiosis(a, b, rng, gametes)
    else:
        gametes[0], gametes[1] = a, b
        gametes[2], gametes[3] = one_point_crossover(a, b, None, cut=cut)
    return gametes


def draw_gamete(gametes, rng) -> np.ndarray:
    gametes = np.asarray(gametes, dtype=np.uint8)
    if gametes.ndim != 2 or gametes.shape[0] != 4:
        raise InvalidParameterError("draw_gamete expects exactly four gametes")
    return gametes[_draw_gamete(rng)].copy()
