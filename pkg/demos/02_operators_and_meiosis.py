"""
Variation operators and two-step meiosis
========================================
"""

import numpy as np

from nkhdea import genetics as gx

rng = np.random.default_rng(7)


def show(g):
    return "".join(map(str, g))


a = np.zeros(10, dtype=np.uint8)
b = np.ones(10, dtype=np.uint8)

c1, c2 = gx.one_point_crossover(a, b, rng)
print("crossover:", show(c1), show(c2))
print("mutation: ", show(gx.point_mutate(a, rng)))

# A diploid carries two haploids; its fitness is their mean.
d = gx.Diploid.pair(a, 0.4, b, 0.6)
print("diploid fitness", d.fitness)

# Meiosis yields both parental copies plus the two recombinants.
for g in gx.meiosis(d, rng):
    print("gamete", show(g))
print("drawn:", show(gx.draw_gamete(gx.meiosis(d, rng), rng)))

# Binary tournaments favour the fitter of two distinct random entries.
fits = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
wins = np.bincount([gx.binary_tournament(fits, rng) for _ in range(10_000)], minlength=5)
print("tournament win share:", np.round(wins / wins.sum(), 3))  # about (2i)/20

# Steady-state replacement always overwrites the worst member.
pop = gx.Population(np.zeros((3, 4)), [0.3, 0.1, 0.5])
print(gx.replace_worst(pop, np.ones(4), 0.05).fitnesses)
