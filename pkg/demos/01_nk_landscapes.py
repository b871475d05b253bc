"""
NK landscapes: building, evaluating and saving them
====================================================

A landscape over length-``n`` bitstrings where each gene's contribution is
read from a random table indexed by its own allele and ``k`` linked genes.
"""

import tempfile
from pathlib import Path

import numpy as np

from nkhdea import nk_model as nk

# A tiny hand-built landscape: two genes, each reading the other.
tiny = nk.Landscape(2, 1, links=[[1], [0]],
                    tables=[[0.1, 0.2, 0.3, 0.4], [0.5, 0.6, 0.7, 0.8]])
for g in ([0, 0], [0, 1], [1, 0], [1, 1]):
    print(g, nk.evaluate(tiny, g))
print("optimum:", nk.brute_force_optimum(tiny))

# Random landscapes are a pure function of (n, k, seed).
ls = nk.generate(n=20, k=4, seed=2018)
print(ls, "links of gene 0:", ls.links[0], "table size:", ls.tables.shape[1])

rng = np.random.default_rng(0)
sample = [nk.evaluate(ls, rng.integers(0, 2, ls.n)) for _ in range(2000)]
print(f"random genomes: mean {np.mean(sample):.3f}, best {np.max(sample):.3f}")

genome, best = nk.brute_force_optimum(ls)
print("global optimum", "".join(map(str, genome)), round(best, 4))

# Ruggedness: count 1-flip local optima as k grows (n = 14, exhaustive).
for k in (0, 2, 4, 8, 13):
    land = nk.generate(14, k, seed=k)
    codes = np.arange(1 << 14)
    genomes = ((codes[:, None] >> np.arange(13, -1, -1)) & 1).astype(np.uint8)
    fit = np.array([nk.evaluate(land, g) for g in genomes])
    neighbours = codes[:, None] ^ (1 << np.arange(14))
    local = np.sum(fit[:, None] >= fit[neighbours], axis=1) == 14
    print(f"k={k:2d}: {local.sum():4d} local optima")

# Landscapes persist as plain text and round-trip exactly.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "ls.nk"
    nk.save(ls, path)
    print(path.read_text().splitlines()[0])
    back = nk.load(path)
    assert all(nk.evaluate(back, g) == nk.evaluate(ls, g) for g in rng.integers(0, 2, (100, 20)))
