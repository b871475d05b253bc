"""
EA against the haploid-diploid EA on one rugged landscape
=========================================================

Both engines start from the same population and spend exactly
``p + generations`` evaluations.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from nkhdea import engines as E
from nkhdea import nk_model as nk

ls = nk.generate(n=100, k=10, seed=1)
histories = {}
for algorithm in E.Algorithm:
    finals = []
    for seed in range(10):
        rec = E.run(E.RunConfig(100, 10, 30, 20_000, algorithm, seed, ls))
        finals.append(rec.final_best)
        if seed == 0:
            histories[algorithm.value] = rec.best_history
    print(f"{algorithm.value:5s} mean final best {np.mean(finals):.4f} "
          f"[{np.min(finals):.4f}, {np.max(finals):.4f}]  evaluations {rec.evaluations}")

fig, ax = plt.subplots()
for name, h in histories.items():
    ax.plot(h, label=name)
ax.set_xscale("log")
ax.set_xlabel("generation (one offspring each)")
ax.set_ylabel("best fitness in population")
ax.legend()
fig.savefig("ea_vs_hdea.svg")
print("wrote ea_vs_hdea.svg")
