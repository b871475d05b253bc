"""
A reduced sweep with CSV, summary table, plot and t-tests
=========================================================

The same machinery behind ``nkhdea run``; the defaults of ``SweepConfig``
reproduce the full 10 landscapes x 10 runs x 20,000 generation study.
"""

from nkhdea import bench, report
from nkhdea.engines import Algorithm

cfg = bench.SweepConfig(
    n_values=(50,), k_values=(0, 4, 10), p_values=(30,),
    landscapes_per_cell=5, runs_per_landscape=4, generations=5_000,
    algorithms=("EA", "HDEA", "H2P"), master_seed=42,
)
result = bench.run_sweep(cfg, landscape_dir="sweep_out/landscapes")
paths = report.report(result, "sweep_out", formats=("csv", "table", "plot"))
print(open("sweep_out/summary.txt").read())
print("files:", *paths, sep="\n  ")

cell = result.cell(50, 10, 30)
w = cell.welch[(Algorithm.HDEA, Algorithm.EA)]
print(f"N=50 K=10: t={w.t_statistic:.3f} df={w.degrees_of_freedom:.1f} p={w.p_value:.4f}"
      f" -> {cell.verdict('HDEA', 'EA')}")
