"""NK landscapes with a steady-state haploid EA and a haploid-diploid EA."""

__version__ = "0.1.0"

from .engines import Algorithm, RunConfig, RunRecord, ea_step, h2p_step, hdea_step, run
from .genetics import (
    Diploid,
    Population,
    binary_tournament,
    draw_gamete,
    meiosis,
    one_point_crossover,
    point_mutate,
    random_genome,
    replace_worst,
)
from .nk_model import Landscape, brute_force_optimum, evaluate, generate, load, save
from .stats import summarize, welch_t_test
