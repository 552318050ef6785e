"""Product-form queueing network analysis."""

from .bounds import bounds_closed, bounds_open
from .conv import normalization_constants, solve_closed_single_conv
from .model import BoundsResult, NetworkModel, NetworkSolution, aggregate
from .multiclass import lattice_levels, solve_closed_multi_bs, solve_closed_multi_mva
from .mva import solve_closed_single_mva, solve_closed_single_mva_ld
from .open import solve_open_multi, solve_open_single
from .visits import visits_closed, visits_open

__all__ = [
    "BoundsResult",
    "NetworkModel",
    "NetworkSolution",
    "aggregate",
    "bounds_closed",
    "bounds_open",
    "lattice_levels",
    "normalization_constants",
    "solve_closed_multi_bs",
    "solve_closed_multi_mva",
    "solve_closed_single_conv",
    "solve_closed_single_mva",
    "solve_closed_single_mva_ld",
    "solve_open_multi",
    "solve_open_single",
    "visits_closed",
    "visits_open",
]
