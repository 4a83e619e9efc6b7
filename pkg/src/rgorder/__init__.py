"""Random graph orders: exact dimension, realiser constructions and bound numerics."""
from .dimension import DimensionResult, exact_dimension, realiser_of
from .numerics import bipartite_lower_curve, dilog, f_eval, gnp_lower_curve, solve_alpha, upset_pmf
from .poset import Poset, from_dag, is_realiser
from .random_orders import ModelSpec, sample, standard_example

__all__ = [
    "DimensionResult", "ModelSpec", "Poset", "bipartite_lower_curve", "dilog", "exact_dimension",
    "f_eval", "from_dag", "gnp_lower_curve", "is_realiser", "realiser_of", "sample", "solve_alpha",
    "standard_example", "upset_pmf",
]
__version__ = "0.1.0"
