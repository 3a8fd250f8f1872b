"""HyperLTL satisfiability checking via first-order logic encodings."""

from .formula import HyperFormula, Quantifier, parse, pretty
from .oracle import LassoTrace, LassoTraceSet, bounded_find_model, eval_hyperltl
from .solvers import Verdict

__version__ = "0.1.0"

__all__ = [
    "HyperFormula", "Quantifier", "parse", "pretty",
    "LassoTrace", "LassoTraceSet", "bounded_find_model", "eval_hyperltl",
    "Verdict", "__version__",
]
