"""Optimal lambda reduction with fan matching by a side-effecting identity table."""

from .terms import App, Lam, MarkedVar, Var, alpha_eq, free_vars, parse, substitute, to_str
from .oracle import normalize_normal_order
from .encoding import build_initial
from .engine import normalize, run

__all__ = [
    "App", "Lam", "MarkedVar", "Var", "alpha_eq", "free_vars", "parse",
    "substitute", "to_str", "normalize_normal_order", "build_initial",
    "normalize", "run",
]
