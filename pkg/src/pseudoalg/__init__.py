"""Exact Poisson H-pseudoalgebras over cocommutative Hopf kernels, with law checkers."""

from .hmodule import FiniteDimModule, FreeModule, HLinearMap, HModuleElement, act, hlinear_check
from .polytensor import PolyTensor, apply_module_map, apply_perm, compose_bracket, straighten
from .pseudo_core import PseudoStructure, bracket_eval, graded_sign, run_suite
from .report import Report
from .scalars_hopf import HopfElement, HopfKernel, antipode, coproduct_iter, counit, hopf_product

__version__ = "0.1.0"

__all__ = [
    "FiniteDimModule",
    "FreeModule",
    "HLinearMap",
    "HModuleElement",
    "HopfElement",
    "HopfKernel",
    "PolyTensor",
    "PseudoStructure",
    "Report",
    "act",
    "antipode",
    "apply_module_map",
    "apply_perm",
    "bracket_eval",
    "compose_bracket",
    "coproduct_iter",
    "counit",
    "graded_sign",
    "hlinear_check",
    "hopf_product",
    "run_suite",
    "straighten",
]
