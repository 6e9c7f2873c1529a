"""Kazhdan-Lusztig polynomials, their inverses and Deodhar's parabolic
variants for Weyl groups of generalized Cartan matrices, in exact arithmetic."""

from .coxeter import (
    CoxeterSystem,
    Element,
    GeneralizedCartanMatrix,
    ParabolicData,
    build_system,
    cartan_preset,
)
from . import coxeter as _coxeter, hecke as _hecke, parabolic as _parabolic
from .hecke import HeckeElement, KLTable, inverse_kl, kl_element
from .laurent import LaurentPoly, q
from .parabolic import (
    ParabolicContext,
    ParabolicElement,
    ParabolicKLTable,
    parabolic_inverse_kl,
    parabolic_kl_element,
)

__all__ = [
    "clear_caches",
    "CoxeterSystem",
    "Element",
    "GeneralizedCartanMatrix",
    "ParabolicData",
    "build_system",
    "cartan_preset",
    "HeckeElement",
    "KLTable",
    "inverse_kl",
    "kl_element",
    "LaurentPoly",
    "q",
    "ParabolicContext",
    "ParabolicElement",
    "ParabolicKLTable",
    "parabolic_inverse_kl",
    "parabolic_kl_element",
]


def clear_caches() -> None:
    """Drop the module-level memo caches (bar of basis elements, coset decompositions).

    Per-system caches and KL tables are unaffected; this is for cold timings
    and for releasing memory after large runs.
    """
    _hecke._bar_T.cache_clear()
    _parabolic._BAR_TJ_CACHE.clear()
    _coxeter._decompose.cache_clear()
