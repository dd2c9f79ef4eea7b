"""核心模块

Lie理论基础、精确Laurent多项式、簇变异与势函数、ς 与弦锥、
多面体冗余分析以及特殊单词。
"""

from .cluster_engine import (
    Seed,
    full_potential,
    mutate_seed,
    optimized_frozen,
    potential,
    potential_via_separation,
    seed_from_word,
)
from .exact_poly import LaurentPolynomial, TropicalForm, substitute_monomials, tropicalize
from .lie_core import CartanDatum, Word, cartan_matrix, move_path, parse_cartan, reduced_words, require_reduced_w0
from .stringcone import StringSystem, ca_matrix, psi, string_system, varsigma

__all__ = [
    # Lie理论
    "CartanDatum",
    "Word",
    "cartan_matrix",
    "parse_cartan",
    "reduced_words",
    "require_reduced_w0",
    "move_path",
    # 多项式
    "LaurentPolynomial",
    "TropicalForm",
    "substitute_monomials",
    "tropicalize",
    # 簇
    "Seed",
    "seed_from_word",
    "mutate_seed",
    "optimized_frozen",
    "potential",
    "full_potential",
    "potential_via_separation",
    # 弦锥
    "StringSystem",
    "ca_matrix",
    "varsigma",
    "string_system",
    "psi",
]
