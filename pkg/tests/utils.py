"""测试工具模块 - 随机多项式与随机不等式系统的构建器

所有构建器都使用固定种子的 numpy 随机数发生器，结果可复现。
"""

from math import gcd
from functools import reduce
from typing import List, Tuple

import numpy as np

from app.core.exact_poly import LaurentPolynomial
from app.core.polyhedral.redundancy import InequalitySystem


class TestDataBuilder:
    """测试数据构建器"""

    __test__ = False

    @staticmethod
    def random_polynomial(
        nvars: int, terms: int, seed: int = 0, low: int = -2, high: int = 2, max_coefficient: int = 3
    ) -> LaurentPolynomial:
        """正整数系数的随机Laurent多项式"""
        rng = np.random.default_rng(seed)
        items = []
        for _ in range(terms):
            exponent = tuple(int(x) for x in rng.integers(low, high + 1, size=nvars))
            items.append((exponent, int(rng.integers(1, max_coefficient + 1))))
        return LaurentPolynomial.from_terms(nvars, items)

    @staticmethod
    def random_forms(dimension: int, count: int, seed: int = 0, bound: int = 2) -> List[Tuple[int, ...]]:
        """随机的本原整向量，两两不同且坐标和为正

        坐标和为正保证全 1 向量严格满足所有不等式，锥是满维的。
        """
        rng = np.random.default_rng(seed)
        forms: List[Tuple[int, ...]] = []
        while len(forms) < count:
            vector = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=dimension))
            if sum(vector) <= 0:
                continue
            divisor = reduce(gcd, (abs(v) for v in vector))
            vector = tuple(v // divisor for v in vector)
            if vector not in forms:
                forms.append(vector)
        return forms

    @classmethod
    def random_system(cls, dimension: int, count: int, seed: int = 0) -> InequalitySystem:
        """包含全部坐标不等式的随机系统，因此锥是尖的"""
        axes = [tuple(1 if j == i else 0 for j in range(dimension)) for i in range(dimension)]
        extra = [form for form in cls.random_forms(dimension, count + dimension, seed) if form not in axes]
        return InequalitySystem.from_forms(axes + extra[:count], dimension)
