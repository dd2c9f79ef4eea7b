"""双重描述法：极射线与独立的面判定

只处理尖的、满维的锥 {t : A t ≥ 0}；极射线秩不足 d 时拒绝。相邻性用紧约束位集的组合判定。
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Sequence, Tuple

import sympy

from app.config.settings import get_settings
from app.core.polyhedral.redundancy import InequalitySystem, RedundancyReport, primitive_owners
from app.utils.exceptions import OracleLimitError
from app.utils.logger import get_logger

logger = get_logger(__name__)

Vector = Tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _primitive(values: Sequence[Fraction]) -> Vector:
    denominators = [Fraction(v).denominator for v in values]
    scale = reduce(lambda x, y: x * y // gcd(x, y), denominators, 1)
    integers = [int(Fraction(v) * scale) for v in values]
    divisor = reduce(gcd, (abs(v) for v in integers), 0) or 1
    return tuple(v // divisor for v in integers)


def _popcount(bits: int) -> int:
    return bin(bits).count("1")


def _check_limits(system: InequalitySystem) -> None:
    scan = get_settings().scan
    if system.dimension > scan.oracle_max_dimension or len(system) > scan.oracle_max_inequalities:
        raise OracleLimitError(
            "System exceeds double-description oracle limits",
            details={
                "dimension": system.dimension,
                "inequalities": len(system),
                "max_dimension": scan.oracle_max_dimension,
                "max_inequalities": scan.oracle_max_inequalities,
            },
        )


def _initial_basis(forms: List[Vector], dimension: int) -> List[int]:
    chosen: List[int] = []
    for index, form in enumerate(forms):
        if sympy.Matrix([forms[i] for i in chosen] + [form]).rank() > len(chosen):
            chosen.append(index)
            if len(chosen) == dimension:
                break
    return chosen


def extreme_rays(system: InequalitySystem) -> Tuple[Vector, ...]:
    """逐条加入不等式的双重描述迭代

    Raises:
        OracleLimitError: 超出规模限制，或锥不是尖的、不是满维的
    """
    _check_limits(system)
    forms = system.forms
    d = system.dimension
    basis = _initial_basis(forms, d)
    if len(basis) < d:
        raise OracleLimitError("Cone is not pointed", details={"rank": len(basis), "dimension": d})

    inverse = sympy.Matrix([forms[i] for i in basis]).inv()
    rays: List[Vector] = []
    tight: Dict[Vector, int] = {}
    for column in range(d):
        ray = _primitive([Fraction(int(inverse[r, column].p), int(inverse[r, column].q)) for r in range(d)])
        rays.append(ray)
        tight[ray] = sum(1 << basis[j] for j in range(d) if j != column)

    for index, a in enumerate(forms):
        if index in basis:
            continue
        values = {ray: _dot(a, ray) for ray in rays}
        positive = [r for r in rays if values[r] > 0]
        negative = [r for r in rays if values[r] < 0]
        zero = [r for r in rays if values[r] == 0]
        next_rays = positive + zero
        next_tight = {r: tight[r] for r in positive}
        next_tight.update({r: tight[r] | (1 << index) for r in zero})
        for p in positive:
            for n in negative:
                common = tight[p] & tight[n]
                if _popcount(common) < d - 2:
                    continue
                if any(other not in (p, n) and tight[other] & common == common for other in rays):
                    continue
                vp, vn = values[p], values[n]
                ray = _primitive([Fraction(vp * x - vn * y) for x, y in zip(n, p)])
                if ray not in next_tight:
                    next_rays.append(ray)
                next_tight[ray] = common | (1 << index)
        rays = next_rays
        tight = next_tight
        logger.trace(f"double description after inequality {index}: {len(rays)} rays")
    rank = sympy.Matrix(rays).rank() if rays else 0
    if rank < d:
        # 锥落在真子空间里，紧射线秩判定不再对应面
        raise OracleLimitError("Cone is not full-dimensional", details={"rank": rank, "dimension": d})
    return tuple(sorted(rays))


@dataclass(frozen=True)
class BruteForceReport:
    rays: Tuple[Vector, ...]
    facet_flags: Tuple[bool, ...]

    @property
    def facet_count(self) -> int:
        return sum(self.facet_flags)

    def agrees_with(self, report: RedundancyReport) -> bool:
        return self.facet_flags == report.facet_flags


def brute_force_redundancy(system: InequalitySystem) -> BruteForceReport:
    """a 是面 ⇔ 在 a 上取等的极射线张成 (d−1) 维子空间

    同一正倍数类只有第一条可以是面，与 classify_redundancy 的 DUPLICATE 一致。
    """
    rays = extreme_rays(system)
    d = system.dimension
    owners = primitive_owners(system.forms)
    flags = []
    for index, form in enumerate(system.forms):
        if owners[index] != index:
            flags.append(False)
            continue
        tight_rays = [ray for ray in rays if _dot(form, ray) == 0]
        rank = sympy.Matrix(tight_rays).rank() if tight_rays else 0
        flags.append(rank == d - 1 and any(v != 0 for v in form))
    return BruteForceReport(rays=rays, facet_flags=tuple(flags))


__all__ = [
    "extreme_rays",
    "BruteForceReport",
    "brute_force_redundancy",
]
