"""精确有理数单纯形（第一阶段）

只判断可行性：求 x ≥ 0 使 A x = b。人工变量起始基，Bland规则选主元，
全部运算使用 Fraction，没有任何数值容差。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from app.utils.exceptions import DimensionMismatchError
from app.utils.logger import get_logger

logger = get_logger(__name__)

Vector = Tuple[int, ...]


class Phase1Tableau:
    """第一阶段单纯形表

    列 0..n-1 为结构变量，n..n+m-1 为人工变量。
    目标为最小化人工变量之和，cost 行存放既约成本。
    """

    def __init__(self, rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
        if len(rows) != len(rhs):
            raise DimensionMismatchError(len(rows), len(rhs), "right-hand side")
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        width = self.n + self.m
        self.A: List[List[Fraction]] = []
        self.b: List[Fraction] = []
        for index, (row, value) in enumerate(zip(rows, rhs)):
            if len(row) != self.n:
                raise DimensionMismatchError(self.n, len(row), "constraint row")
            sign = -1 if value < 0 else 1
            full = [Fraction(sign * x) for x in row] + [Fraction(0)] * self.m
            full[self.n + index] = Fraction(1)
            self.A.append(full)
            self.b.append(Fraction(sign * value))
        self.basis = list(range(self.n, width))
        self.cost = [Fraction(0)] * width
        for j in range(self.n):
            self.cost[j] = -sum((self.A[i][j] for i in range(self.m)), Fraction(0))
        self.objective = -sum(self.b, Fraction(0))
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        piv = self.A[i][j]
        row = [value / piv for value in self.A[i]]
        self.A[i] = row
        self.b[i] = self.b[i] / piv
        for k in range(self.m):
            if k != i and self.A[k][j] != 0:
                f = self.A[k][j]
                self.A[k] = [a - f * r for a, r in zip(self.A[k], row)]
                self.b[k] -= f * self.b[i]
        f = self.cost[j]
        if f != 0:
            self.cost = [a - f * r for a, r in zip(self.cost, row)]
            self.objective -= f * self.b[i]
        self.basis[i] = j
        self.pivots += 1

    def bland_step(self) -> str:
        entering = next((j for j in range(len(self.cost)) if self.cost[j] < 0), None)
        if entering is None:
            return "optimal"
        candidates = [
            (self.b[i] / self.A[i][entering], self.basis[i], i)
            for i in range(self.m)
            if self.A[i][entering] > 0
        ]
        if not candidates:
            # 第一阶段目标有下界 0，不会出现
            return "unbounded"
        _, _, leaving = min(candidates)
        self.pivot(leaving, entering)
        return "go_on"

    def solve(self) -> Optional[Tuple[Fraction, ...]]:
        """返回一个可行解的结构部分；不可行时返回 None"""
        status = "go_on"
        while status == "go_on":
            status = self.bland_step()
        if -self.objective != 0:
            return None
        solution = [Fraction(0)] * self.n
        for i, var in enumerate(self.basis):
            if var < self.n:
                solution[var] = self.b[i]
        return tuple(solution)


def solve_nonnegative(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[Tuple[Fraction, ...]]:
    """求 x ≥ 0 使 rows · x = rhs"""
    if not rows:
        return ()
    tableau = Phase1Tableau([[Fraction(v) for v in row] for row in rows], [Fraction(v) for v in rhs])
    if tableau.n == 0:
        return () if all(v == 0 for v in rhs) else None
    result = tableau.solve()
    logger.trace(f"phase-1 finished after {tableau.pivots} pivots, feasible={result is not None}")
    return result


@dataclass(frozen=True)
class FarkasCertificate:
    """a₀ = Σ r_m g_m，r_m ≥ 0（只记录正权重）"""

    weights: Tuple[Tuple[int, Fraction], ...]

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.weights)

    @property
    def generators(self) -> Tuple[int, ...]:
        return tuple(index for index, _ in self.weights)

    def combination(self, gens: Sequence[Sequence[int]], dimension: int) -> Tuple[Fraction, ...]:
        total = [Fraction(0)] * dimension
        for index, weight in self.weights:
            for d, value in enumerate(gens[index]):
                total[d] += weight * value
        return tuple(total)

    def verify(self, a0: Sequence[int], gens: Sequence[Sequence[int]]) -> bool:
        if any(weight <= 0 for _, weight in self.weights):
            return False
        return self.combination(gens, len(a0)) == tuple(Fraction(v) for v in a0)


def farkas_member(a0: Sequence[int], gens: Sequence[Sequence[int]]) -> Optional[FarkasCertificate]:
    """判断 a₀ 是否在 gens 的锥包中

    Returns:
        FarkasCertificate；a₀ 为零向量时为空证书；不在锥中返回 None

    Raises:
        DimensionMismatchError: 维数不一致
    """
    dimension = len(a0)
    for g in gens:
        if len(g) != dimension:
            raise DimensionMismatchError(dimension, len(g), "generator")
    if all(v == 0 for v in a0):
        return FarkasCertificate(())
    if not gens:
        return None
    rows = [[g[d] for g in gens] for d in range(dimension)]
    solution = solve_nonnegative(rows, a0)
    if solution is None:
        return None
    return FarkasCertificate(tuple((index, value) for index, value in enumerate(solution) if value > 0))


__all__ = [
    "Phase1Tableau",
    "solve_nonnegative",
    "FarkasCertificate",
    "farkas_member",
]
