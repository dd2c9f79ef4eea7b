"""种子、变异与势函数

从 w₀ 的约化单词构造种子 Γ_i，实现箭图/A/X 变异，沿辫子移动路径寻找
优化种子，并把冻结变量的逆拉回到 Σ_i 坐标得到势函数 W_letter。
另外用主系数 (c-向量与 F-多项式) 独立重建同一势函数作交叉验证。

顶点、位置编号从1开始。
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from app.config.settings import get_settings
from app.core.exact_poly import LaurentPolynomial, substitute_monomials
from app.core.lie_core import (
    CartanDatum,
    Move,
    MoveKind,
    MoveSequence,
    Word,
    breadth_first_moves,
    k_plus_all,
    require_reduced_w0,
)
from app.utils.exceptions import ConventionError, FrozenVertexError, NonLaurentError
from app.utils.logger import get_logger

logger = get_logger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


# ==================== 箭头约定 ====================


@dataclass(frozen=True)
class QuiverConvention:
    """第(ii)类箭头的方向与Cartan过滤"""

    type_ii_reversed: bool = False
    type_ii_requires_adjacency: bool = True

    @property
    def name(self) -> str:
        for key, value in CONVENTIONS.items():
            if value == self:
                return key
        return "custom"


CONVENTIONS: Dict[str, QuiverConvention] = {
    "standard": QuiverConvention(),
    "reversed": QuiverConvention(type_ii_reversed=True),
    "unfiltered": QuiverConvention(type_ii_requires_adjacency=False),
}


def default_convention() -> QuiverConvention:
    conventions = get_settings().conventions
    return QuiverConvention(
        type_ii_reversed=conventions.type_ii_reversed,
        type_ii_requires_adjacency=conventions.type_ii_requires_adjacency,
    )


def _resolve(convention: Optional[QuiverConvention]) -> QuiverConvention:
    return convention if convention is not None else default_convention()


# ==================== 种子 ====================


@dataclass(frozen=True)
class Seed:
    """反对称交换数据

    Attributes:
        omega: Ω[k][ℓ] = ⟨e_k, e_ℓ⟩，正值表示 k→ℓ 的箭头数
        frozen: 冻结掩码
        word: 来源单词（若有）
    """

    omega: IntMatrix
    frozen: Tuple[bool, ...]
    word: Optional[Word] = None

    def __post_init__(self) -> None:
        array = self.as_array()
        if array.shape != (len(self.frozen), len(self.frozen)):
            raise ConventionError("Seed matrix shape does not match frozen mask")
        if not np.array_equal(array, -array.T):
            raise ConventionError("Seed matrix is not skew-symmetric")

    @classmethod
    def from_array(
        cls, array: np.ndarray, frozen: Sequence[bool], word: Optional[Word] = None
    ) -> "Seed":
        return cls(tuple(tuple(int(x) for x in row) for row in array), tuple(bool(f) for f in frozen), word)

    @property
    def size(self) -> int:
        return len(self.frozen)

    def as_array(self) -> np.ndarray:
        return np.array(self.omega, dtype=np.int64).reshape(len(self.frozen), len(self.frozen))

    def arrow(self, k: int, l: int) -> int:
        return self.omega[k - 1][l - 1]

    def is_frozen(self, k: int) -> bool:
        return self.frozen[k - 1]

    @property
    def frozen_vertices(self) -> Tuple[int, ...]:
        return tuple(k for k in range(1, self.size + 1) if self.frozen[k - 1])

    @property
    def mutable_vertices(self) -> Tuple[int, ...]:
        return tuple(k for k in range(1, self.size + 1) if not self.frozen[k - 1])

    def arrows(self) -> List[Tuple[int, int, int]]:
        """所有箭头 (源, 靶, 重数)"""
        return [
            (k, l, self.arrow(k, l))
            for k in range(1, self.size + 1)
            for l in range(1, self.size + 1)
            if self.arrow(k, l) > 0
        ]

    def swap(self, a: int, b: int) -> "Seed":
        """交换顶点 a 与 b 的标号"""
        order = list(range(self.size))
        order[a - 1], order[b - 1] = order[b - 1], order[a - 1]
        array = self.as_array()[np.ix_(order, order)]
        frozen = [self.frozen[index] for index in order]
        return Seed.from_array(array, frozen, None)

    def same_quiver(self, other: "Seed") -> bool:
        return self.omega == other.omega and self.frozen == other.frozen

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.size,
            "omega": [list(row) for row in self.omega],
            "frozen": list(self.frozen_vertices),
            "word": list(self.word.letters) if self.word is not None else None,
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "Seed":
        n = int(payload["n"])
        frozen_set = set(payload.get("frozen", []))
        word = payload.get("word")
        return cls(
            tuple(tuple(int(x) for x in row) for row in payload["omega"]),
            tuple(k in frozen_set for k in range(1, n + 1)),
            Word(tuple(word)) if word else None,
        )


@lru_cache(maxsize=4096)
def _seed_from_word(c: CartanDatum, i: Word, convention: QuiverConvention) -> Seed:
    require_reduced_w0(c, i)
    n = len(i)
    plus = k_plus_all(i)
    omega = np.zeros((n, n), dtype=np.int64)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            kp, lp = plus[k - 1], plus[l - 1]
            if kp > n and lp > n:
                continue
            if l == kp:
                # 第(i)类：同一字母相邻出现，k→ℓ
                omega[k - 1, l - 1] += 1
                omega[l - 1, k - 1] -= 1
            elif l < kp < lp:
                if convention.type_ii_requires_adjacency and c.entry(i.letter_at(k), i.letter_at(l)) == 0:
                    continue
                # 第(ii)类：交错出现，ℓ→k
                source, target = (k, l) if convention.type_ii_reversed else (l, k)
                omega[source - 1, target - 1] += 1
                omega[target - 1, source - 1] -= 1
    frozen = [p > n for p in plus]
    return Seed.from_array(omega, frozen, i)


def seed_from_word(c: CartanDatum, i: Word, convention: Optional[QuiverConvention] = None) -> Seed:
    """由约化单词构造种子 Γ_i

    Args:
        c: Cartan数据
        i: w₀ 的约化单词
        convention: 箭头约定，默认读取配置

    Returns:
        Seed，冻结顶点恰为 {k : k⁺ = N+1}

    Raises:
        NotReducedError: 单词不是 w₀ 的约化单词
    """
    return _seed_from_word(c, i, _resolve(convention))


def _matrix_mutation(array: np.ndarray, k: int) -> np.ndarray:
    index = k - 1
    column = array[:, index]
    row = array[index, :]
    mutated = array + (np.abs(column)[:, None] * row[None, :] + column[:, None] * np.abs(row)[None, :]) // 2
    mutated[index, :] = -row
    mutated[:, index] = -column
    return mutated


def mutate_seed(s: Seed, k: int) -> Seed:
    """在可变顶点 k 处变异，随后抹去冻结顶点之间的箭头

    Raises:
        FrozenVertexError: k 是冻结顶点
    """
    if s.is_frozen(k):
        raise FrozenVertexError(k)
    mutated = _matrix_mutation(s.as_array(), k)
    mask = np.array(s.frozen, dtype=bool)
    mutated[np.ix_(mask, mask)] = 0
    return Seed.from_array(mutated, s.frozen, None)


def mutate_a(assignment: Sequence[LaurentPolynomial], s: Seed, k: int) -> Tuple[LaurentPolynomial, ...]:
    """A-变异：A_k' = (∏_{⟨e_j,e_k⟩>0} A_j^{⟨e_j,e_k⟩} + ∏_{⟨e_j,e_k⟩<0} A_j^{−⟨e_j,e_k⟩}) / A_k

    Raises:
        FrozenVertexError: k 是冻结顶点
        NonLaurentError: 交换关系不能整除
    """
    if s.is_frozen(k):
        raise FrozenVertexError(k)
    if len(assignment) != s.size:
        raise ConventionError("Assignment length does not match seed size")
    template = assignment[k - 1]
    positive = LaurentPolynomial.constant(template.nvars, 1, template.chart)
    negative = LaurentPolynomial.constant(template.nvars, 1, template.chart)
    for j in range(1, s.size + 1):
        b = s.arrow(j, k)
        if b > 0:
            positive = positive * assignment[j - 1] ** b
        elif b < 0:
            negative = negative * assignment[j - 1] ** (-b)
    exchanged = (positive + negative).exact_divide(assignment[k - 1])
    result = list(assignment)
    result[k - 1] = exchanged
    return tuple(result)


def pullback_x(p: LaurentPolynomial, s: Seed, k: int) -> LaurentPolynomial:
    """把 μ_k(Σ) 坐标下的多项式拉回到 Σ 坐标

    X_k(Σ′) = X_k(Σ)⁻¹，X_i(Σ′) = X_i(Σ)(1+X_k(Σ)^{−sgn⟨e_i,e_k⟩})^{−⟨e_i,e_k⟩}。
    所有因子都写成 X_k 的单项式乘 (1+X_k⁻¹) 的幂，最后做一次精确除法。

    Raises:
        FrozenVertexError: k 是冻结顶点
        NonLaurentError: 结果不是Laurent多项式
    """
    if s.is_frozen(k):
        raise FrozenVertexError(k)
    n = s.size
    if p.nvars != n:
        raise ConventionError(f"Polynomial has {p.nvars} variables, seed has {n}")
    column = [s.arrow(i, k) for i in range(1, n + 1)]

    shifted: List[Tuple[Tuple[int, ...], Any, int]] = []
    for exponent, coefficient in p.terms:
        power = 0
        new_exponent = list(exponent)
        new_exponent[k - 1] = -exponent[k - 1]
        for i in range(n):
            if i == k - 1 or column[i] == 0:
                continue
            power -= exponent[i] * column[i]
            if column[i] < 0:
                new_exponent[k - 1] += -column[i] * exponent[i]
        shifted.append((tuple(new_exponent), coefficient, power))

    if not shifted:
        return p
    lowest = min(0, min(power for _, _, power in shifted))
    base = LaurentPolynomial.constant(n, 1, p.chart) + LaurentPolynomial.variable(n, k, -1, p.chart)
    numerator = LaurentPolynomial.zero(n, p.chart)
    for exponent, coefficient, power in shifted:
        numerator = numerator + LaurentPolynomial.monomial(n, exponent, coefficient, p.chart) * base ** (power - lowest)
    if lowest == 0:
        return numerator
    try:
        return numerator.exact_divide(base ** (-lowest))
    except NonLaurentError as e:
        raise NonLaurentError(
            f"Pullback through mutation at {k} is not Laurent",
            details={"vertex": k, "polynomial": str(p)},
        ) from e


def is_optimized(s: Seed, vertex: int) -> bool:
    """所有连接可变顶点与 vertex 的箭头都指向 vertex"""
    return all(s.arrow(u, vertex) >= 0 for u in s.mutable_vertices)


def optimized_frozen(s: Seed) -> Tuple[int, ...]:
    """种子对之优化的冻结顶点"""
    return tuple(v for v in s.frozen_vertices if is_optimized(s, v))


# ==================== 优化序列 ====================


@dataclass(frozen=True)
class MutationStep:
    """一次变异（可为空）后接一次标号交换"""

    vertex: Optional[int]
    swap: Optional[Tuple[int, int]] = None

    def permutation(self, n: int) -> Tuple[int, ...]:
        """交换对应的 [n] 上的置换 (新标号序列)"""
        perm = list(range(1, n + 1))
        if self.swap is not None:
            a, b = self.swap
            perm[a - 1], perm[b - 1] = perm[b - 1], perm[a - 1]
        return tuple(perm)

    def __str__(self) -> str:
        parts = []
        if self.vertex is not None:
            parts.append(f"mu_{self.vertex}")
        if self.swap is not None:
            parts.append(f"swap{self.swap}")
        return " then ".join(parts) or "id"


def steps_for_moves(moves: Sequence[Move]) -> Tuple[MutationStep, ...]:
    """3项移动 (位置 k) ↦ 在 k−1 处变异再交换 k,k+1；2项移动 ↦ 仅交换"""
    steps = []
    for move in moves:
        k = move.position
        if move.kind is MoveKind.THREE_TERM:
            steps.append(MutationStep(vertex=k - 1, swap=(k, k + 1)))
        else:
            steps.append(MutationStep(vertex=None, swap=(k, k + 1)))
    return tuple(steps)


@dataclass(frozen=True)
class OptSequence:
    """到以某字母结尾的单词的路径及其变异翻译"""

    target_word: Word
    moves: MoveSequence
    steps: Tuple[MutationStep, ...]

    @property
    def mutation_count(self) -> int:
        return sum(1 for step in self.steps if step.vertex is not None)


def opt_sequence(c: CartanDatum, i: Word, letter: int) -> OptSequence:
    """广度优先找到以 letter 结尾的单词，并翻译成变异序列"""
    c.check_letter(letter)
    require_reduced_w0(c, i)
    path = breadth_first_moves(c, i, lambda w: w.letters[-1] == letter)
    if path is None:
        raise ConventionError(f"No reduced word ending in {letter} reachable from {i}")
    return OptSequence(target_word=path.target, moves=path, steps=steps_for_moves(path.moves))


# ==================== 势函数 ====================


def _check_potential(p: LaurentPolynomial, frozen_vertex: int) -> LaurentPolynomial:
    if p.is_zero() or not p.has_positive_integer_coefficients():
        raise ConventionError(f"Potential has non-positive or non-integer coefficients: {p}")
    for exponent in p.support:
        if max(exponent) > 0:
            raise ConventionError(f"Potential has a positive exponent: {p}")
        if exponent[frozen_vertex - 1] > -1:
            raise ConventionError(f"Potential monomial misses the frozen factor X{frozen_vertex}^-1: {p}")
    return p


def potential_along(
    c: CartanDatum, path: MoveSequence, convention: Optional[QuiverConvention] = None
) -> LaurentPolynomial:
    """沿给定移动路径计算势函数

    路径终点必须以目标字母结尾；在终点种子里势函数是 X_N⁻¹，
    再沿路径逆向逐步换标号并做 X-拉回。

    Returns:
        Σ_source 坐标中的 W_letter
    """
    convention = _resolve(convention)
    words = path.words(c)
    target = words[-1]
    n = len(target)
    letter = target.letters[-1]
    target_seed = seed_from_word(c, target, convention)
    if not is_optimized(target_seed, n):
        raise ConventionError(f"Seed of {target} is not optimized for its last vertex")

    polynomial = LaurentPolynomial.variable(n, n, -1)
    for index in range(len(path.moves) - 1, -1, -1):
        move = path.moves[index]
        k = move.position
        polynomial = polynomial.swap_variables(k, k + 1)
        if move.kind is MoveKind.THREE_TERM:
            polynomial = pullback_x(polynomial, seed_from_word(c, words[index], convention), k - 1)
        logger.debug(f"pullback step {index}: {move} -> {len(polynomial)} terms")

    frozen_vertex = path.source.last_occurrence(letter)
    assert frozen_vertex is not None
    return _check_potential(polynomial, frozen_vertex)


@lru_cache(maxsize=4096)
def _potential(c: CartanDatum, i: Word, letter: int, convention: QuiverConvention) -> LaurentPolynomial:
    sequence = opt_sequence(c, i, letter)
    for step in sequence.steps:
        logger.debug(f"mutation trace {i} letter {letter}: {step}")
    return potential_along(c, sequence.moves, convention)


def potential(
    c: CartanDatum, i: Word, letter: int, convention: Optional[QuiverConvention] = None
) -> LaurentPolynomial:
    """势函数 W_letter 在 Σ_i 坐标中的Laurent多项式

    Raises:
        ConventionError: 拉回失败或结果违背正性/非正指数
    """
    c.check_letter(letter)
    return _potential(c, i, letter, _resolve(convention))


def full_potential(c: CartanDatum, i: Word, convention: Optional[QuiverConvention] = None) -> LaurentPolynomial:
    """所有字母的势函数之和"""
    total = LaurentPolynomial.zero(len(i))
    for letter in c.nodes:
        total = total + potential(c, i, letter, convention)
    return total


def potential_from_mutations(
    c: CartanDatum,
    i: Word,
    letter: int,
    mutations: Sequence[int],
    convention: Optional[QuiverConvention] = None,
) -> Optional[LaurentPolynomial]:
    """按显式变异序列（不换标号）计算势函数

    Returns:
        若最终种子对该字母的冻结顶点是优化的，返回拉回结果；否则返回 None
    """
    seeds = [seed_from_word(c, i, convention)]
    for vertex in mutations:
        seeds.append(mutate_seed(seeds[-1], vertex))
    frozen_vertex = i.last_occurrence(letter)
    assert frozen_vertex is not None
    if not is_optimized(seeds[-1], frozen_vertex):
        logger.info(f"Mutation sequence {tuple(mutations)} does not optimize vertex {frozen_vertex}")
        return None
    polynomial = LaurentPolynomial.variable(len(i), frozen_vertex, -1)
    for index in range(len(mutations) - 1, -1, -1):
        polynomial = pullback_x(polynomial, seeds[index], mutations[index])
    return polynomial


# ==================== 主系数 ====================


@dataclass(frozen=True)
class PrincipalData:
    """主系数下的 c-矩阵与 F-多项式（原始标号）"""

    c_matrix: IntMatrix
    f_polynomials: Tuple[LaurentPolynomial, ...]
    b_matrix: IntMatrix
    mutated_vertices: Tuple[int, ...] = field(default=())
    labels: Tuple[int, ...] = field(default=())

    def c_vector(self, k: int) -> Tuple[int, ...]:
        return tuple(row[k - 1] for row in self.c_matrix)

    def sign_coherent(self) -> bool:
        for k in range(1, len(self.c_matrix) + 1):
            vector = self.c_vector(k)
            if any(v > 0 for v in vector) and any(v < 0 for v in vector):
                return False
        return True

    def constant_terms_one(self) -> bool:
        return all(f.coefficient((0,) * f.nvars) == 1 for f in self.f_polynomials)


def principal_tracking(
    c: CartanDatum,
    i: Word,
    steps: Sequence[MutationStep],
    convention: Optional[QuiverConvention] = None,
) -> PrincipalData:
    """沿变异序列追踪 c-向量与 F-多项式

    交换标号只改变当前标号到原始标号的对应，变异总是作用在原始标号上。
    F-多项式以辅助变量 y_1..y_N 表示（标签 "y"）。
    """
    seed = seed_from_word(c, i, convention)
    n = seed.size
    b = seed.as_array()
    cm = np.eye(n, dtype=np.int64)
    f_polys = [LaurentPolynomial.constant(n, 1, "y") for _ in range(n)]
    labels = list(range(1, n + 1))
    mutated: List[int] = []

    for step in steps:
        if step.vertex is not None:
            k = labels[step.vertex - 1]
            if seed.is_frozen(k):
                raise FrozenVertexError(k)
            index = k - 1
            positive_exp = [max(0, int(v)) for v in cm[:, index]]
            negative_exp = [max(0, -int(v)) for v in cm[:, index]]
            first = LaurentPolynomial.monomial(n, positive_exp, 1, "y")
            second = LaurentPolynomial.monomial(n, negative_exp, 1, "y")
            for j in range(n):
                entry = int(b[j, index])
                if entry > 0:
                    first = first * f_polys[j] ** entry
                elif entry < 0:
                    second = second * f_polys[j] ** (-entry)
            f_polys[index] = (first + second).exact_divide(f_polys[index])

            column = cm[:, index].copy()
            row = b[index, :]
            cm = cm + (np.abs(column)[:, None] * row[None, :] + column[:, None] * np.abs(row)[None, :]) // 2
            cm[:, index] = -column
            b = _matrix_mutation(b, k)
            mutated.append(k)
            logger.debug(f"principal step mu_{k}: F_{k} has {len(f_polys[index])} terms")
        if step.swap is not None:
            a, d = step.swap
            labels[a - 1], labels[d - 1] = labels[d - 1], labels[a - 1]

    return PrincipalData(
        c_matrix=tuple(tuple(int(x) for x in row) for row in cm),
        f_polynomials=tuple(f_polys),
        b_matrix=tuple(tuple(int(x) for x in row) for row in b),
        mutated_vertices=tuple(mutated),
        labels=tuple(labels),
    )


def potential_via_separation(
    c: CartanDatum, i: Word, letter: int, convention: Optional[QuiverConvention] = None
) -> LaurentPolynomial:
    """由分离公式组装 W：X^{−c_f} · ∏_j F_j(X⁻¹)^{b_{jf}}"""
    sequence = opt_sequence(c, i, letter)
    data = principal_tracking(c, i, sequence.steps, convention)
    n = len(i)
    frozen_vertex = i.last_occurrence(letter)
    assert frozen_vertex is not None
    if data.labels[n - 1] != frozen_vertex:
        raise ConventionError(
            f"Relabeling sends vertex {n} to {data.labels[n - 1]}, expected {frozen_vertex}"
        )
    inverse = [[-1 if r == s else 0 for s in range(n)] for r in range(n)]
    result = LaurentPolynomial.monomial(n, [-v for v in data.c_vector(frozen_vertex)], 1)
    for j in range(1, n + 1):
        exponent = data.b_matrix[j - 1][frozen_vertex - 1]
        f_poly = data.f_polynomials[j - 1]
        if exponent == 0 or f_poly == LaurentPolynomial.constant(n, 1, "y"):
            continue
        if exponent < 0:
            raise ConventionError(f"Optimized seed has arrow from {frozen_vertex} to mutable {j}")
        result = result * substitute_monomials(f_poly, inverse, chart="X") ** exponent
    return result


__all__ = [
    "QuiverConvention",
    "CONVENTIONS",
    "default_convention",
    "Seed",
    "seed_from_word",
    "mutate_seed",
    "mutate_a",
    "pullback_x",
    "is_optimized",
    "optimized_frozen",
    "MutationStep",
    "steps_for_moves",
    "OptSequence",
    "opt_sequence",
    "potential_along",
    "potential",
    "full_potential",
    "potential_from_mutations",
    "PrincipalData",
    "principal_tracking",
    "potential_via_separation",
]
