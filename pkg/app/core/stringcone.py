"""弦锥不等式

环面映射 ĈA、函数 ς、弦锥不等式系统以及单词之间的分段线性变换 Ψ。
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from app.config.settings import get_settings
from app.core.cluster_engine import QuiverConvention, default_convention, potential
from app.core.exact_poly import LaurentPolynomial, TropicalForm, substitute_monomials, tropicalize
from app.core.lie_core import CartanDatum, MoveKind, Word, k_plus_all, move_path, require_reduced_w0
from app.utils.exceptions import ConventionError, DimensionMismatchError, NonUnimodularError
from app.utils.logger import get_logger

logger = get_logger(__name__)

Point = Tuple[int, ...]


# ==================== ĈA ====================


@dataclass(frozen=True)
class CAMatrix:
    """E[k][ℓ] = sym(k,ℓ)，X_k = ∏_ℓ x_ℓ^{E[k][ℓ]}"""

    word: Word
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.size, self.size)

    def determinant(self) -> int:
        return int(sympy.Matrix(self.entries).det())

    def inverse(self) -> Tuple[Tuple[int, ...], ...]:
        """整数逆矩阵（幺模时存在）"""
        inv = sympy.Matrix(self.entries).inv()
        return tuple(tuple(int(inv[r, s]) for s in range(self.size)) for r in range(self.size))


def ca_matrix(c: CartanDatum, i: Word) -> CAMatrix:
    """构造 ĈA 的指数矩阵

    sym(k,ℓ) = −1 当 ℓ=k 或 ℓ=k⁺≤N；= −c_{i_k,i_ℓ} 当 k<ℓ<k⁺；其余为 0。

    Raises:
        NotReducedError: 单词不是约化的
        NonUnimodularError: 行列式不是 ±1
    """
    require_reduced_w0(c, i)
    n = len(i)
    plus = k_plus_all(i)
    rows = []
    for k in range(1, n + 1):
        kp = plus[k - 1]
        row = []
        for l in range(1, n + 1):
            if l == k or l == kp:
                row.append(-1)
            elif k < l < kp:
                row.append(-c.entry(i.letter_at(k), i.letter_at(l)))
            else:
                row.append(0)
        rows.append(tuple(row))
    matrix = CAMatrix(word=i, entries=tuple(rows))
    det = matrix.determinant()
    if abs(det) != 1:
        raise NonUnimodularError(det, i.letters)
    return matrix


# ==================== ς 与不等式 ====================


def varsigma(
    c: CartanDatum, i: Word, letter: int, convention: Optional[QuiverConvention] = None
) -> LaurentPolynomial:
    """ς_{i,letter} = W_letter ∘ ĈA_i，变量标签 "x"

    Raises:
        ConventionError: 系数不是非负整数，或末字母情形不等于 x_N
    """
    w = potential(c, i, letter, convention)
    result = substitute_monomials(w, ca_matrix(c, i).entries, chart="x")
    if not result.has_positive_integer_coefficients():
        raise ConventionError(f"varsigma has non-integer or negative coefficients: {result}")
    if i.letters[-1] == letter and result != LaurentPolynomial.variable(len(i), len(i), 1, "x"):
        raise ConventionError(f"varsigma for the last letter is not x_N: {result}")
    return result


@dataclass(frozen=True)
class LabeledForm:
    """单条不等式 ⟨form, t⟩ ≥ 0 及其来源"""

    letter: int
    index: int
    coefficient: int
    form: Point

    def value(self, point: Sequence[int]) -> int:
        return sum(a * t for a, t in zip(self.form, point))


@dataclass(frozen=True)
class LetterData:
    letter: int
    polynomial: LaurentPolynomial
    tropical: TropicalForm
    inequalities: Tuple[LabeledForm, ...]


@dataclass(frozen=True)
class StringSystem:
    """所有字母的 ς 与热带化不等式"""

    cartan: CartanDatum
    word: Word
    letters: Tuple[LetterData, ...]

    @property
    def dimension(self) -> int:
        return len(self.word)

    def letter(self, letter: int) -> LetterData:
        for data in self.letters:
            if data.letter == letter:
                return data
        raise KeyError(letter)

    def inequalities(self, letters: Optional[Sequence[int]] = None) -> List[LabeledForm]:
        chosen = set(letters) if letters is not None else None
        return [
            form for data in self.letters if chosen is None or data.letter in chosen for form in data.inequalities
        ]

    def contains(self, point: Sequence[int]) -> bool:
        return in_cone(self, point)

    @property
    def form_count(self) -> int:
        return sum(len(data.inequalities) for data in self.letters)

    def to_json(self) -> Dict[str, Any]:
        return {
            "word": list(self.word.letters),
            "letters": {
                str(data.letter): {
                    "terms": data.polynomial.to_json()["terms"],
                    "forms": [list(form.form) for form in data.inequalities],
                }
                for data in self.letters
            },
        }


def _letter_data(c: CartanDatum, i: Word, letter: int, convention: Optional[QuiverConvention]) -> LetterData:
    polynomial = varsigma(c, i, letter, convention)
    tropical = tropicalize(polynomial)
    inequalities = tuple(
        LabeledForm(letter=letter, index=index, coefficient=int(coefficient), form=form)
        for index, (form, coefficient) in enumerate(zip(tropical.forms, tropical.annotations))
    )
    return LetterData(letter, polynomial, tropical, inequalities)


@lru_cache(maxsize=1024)
def _string_system(c: CartanDatum, i: Word, convention: QuiverConvention) -> StringSystem:
    letters = tuple(_letter_data(c, i, letter, convention) for letter in c.nodes)
    logger.debug(f"String system of {i}: {sum(len(d.inequalities) for d in letters)} forms")
    return StringSystem(cartan=c, word=i, letters=letters)


def string_system(c: CartanDatum, i: Word, convention: Optional[QuiverConvention] = None) -> StringSystem:
    """组装全部字母的 ς 及其热带形式；锥为所有形式 ≥ 0 的点集"""
    require_reduced_w0(c, i)
    return _string_system(c, i, convention if convention is not None else default_convention())


def in_cone(system: StringSystem, point: Sequence[int]) -> bool:
    if len(point) != system.dimension:
        raise DimensionMismatchError(system.dimension, len(point), "cone point")
    return all(form.value(point) >= 0 for form in system.inequalities())


def cone_points(system: StringSystem, box: int) -> List[Point]:
    """盒子 [0,box]^N 中锥内的全部格点（字典序）"""
    return [
        point
        for point in itertools.product(range(box + 1), repeat=system.dimension)
        if in_cone(system, point)
    ]


def sample_cone_points(
    system: StringSystem,
    count: int,
    box: Optional[int] = None,
    seed: Optional[int] = None,
    max_rank: Optional[int] = None,
) -> List[Point]:
    """取样锥内格点

    N ≤ max_rank 时穷举盒子；否则用固定种子随机抽样，结果去重排序。
    """
    scan = get_settings().scan
    box = scan.psi_box if box is None else box
    seed = scan.sample_seed if seed is None else seed
    max_rank = scan.psi_box_max_rank if max_rank is None else max_rank
    if system.dimension <= max_rank:
        return cone_points(system, box)
    rng = np.random.default_rng(seed)
    found = set()
    attempts = 0
    while len(found) < count and attempts < count * 50:
        batch = rng.integers(0, box + 1, size=(count, system.dimension))
        for row in batch:
            point = tuple(int(x) for x in row)
            if in_cone(system, point):
                found.add(point)
        attempts += count
    logger.debug(f"Sampled {len(found)} cone points for {system.word} after {attempts} draws")
    return sorted(found)[:count]


# ==================== Ψ ====================


@dataclass(frozen=True)
class PsiStep:
    """2项：交换 x_k, x_{k+1}；3项：更新 x_{k−1}, x_k, x_{k+1}"""

    kind: MoveKind
    position: int

    def apply(self, point: List[int]) -> None:
        k = self.position
        if self.kind is MoveKind.TWO_TERM:
            point[k - 1], point[k] = point[k], point[k - 1]
            return
        a, b, d = point[k - 2], point[k - 1], point[k]
        point[k - 2] = max(d, b - a)
        point[k - 1] = a + d
        point[k] = min(a, b - d)


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Ψ^j_i：沿移动路径组合的初等步骤"""

    source: Word
    target: Word
    steps: Tuple[PsiStep, ...] = field(default=())

    def __call__(self, point: Sequence[int]) -> Point:
        if len(point) != len(self.source):
            raise DimensionMismatchError(len(self.source), len(point), "psi point")
        current = [int(x) for x in point]
        for step in self.steps:
            step.apply(current)
        return tuple(current)

    def inverse(self) -> "PiecewiseLinearMap":
        # 每个初等步骤都是对合
        return PiecewiseLinearMap(self.target, self.source, tuple(reversed(self.steps)))

    def then(self, other: "PiecewiseLinearMap") -> "PiecewiseLinearMap":
        if other.source != self.target:
            raise ConventionError(f"Cannot compose maps {self.source}->{self.target} and {other.source}->{other.target}")
        return PiecewiseLinearMap(self.source, other.target, self.steps + other.steps)


def psi(c: CartanDatum, i: Word, j: Word) -> PiecewiseLinearMap:
    """沿 move_path(i, j) 组合 Ψ

    Raises:
        WordMismatchError: 两个单词代表不同元素
    """
    path = move_path(c, i, j)
    return PiecewiseLinearMap(i, j, tuple(PsiStep(move.kind, move.position) for move in path.moves))


@dataclass
class PsiCompatReport:
    """Ψ 与 ς 热带化的相容性"""

    source: Word
    target: Word
    letter: int
    checked: int = 0
    skipped_outside_cone: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    mapped_outside_target: List[Point] = field(default_factory=list)
    inverse_failures: List[Point] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.mapped_outside_target and not self.inverse_failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": list(self.source.letters),
            "target": list(self.target.letters),
            "letter": self.letter,
            "checked": self.checked,
            "skipped_outside_cone": self.skipped_outside_cone,
            "failures": self.failures,
            "mapped_outside_target": [list(p) for p in self.mapped_outside_target],
            "inverse_failures": [list(p) for p in self.inverse_failures],
            "ok": self.ok,
        }


def psi_compat_check(
    c: CartanDatum,
    i: Word,
    j: Word,
    letter: int,
    points: Sequence[Sequence[int]],
    convention: Optional[QuiverConvention] = None,
) -> PsiCompatReport:
    """在源锥内的点上检验 [ς_i]_trop(t) = [ς_j]_trop(Ψ(t))"""
    mapping = psi(c, i, j)
    back = mapping.inverse()
    source = string_system(c, i, convention)
    target = string_system(c, j, convention)
    trop_i = source.letter(letter).tropical
    trop_j = target.letter(letter).tropical
    report = PsiCompatReport(source=i, target=j, letter=letter)
    for point in points:
        t = tuple(int(x) for x in point)
        if not in_cone(source, t):
            report.skipped_outside_cone += 1
            continue
        report.checked += 1
        image = mapping(t)
        lhs, rhs = trop_i.evaluate(t), trop_j.evaluate(image)
        if lhs != rhs:
            report.failures.append({"point": list(t), "image": list(image), "source": lhs, "target": rhs})
        if not in_cone(target, image):
            report.mapped_outside_target.append(t)
        if back(image) != t:
            report.inverse_failures.append(t)
    if not report.ok:
        logger.warning(f"Psi compatibility failed for {i} -> {j}, letter {letter}: {len(report.failures)} failures")
    return report


@dataclass
class PsiGlobalReport:
    """盒子内所有格点（包括锥外）的相容性计数"""

    source: Word
    target: Word
    letter: int
    box: int
    total: int = 0
    holds: int = 0
    in_cone: int = 0
    fails_in_cone: int = 0
    fails_outside_cone: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": list(self.source.letters),
            "target": list(self.target.letters),
            "letter": self.letter,
            "box": self.box,
            "total": self.total,
            "holds": self.holds,
            "in_cone": self.in_cone,
            "fails_in_cone": self.fails_in_cone,
            "fails_outside_cone": self.fails_outside_cone,
        }


def psi_global_report(
    c: CartanDatum,
    i: Word,
    j: Word,
    letter: int,
    box: Optional[int] = None,
    convention: Optional[QuiverConvention] = None,
) -> PsiGlobalReport:
    """仅作报告：在 [0,box]^N 所有格点上求值相容性等式"""
    box = get_settings().scan.psi_box if box is None else box
    mapping = psi(c, i, j)
    source = string_system(c, i, convention)
    trop_i = source.letter(letter).tropical
    trop_j = string_system(c, j, convention).letter(letter).tropical
    report = PsiGlobalReport(source=i, target=j, letter=letter, box=box)
    for t in itertools.product(range(box + 1), repeat=len(i)):
        report.total += 1
        inside = in_cone(source, t)
        report.in_cone += int(inside)
        if trop_i.evaluate(t) == trop_j.evaluate(mapping(t)):
            report.holds += 1
        elif inside:
            report.fails_in_cone += 1
        else:
            report.fails_outside_cone += 1
    return report


__all__ = [
    "CAMatrix",
    "ca_matrix",
    "varsigma",
    "LabeledForm",
    "LetterData",
    "StringSystem",
    "string_system",
    "in_cone",
    "cone_points",
    "sample_cone_points",
    "PsiStep",
    "PiecewiseLinearMap",
    "psi",
    "PsiCompatReport",
    "psi_compat_check",
    "PsiGlobalReport",
    "psi_global_report",
]
