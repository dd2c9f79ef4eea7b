"""精确稀疏Laurent多项式

系数为任意精度有理数 (fractions.Fraction)，指数为整数元组。
多项式是不可变值：构造时合并重复指数、丢弃零系数，并按指数字典序排列。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from app.utils.exceptions import DimensionMismatchError, NonLaurentError, NotSubtractionFreeError
from app.utils.helpers import fraction_to_str, parse_fraction

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]
TermMap = Dict[Exponent, Fraction]


def _merge(nvars: int, items: Iterable[Tuple[Sequence[int], Scalar]]) -> TermMap:
    merged: TermMap = {}
    for exponent, coefficient in items:
        key = tuple(int(e) for e in exponent)
        if len(key) != nvars:
            raise DimensionMismatchError(nvars, len(key), "exponent vector")
        merged[key] = merged.get(key, Fraction(0)) + Fraction(coefficient)
    return {key: value for key, value in merged.items() if value != 0}


@dataclass(frozen=True)
class LaurentPolynomial:
    """Laurent多项式

    Attributes:
        nvars: 环境变量个数 N
        terms: (指数, 系数) 对，按指数字典序，系数非零
        chart: 变量命名标签，"X" 表示簇坐标，"x" 表示弦坐标
    """

    nvars: int
    terms: Tuple[Tuple[Exponent, Fraction], ...]
    chart: str = "X"

    # ==================== 构造 ====================

    @classmethod
    def from_terms(
        cls,
        nvars: int,
        items: Union[Mapping[Exponent, Scalar], Iterable[Tuple[Sequence[int], Scalar]]],
        chart: str = "X",
    ) -> "LaurentPolynomial":
        pairs = items.items() if isinstance(items, Mapping) else items
        merged = _merge(nvars, pairs)
        return cls(nvars, tuple(sorted(merged.items())), chart)

    @classmethod
    def zero(cls, nvars: int, chart: str = "X") -> "LaurentPolynomial":
        return cls(nvars, (), chart)

    @classmethod
    def constant(cls, nvars: int, value: Scalar = 1, chart: str = "X") -> "LaurentPolynomial":
        return cls.from_terms(nvars, [((0,) * nvars, value)], chart)

    @classmethod
    def monomial(
        cls, nvars: int, exponent: Sequence[int], coefficient: Scalar = 1, chart: str = "X"
    ) -> "LaurentPolynomial":
        return cls.from_terms(nvars, [(tuple(exponent), coefficient)], chart)

    @classmethod
    def variable(cls, nvars: int, index: int, power: int = 1, chart: str = "X") -> "LaurentPolynomial":
        """变量 X_index^power，index 从1开始"""
        if not 1 <= index <= nvars:
            raise DimensionMismatchError(nvars, index, "variable index")
        exponent = [0] * nvars
        exponent[index - 1] = power
        return cls.monomial(nvars, exponent, 1, chart)

    # ==================== 访问 ====================

    def as_dict(self) -> TermMap:
        return dict(self.terms)

    @property
    def support(self) -> Tuple[Exponent, ...]:
        return tuple(exponent for exponent, _ in self.terms)

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return tuple(coefficient for _, coefficient in self.terms)

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.as_dict().get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.support))

    def max_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self.support))

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self.min_exponents())

    def has_positive_integer_coefficients(self) -> bool:
        return all(c > 0 and c.denominator == 1 for c in self.coefficients)

    def with_chart(self, chart: str) -> "LaurentPolynomial":
        return LaurentPolynomial(self.nvars, self.terms, chart)

    # ==================== 环运算 ====================

    def _coerce(self, other: Any) -> Optional["LaurentPolynomial"]:
        if isinstance(other, LaurentPolynomial):
            if other.nvars != self.nvars:
                raise DimensionMismatchError(self.nvars, other.nvars, "polynomial ring")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(self.nvars, other, self.chart)
        return None

    def __add__(self, other: Any) -> "LaurentPolynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        merged = self.as_dict()
        for exponent, coefficient in rhs.terms:
            merged[exponent] = merged.get(exponent, Fraction(0)) + coefficient
        return LaurentPolynomial.from_terms(self.nvars, merged, self.chart)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.nvars, tuple((e, -c) for e, c in self.terms), self.chart)

    def __sub__(self, other: Any) -> "LaurentPolynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> "LaurentPolynomial":
        return (-self) + other

    def __mul__(self, other: Any) -> "LaurentPolynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        product: TermMap = {}
        for e1, c1 in self.terms:
            for e2, c2 in rhs.terms:
                key = tuple(a + b for a, b in zip(e1, e2))
                product[key] = product.get(key, Fraction(0)) + c1 * c2
        return LaurentPolynomial.from_terms(self.nvars, product, self.chart)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "LaurentPolynomial":
        if power < 0:
            if not self.is_monomial():
                raise NonLaurentError("Negative power of a non-monomial is not Laurent")
            (exponent, coefficient), = self.terms
            return LaurentPolynomial.monomial(
                self.nvars, [e * power for e in exponent], coefficient ** power, self.chart
            )
        result = LaurentPolynomial.constant(self.nvars, 1, self.chart)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def scale(self, factor: Scalar) -> "LaurentPolynomial":
        return self * Fraction(factor)

    def divide_by_monomial(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        """每个指数减去 exponent"""
        if len(exponent) != self.nvars:
            raise DimensionMismatchError(self.nvars, len(exponent), "monomial")
        return LaurentPolynomial.from_terms(
            self.nvars,
            [(tuple(a - b for a, b in zip(e, exponent)), c) for e, c in self.terms],
            self.chart,
        )

    def multiply_by_monomial(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        return self.divide_by_monomial([-e for e in exponent])

    def exact_divide(self, divisor: "LaurentPolynomial") -> "LaurentPolynomial":
        """Laurent环中的精确除法

        先把两边平移成不被任何变量整除的多项式，再做字典序长除法；
        若存在Laurent商，平移后的商必是多项式。

        Raises:
            NonLaurentError: 不能整除
        """
        rhs = self._coerce(divisor)
        if rhs is None or rhs.is_zero():
            raise NonLaurentError("Division by the zero polynomial")
        if self.is_zero():
            return LaurentPolynomial.zero(self.nvars, self.chart)
        if rhs.is_monomial():
            (exponent, coefficient), = rhs.terms
            return self.divide_by_monomial(exponent).scale(1 / coefficient)

        shift_p = self.min_exponents()
        shift_d = rhs.min_exponents()
        dividend = self.divide_by_monomial(shift_p).as_dict()
        divisor_terms = rhs.divide_by_monomial(shift_d).as_dict()
        quotient = _polynomial_divide(dividend, divisor_terms)
        offset = tuple(a - b for a, b in zip(shift_p, shift_d))
        return LaurentPolynomial.from_terms(self.nvars, quotient, self.chart).multiply_by_monomial(offset)

    # ==================== 变量操作 ====================

    def permute_variables(self, mapping: Mapping[int, int]) -> "LaurentPolynomial":
        """按 mapping (旧下标 -> 新下标，从1开始) 重命名变量"""
        items = []
        for exponent, coefficient in self.terms:
            moved = list(exponent)
            for old, new in mapping.items():
                moved[new - 1] = exponent[old - 1]
            items.append((tuple(moved), coefficient))
        return LaurentPolynomial.from_terms(self.nvars, items, self.chart)

    def swap_variables(self, a: int, b: int) -> "LaurentPolynomial":
        return self.permute_variables({a: b, b: a})

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        """在非零有理点处求值"""
        if len(values) != self.nvars:
            raise DimensionMismatchError(self.nvars, len(values), "evaluation point")
        total = Fraction(0)
        for exponent, coefficient in self.terms:
            term = coefficient
            for value, e in zip(values, exponent):
                term *= Fraction(value) ** e
            total += term
        return total

    def is_multiplicity_free(self) -> bool:
        """每个单项式的每个指数绝对值不超过1"""
        return all(abs(e) <= 1 for exponent in self.support for e in exponent)

    # ==================== 序列化 ====================

    def to_json(self) -> Dict[str, Any]:
        return {
            "vars": self.nvars,
            "chart": self.chart,
            "terms": [
                {"coeff": fraction_to_str(c), "exp": list(e)} for e, c in self.terms
            ],
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "LaurentPolynomial":
        nvars = int(payload["vars"])
        return cls.from_terms(
            nvars,
            [(tuple(term["exp"]), parse_fraction(term["coeff"])) for term in payload["terms"]],
            str(payload.get("chart", "X")),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: List[Tuple[str, str]] = []
        # 按总次数降序、再按字典序展示，阅读更自然
        for exponent, coefficient in sorted(self.terms, key=lambda t: (-sum(abs(e) for e in t[0]), t[0])):
            factors = []
            for index, e in enumerate(exponent, start=1):
                if e == 1:
                    factors.append(f"{self.chart}{index}")
                elif e:
                    factors.append(f"{self.chart}{index}^{e}")
            magnitude = abs(coefficient)
            body = "*".join(factors)
            if not body:
                body = fraction_to_str(magnitude)
            elif magnitude != 1:
                body = f"{fraction_to_str(magnitude)}*{body}"
            sign = "-" if coefficient < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


def _polynomial_divide(dividend: TermMap, divisor: TermMap) -> TermMap:
    """非负指数多项式的字典序长除法，要求整除"""
    remainder = dict(dividend)
    quotient: TermMap = {}
    lead = max(divisor)
    lead_coefficient = divisor[lead]
    while remainder:
        top = max(remainder)
        shift = tuple(a - b for a, b in zip(top, lead))
        if min(shift) < 0:
            raise NonLaurentError(
                "Exact division failed: remainder does not clear",
                details={"remainder_lead": list(top)},
            )
        factor = remainder[top] / lead_coefficient
        quotient[shift] = quotient.get(shift, Fraction(0)) + factor
        for exponent, coefficient in divisor.items():
            key = tuple(a + b for a, b in zip(exponent, shift))
            value = remainder.get(key, Fraction(0)) - factor * coefficient
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    return quotient


def poly_add(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p + q


def poly_mul(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p * q


def substitute_monomials(
    p: LaurentPolynomial, matrix: Sequence[Sequence[int]], chart: str = "x"
) -> LaurentPolynomial:
    """单项式代换 X_k := ∏_ℓ x_ℓ^{E[k][ℓ]}

    指数行向量 a 映到 aᵀE。因此先用 E 再用 F 代换，等于一次用乘积 E·F 代换。

    Args:
        p: 多项式
        matrix: 整数矩阵 E，行数等于 p 的变量数
        chart: 结果的变量标签

    Returns:
        新坐标下的多项式，系数不变
    """
    array = np.array(matrix, dtype=np.int64)
    if array.ndim != 2 or array.shape[0] != p.nvars:
        raise DimensionMismatchError(p.nvars, int(array.shape[0]) if array.ndim else 0, "substitution matrix")
    target = int(array.shape[1])
    if p.is_zero():
        return LaurentPolynomial.zero(target, chart)
    exponents = np.array(p.support, dtype=np.int64) @ array
    return LaurentPolynomial.from_terms(
        target, [(tuple(int(x) for x in row), c) for row, c in zip(exponents, p.coefficients)], chart
    )


@dataclass(frozen=True)
class TropicalForm:
    """min-plus 表达式 t ↦ min_u ⟨u,t⟩

    Attributes:
        nvars: 环境维数
        forms: 互不相同的指数向量
        annotations: 对应单项式的（合并后）系数
    """

    nvars: int
    forms: Tuple[Exponent, ...]
    annotations: Tuple[Fraction, ...]

    def evaluate(self, point: Sequence[int]) -> int:
        return eval_tropical(self, point)

    def form_set(self) -> frozenset:
        return frozenset(self.forms)

    def annotation(self, form: Sequence[int]) -> Fraction:
        return dict(zip(self.forms, self.annotations))[tuple(form)]


def tropicalize(p: LaurentPolynomial) -> TropicalForm:
    """热带化无减法多项式

    Raises:
        NotSubtractionFreeError: 存在非正系数
    """
    for coefficient in p.coefficients:
        if coefficient <= 0:
            raise NotSubtractionFreeError(coefficient)
    return TropicalForm(p.nvars, p.support, p.coefficients)


def eval_tropical(f: TropicalForm, point: Sequence[int]) -> int:
    """min_u ⟨u, t⟩"""
    if len(point) != f.nvars:
        raise DimensionMismatchError(f.nvars, len(point), "tropical point")
    if not f.forms:
        raise ValueError("Tropicalization of the zero polynomial is +infinity")
    return min(sum(u * t for u, t in zip(form, point)) for form in f.forms)


def is_multiplicity_free(p: LaurentPolynomial) -> bool:
    return p.is_multiplicity_free()


__all__ = [
    "Exponent",
    "LaurentPolynomial",
    "poly_add",
    "poly_mul",
    "substitute_monomials",
    "TropicalForm",
    "tropicalize",
    "eval_tropical",
    "is_multiplicity_free",
]
