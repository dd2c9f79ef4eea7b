"""ĈA、ς、弦锥与 Ψ 单元测试"""

import pytest

from app.core.exact_poly import LaurentPolynomial
from app.core.lie_core import Word, longest_element, reduced_words
from app.core.stringcone import (
    PiecewiseLinearMap,
    ca_matrix,
    cone_points,
    in_cone,
    psi,
    psi_compat_check,
    psi_global_report,
    sample_cone_points,
    string_system,
    varsigma,
)
from app.utils.exceptions import ConventionError, DimensionMismatchError, NotReducedError, WordMismatchError


def x(index: int, power: int = 1, nvars: int = 3) -> LaurentPolynomial:
    return LaurentPolynomial.variable(nvars, index, power, chart="x")


class TestCAMatrix:
    """ĈA 指数矩阵测试类"""

    def test_a2_entries(self, a2, a2_word):
        """测试 (1,2,1) 的矩阵"""
        matrix = ca_matrix(a2, a2_word)
        assert matrix.entries == ((-1, 1, -1), (0, -1, 1), (0, 0, -1))
        assert matrix.determinant() == -1

    def test_unimodular(self, a3, d4, d4_word):
        """测试行列式为 ±1 且逆矩阵为整数矩阵"""
        for word in reduced_words(a3, longest_element(a3)):
            assert abs(ca_matrix(a3, word).determinant()) == 1
        matrix = ca_matrix(d4, d4_word)
        inverse = matrix.inverse()
        product = matrix.as_array() @ [list(row) for row in inverse]
        assert (product == [[int(r == s) for s in range(12)] for r in range(12)]).all()

    def test_requires_reduced(self, a2):
        """测试非约化单词被拒绝"""
        with pytest.raises(NotReducedError):
            ca_matrix(a2, Word((1, 2)))


class TestVarsigma:
    """ς 多项式测试类"""

    def test_a2_values(self, a2, a2_word):
        """测试 ς₁ = x₃，ς₂ = x₁ + x₂x₃⁻¹"""
        assert varsigma(a2, a2_word, 1) == x(3)
        assert varsigma(a2, a2_word, 2) == x(1) + x(2) * x(3, -1)

    def test_last_letter_is_last_variable(self, a3):
        """测试末字母的 ς 恰为 x_N"""
        for word in reduced_words(a3, longest_element(a3)):
            assert varsigma(a3, word, word.letters[-1]) == x(6, nvars=6)

    def test_non_negative_integer_coefficients(self, d4, d4_word):
        """测试D4算例所有字母的系数为正整数"""
        for letter in d4.nodes:
            assert varsigma(d4, d4_word, letter).has_positive_integer_coefficients()


class TestStringCone:
    """弦锥测试类"""

    def test_a2_forms(self, a2, a2_word):
        """测试每个字母的热带形式"""
        system = string_system(a2, a2_word)
        assert {form.form for form in system.letter(1).inequalities} == {(0, 0, 1)}
        assert {form.form for form in system.letter(2).inequalities} == {(1, 0, 0), (0, 1, -1)}
        assert system.form_count == 3
        assert system.dimension == 3

    def test_labels(self, a2, a2_word):
        """测试每条不等式记录来源字母与系数"""
        forms = string_system(a2, a2_word).inequalities([2])
        assert all(form.letter == 2 and form.coefficient == 1 for form in forms)
        assert [form.index for form in forms] == [0, 1]

    def test_membership(self, a2, a2_word):
        """测试锥成员判定"""
        system = string_system(a2, a2_word)
        assert in_cone(system, (1, 1, 0))
        assert system.contains((0, 0, 0))
        assert not in_cone(system, (0, 0, 1))
        with pytest.raises(DimensionMismatchError):
            in_cone(system, (1, 1))

    def test_cone_points(self, a2, a2_word):
        """测试盒子内格点满足 t₁≥0，t₃≥0，t₂≥t₃"""
        points = cone_points(string_system(a2, a2_word), 1)
        assert points == [(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 1, 0), (1, 1, 1)]

    def test_sampling_is_reproducible(self, a3):
        """测试大秩时按固定种子抽样"""
        system = string_system(a3, Word((1, 2, 1, 3, 2, 1)))
        first = sample_cone_points(system, 20, box=3, seed=5, max_rank=2)
        second = sample_cone_points(system, 20, box=3, seed=5, max_rank=2)
        assert first == second
        assert all(in_cone(system, p) for p in first)

    def test_json(self, a2, a2_word):
        """测试JSON输出"""
        payload = string_system(a2, a2_word).to_json()
        assert payload["word"] == [1, 2, 1]
        assert payload["letters"]["1"]["forms"] == [[0, 0, 1]]


class TestPsi:
    """分段线性映射 Ψ 测试类"""

    def test_a2_braid_step(self, a2, a2_word):
        """测试 Ψ(1,1,0) = (0,1,1)"""
        mapping = psi(a2, a2_word, Word((2, 1, 2)))
        assert mapping((1, 1, 0)) == (0, 1, 1)
        assert len(mapping.steps) == 1

    def test_involution(self, a3):
        """测试 Ψ⁻¹∘Ψ 是恒等映射"""
        source = Word((1, 2, 1, 3, 2, 1))
        target = Word((3, 2, 3, 1, 2, 3))
        mapping = psi(a3, source, target)
        back = mapping.inverse()
        for point in [(0, 0, 0, 0, 0, 0), (1, 2, 0, 3, 1, 2), (5, -1, 2, 0, 4, 1)]:
            assert back(mapping(point)) == point

    def test_composition(self, a3):
        """测试 then 组合两段路径"""
        i, j, k = Word((1, 2, 1, 3, 2, 1)), Word((1, 2, 3, 1, 2, 1)), Word((3, 2, 3, 1, 2, 3))
        composed = psi(a3, i, j).then(psi(a3, j, k))
        assert isinstance(composed, PiecewiseLinearMap)
        assert composed.source == i and composed.target == k
        with pytest.raises(ConventionError):
            psi(a3, i, j).then(psi(a3, i, j))

    def test_mismatched_words(self, a3):
        """测试代表不同元素的单词"""
        with pytest.raises(WordMismatchError):
            psi(a3, Word((1, 2)), Word((2, 3)))

    def test_dimension_checked(self, a2, a2_word):
        """测试点的维数必须等于单词长度"""
        with pytest.raises(DimensionMismatchError):
            psi(a2, a2_word, a2_word)((1, 2))

    def test_compatibility_on_cone(self, a2, a2_word):
        """测试锥内点上的热带相容性"""
        system = string_system(a2, a2_word)
        points = cone_points(system, 2) + [(0, 0, 1)]
        for letter in a2.nodes:
            report = psi_compat_check(a2, a2_word, Word((2, 1, 2)), letter, points)
            assert report.ok
            assert report.skipped_outside_cone == 1
            assert report.checked == len(points) - 1

    def test_compatibility_a3(self, a3):
        """测试A3若干单词对上的相容性"""
        words = list(reduced_words(a3, longest_element(a3)))
        source = words[0]
        points = cone_points(string_system(a3, source), 1)
        for target in words[1:5]:
            for letter in a3.nodes:
                assert psi_compat_check(a3, source, target, letter, points).ok

    def test_global_report(self, a2, a2_word):
        """测试盒子全体格点的计数只作报告"""
        report = psi_global_report(a2, a2_word, Word((2, 1, 2)), 1, box=1)
        assert report.total == 8
        assert report.in_cone == 6
        assert report.fails_in_cone == 0
        assert report.holds + report.fails_outside_cone == report.total
        assert report.to_dict()["box"] == 1
