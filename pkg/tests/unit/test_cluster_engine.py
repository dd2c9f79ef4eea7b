"""种子、变异与势函数单元测试"""

import numpy as np
import pytest

from app.core.cluster_engine import (
    CONVENTIONS,
    MutationStep,
    QuiverConvention,
    Seed,
    full_potential,
    is_optimized,
    mutate_a,
    mutate_seed,
    opt_sequence,
    optimized_frozen,
    potential,
    potential_along,
    potential_from_mutations,
    potential_via_separation,
    principal_tracking,
    pullback_x,
    seed_from_word,
    steps_for_moves,
)
from app.core.exact_poly import LaurentPolynomial
from app.core.lie_core import Move, MoveKind, Word, longest_element, move_path, reduced_words
from app.utils.exceptions import ConventionError, FrozenVertexError, NotReducedError


def X(index: int, power: int = 1, nvars: int = 3) -> LaurentPolynomial:
    return LaurentPolynomial.variable(nvars, index, power)


@pytest.fixture(scope="module")
def a2_seed(a2, a2_word) -> Seed:
    return seed_from_word(a2, a2_word, CONVENTIONS["standard"])


class TestSeedFromWord:
    """种子构造测试类"""

    def test_a2_arrows(self, a2_seed):
        """测试 (1,2,1) 的箭图：2→1，1→3"""
        assert a2_seed.arrow(2, 1) == 1
        assert a2_seed.arrow(1, 3) == 1
        assert a2_seed.arrow(2, 3) == 0
        assert a2_seed.arrows() == [(1, 3, 1), (2, 1, 1)]

    def test_frozen_vertices(self, a2_seed, d4, d4_word):
        """测试冻结顶点恰为每个字母的最后一次出现"""
        assert a2_seed.frozen_vertices == (2, 3)
        assert a2_seed.mutable_vertices == (1,)
        assert seed_from_word(d4, d4_word).frozen_vertices == (9, 10, 11, 12)

    def test_skew_symmetric(self, d4, d4_word):
        """测试交换矩阵反对称且冻结顶点之间无箭头"""
        seed = seed_from_word(d4, d4_word)
        array = seed.as_array()
        assert np.array_equal(array, -array.T)
        frozen = list(seed.frozen_vertices)
        assert not array[np.ix_([k - 1 for k in frozen], [k - 1 for k in frozen])].any()

    def test_reversed_convention(self, a2, a2_word):
        """测试反向约定只翻转第(ii)类箭头"""
        seed = seed_from_word(a2, a2_word, CONVENTIONS["reversed"])
        assert seed.arrow(1, 2) == 1
        assert seed.arrow(1, 3) == 1

    def test_unfiltered_convention_adds_arrows(self, a3):
        """测试不做Cartan过滤时可交换字母之间也有箭头"""
        word = Word((1, 3, 2, 1, 3, 2))
        standard = seed_from_word(a3, word, CONVENTIONS["standard"])
        unfiltered = seed_from_word(a3, word, CONVENTIONS["unfiltered"])
        assert len(unfiltered.arrows()) > len(standard.arrows())

    def test_requires_reduced_word(self, a2):
        """测试非约化单词被拒绝"""
        with pytest.raises(NotReducedError):
            seed_from_word(a2, Word((1, 2, 2)))

    def test_convention_name(self):
        """测试约定名称"""
        assert CONVENTIONS["reversed"].name == "reversed"
        assert QuiverConvention(type_ii_reversed=True, type_ii_requires_adjacency=False).name == "custom"

    def test_json_round_trip(self, a2_seed):
        """测试种子序列化"""
        payload = a2_seed.to_json()
        assert payload["frozen"] == [2, 3]
        assert Seed.from_json(payload) == a2_seed


class TestMutation:
    """变异测试类"""

    def test_a2_mutation(self, a2_seed):
        """测试 μ₁：1→2，3→1，冻结箭头被抹去"""
        mutated = mutate_seed(a2_seed, 1)
        assert mutated.arrow(1, 2) == 1
        assert mutated.arrow(3, 1) == 1
        assert mutated.arrow(2, 3) == 0

    def test_involution(self, d4, d4_word):
        """测试在可变顶点处变异两次回到原种子"""
        seed = seed_from_word(d4, d4_word)
        for k in seed.mutable_vertices:
            assert mutate_seed(mutate_seed(seed, k), k).same_quiver(seed)

    def test_frozen_vertex_rejected(self, a2_seed):
        """测试冻结顶点不可变异"""
        with pytest.raises(FrozenVertexError):
            mutate_seed(a2_seed, 3)
        with pytest.raises(FrozenVertexError):
            pullback_x(X(3, -1), a2_seed, 2)

    def test_braid_move_is_mutation_then_swap(self, a3):
        """测试3项移动对应于在 k−1 处变异再交换 k,k+1"""
        for word in reduced_words(a3, longest_element(a3)):
            seed = seed_from_word(a3, word)
            for k in range(2, len(word)):
                a, b, a2 = word.letters[k - 2 : k + 1]
                if a != a2 or a3.entry(a, b) != -1:
                    continue
                braided = Word(word.letters[: k - 2] + (b, a, b) + word.letters[k + 1 :])
                expected = mutate_seed(seed, k - 1).swap(k, k + 1)
                assert seed_from_word(a3, braided).same_quiver(expected)

    def test_commutation_move_is_swap(self, a3):
        """测试2项移动只交换标号"""
        word = Word((1, 3, 2, 1, 3, 2))
        swapped = Word((3, 1, 2, 1, 3, 2))
        assert seed_from_word(a3, swapped).same_quiver(seed_from_word(a3, word).swap(1, 2))

    def test_a_mutation_exchange_relation(self, a2_seed):
        """测试A-变异：A₁′ = (A₂ + A₃)/A₁"""
        assignment = tuple(X(k) for k in (1, 2, 3))
        mutated = mutate_a(assignment, a2_seed, 1)
        assert mutated[0] == (X(2) + X(3)) * X(1, -1)
        assert mutated[1:] == assignment[1:]


class TestPullback:
    """X-拉回测试类"""

    def test_pullback_frozen_inverse(self, a2_seed):
        """测试 X₂⁻¹ 拉回为 X₂⁻¹ + X₁⁻¹X₂⁻¹"""
        result = pullback_x(X(2, -1), a2_seed, 1)
        assert result == X(2, -1) + X(1, -1) * X(2, -1)

    def test_pullback_mutated_variable(self, a2_seed):
        """测试 X₁⁻¹ 拉回为 X₁"""
        assert pullback_x(X(1, -1), a2_seed, 1) == X(1)

    def test_pullback_dimension_checked(self, a2_seed):
        """测试多项式变量数必须等于种子大小"""
        with pytest.raises(ConventionError):
            pullback_x(LaurentPolynomial.variable(2, 1), a2_seed, 1)


class TestOptimization:
    """优化种子测试类"""

    def test_optimized_vertices(self, a2_seed):
        """测试 (1,2,1) 的种子只对顶点3优化"""
        assert is_optimized(a2_seed, 3)
        assert not is_optimized(a2_seed, 2)
        assert optimized_frozen(a2_seed) == (3,)

    def test_opt_sequence_a2(self, a2, a2_word):
        """测试字母2需要一次3项移动"""
        sequence = opt_sequence(a2, a2_word, 2)
        assert sequence.target_word == Word((2, 1, 2))
        assert sequence.mutation_count == 1
        assert sequence.steps == (MutationStep(vertex=1, swap=(2, 3)),)

    def test_opt_sequence_trivial(self, a2, a2_word):
        """测试已以该字母结尾时路径为空"""
        sequence = opt_sequence(a2, a2_word, 1)
        assert sequence.target_word == a2_word
        assert sequence.steps == ()

    def test_steps_for_moves(self):
        """测试移动到变异步骤的翻译"""
        steps = steps_for_moves([Move(MoveKind.TWO_TERM, 3), Move(MoveKind.THREE_TERM, 2)])
        assert steps[0].vertex is None
        assert steps[0].swap == (3, 4)
        assert str(steps[1]) == "mu_1 then swap(2, 3)"


class TestPotential:
    """势函数测试类"""

    def test_a2_potentials(self, a2, a2_word):
        """测试A2的两个势函数"""
        assert potential(a2, a2_word, 1) == X(3, -1)
        assert potential(a2, a2_word, 2) == X(2, -1) + X(1, -1) * X(2, -1)

    def test_full_potential(self, a2, a2_word):
        """测试总势函数是各字母之和"""
        assert full_potential(a2, a2_word) == X(3, -1) + X(2, -1) + X(1, -1) * X(2, -1)

    def test_path_independence(self, a3):
        """测试不同路径给出同一势函数"""
        source = Word((1, 2, 1, 3, 2, 1))
        targets = [w for w in reduced_words(a3, longest_element(a3)) if w.letters[-1] == 3]
        values = {potential_along(a3, move_path(a3, source, target)) for target in targets}
        assert len(values) == 1
        assert values.pop() == potential(a3, source, 3)

    def test_positivity_and_frozen_factor(self, a3):
        """测试势函数系数为正整数、指数非正且含冻结因子"""
        for word in reduced_words(a3, longest_element(a3)):
            for letter in a3.nodes:
                p = potential(a3, word, letter)
                frozen = word.last_occurrence(letter)
                assert p.has_positive_integer_coefficients()
                assert all(max(e) <= 0 and e[frozen - 1] <= -1 for e in p.support)

    def test_explicit_mutation_sequence(self, a2, a2_word):
        """测试显式变异序列（不换标号）"""
        assert potential_from_mutations(a2, a2_word, 2, [1]) == X(2, -1) + X(1, -1) * X(2, -1)
        assert potential_from_mutations(a2, a2_word, 2, []) is None


class TestPrincipalCoefficients:
    """主系数交叉验证测试类"""

    def test_a2_f_polynomial(self, a2, a2_word):
        """测试 F₁ = 1 + y₁"""
        data = principal_tracking(a2, a2_word, opt_sequence(a2, a2_word, 2).steps)
        assert data.f_polynomials[0] == LaurentPolynomial.from_terms(3, {(0, 0, 0): 1, (1, 0, 0): 1}, "y")
        assert data.mutated_vertices == (1,)
        assert data.labels == (1, 3, 2)
        assert data.sign_coherent()
        assert data.constant_terms_one()

    def test_separation_matches_pullback(self, a3):
        """测试分离公式与逐步拉回一致"""
        for word in list(reduced_words(a3, longest_element(a3)))[:6]:
            for letter in a3.nodes:
                assert potential_via_separation(a3, word, letter) == potential(a3, word, letter)
