"""精确多面体计算单元测试"""

import json
from fractions import Fraction

import pytest

from app.core.exact_poly import LaurentPolynomial
from app.core.lie_core import Word
from app.core.polyhedral import (
    InequalityLabel,
    InequalityStatus,
    InequalitySystem,
    brute_force_redundancy,
    classify_redundancy,
    extreme_rays,
    facets,
    farkas_member,
    fei_check,
    newton_vertex_report,
    same_cone,
    scan_conjectures,
    select_words,
    system_from_string_system,
)
from app.core.polyhedral.scanner import record_key, scan_word
from app.core.polyhedral.simplex import solve_nonnegative
from app.core.stringcone import string_system
from app.utils.exceptions import DimensionMismatchError, EnumerationCapError, OracleLimitError
from tests.utils import TestDataBuilder


class TestFarkas:
    """Farkas 成员判定测试类"""

    def test_member(self):
        """测试 (1,1) = 1·(1,0) + 1·(0,1)"""
        certificate = farkas_member((1, 1), [(1, 0), (0, 1)])
        assert certificate is not None
        assert certificate.as_dict() == {0: 1, 1: 1}
        assert certificate.verify((1, 1), [(1, 0), (0, 1)])

    def test_non_member(self):
        """测试 (−1,0) 不在正象限生成的锥中"""
        assert farkas_member((-1, 0), [(1, 0), (0, 1)]) is None

    def test_zero_vector(self):
        """测试零向量得到空证书"""
        certificate = farkas_member((0, 0), [(1, 0)])
        assert certificate is not None
        assert certificate.weights == ()

    def test_no_generators(self):
        """测试空生成元集合"""
        assert farkas_member((1, 0), []) is None

    def test_rational_weights(self):
        """测试证书权重为精确有理数"""
        certificate = farkas_member((1, 1), [(2, 0), (0, 3)])
        assert certificate.as_dict() == {0: Fraction(1, 2), 1: Fraction(1, 3)}

    def test_dimension_checked(self):
        """测试生成元维数不一致"""
        with pytest.raises(DimensionMismatchError):
            farkas_member((1, 1), [(1, 0, 0)])

    def test_negative_right_hand_side(self):
        """测试右端为负时的第一阶段"""
        solution = solve_nonnegative([[1, -1]], [-2])
        assert solution is not None
        assert solution[0] - solution[1] == -2


class TestRedundancy:
    """冗余分类测试类"""

    def test_sum_is_redundant(self):
        """测试 t₁+t₂ 由 t₁、t₂ 推出"""
        system = InequalitySystem.from_forms([(1, 0), (0, 1), (1, 1)])
        report = classify_redundancy(system)
        assert report.facet_flags == (True, True, False)
        redundant = report.redundant[0]
        assert redundant.inequality.form == (1, 1)
        assert redundant.certificate.verify((1, 1), system.forms)

    def test_duplicates_merged(self):
        """测试相同法向量合并且标签取并"""
        items = [((1, 0), InequalityLabel(1, 0, 1)), ((0, 1), InequalityLabel(1, 1, 1)), ((1, 0), InequalityLabel(2, 0, 1))]
        system = InequalitySystem(2, items)
        report = classify_redundancy(system)
        assert len(system) == 2
        assert report.facet_count == 2
        assert report.duplicates == [(InequalityLabel(2, 0, 1), (1, 0))]

    def test_cross_letter_flag(self):
        """测试证书只用其他字母的不等式时标记跨字母"""
        items = [
            ((1, 0), InequalityLabel(1, 0, 1)),
            ((0, 1), InequalityLabel(1, 1, 1)),
            ((1, 1), InequalityLabel(2, 0, 1)),
        ]
        report = classify_redundancy(InequalitySystem(2, items))
        assert report.mixes_letters
        assert [entry.inequality.form for entry in report.letter_redundant(2)] == [(1, 1)]
        assert report.letter_redundant(1) == []

    def test_same_letter_certificate_preferred(self):
        """测试存在同字母证书时不标记跨字母"""
        items = [
            ((1, 0), InequalityLabel(1, 0, 1)),
            ((0, 1), InequalityLabel(1, 1, 1)),
            ((1, 1), InequalityLabel(2, 0, 1)),
            ((2, 1), InequalityLabel(1, 2, 1)),
        ]
        system = InequalitySystem(2, items)
        report = classify_redundancy(system)
        entry = report.entries[3]
        assert entry.status is InequalityStatus.REDUNDANT
        assert not entry.cross_letter
        assert set(entry.certificate.generators) <= {0, 1}
        assert entry.certificate.verify((2, 1), system.forms)
        assert report.entries[2].cross_letter

    def test_a2_string_cone_irredundant(self, a2, a2_word):
        """测试A2弦锥的三条不等式都是面"""
        system = system_from_string_system(string_system(a2, a2_word))
        report = classify_redundancy(system)
        assert report.facet_count == 3
        assert not report.redundant

    def test_facets_and_same_cone(self):
        """测试删除冗余后得到同一个锥"""
        system = InequalitySystem.from_forms([(1, 0), (0, 1), (1, 1), (2, 1)])
        reduced = facets(system)
        assert sorted(reduced.forms) == [(0, 1), (1, 0)]
        assert same_cone(system, reduced)
        assert not same_cone(system, InequalitySystem.from_forms([(1, 0), (1, 1)]))

    def test_positive_multiples(self):
        """测试正倍数法向量记为重复而不是互相证明冗余"""
        system = InequalitySystem.from_forms([(1, 0), (2, 0), (0, 1)])
        report = classify_redundancy(system)
        statuses = [entry.status for entry in report.entries]
        assert statuses == [InequalityStatus.FACET, InequalityStatus.DUPLICATE, InequalityStatus.FACET]
        assert report.facet_flags == (True, False, True)
        assert not report.redundant
        assert report.multiples[0].certificate.as_dict() == {0: Fraction(2)}
        assert report.multiples[0].certificate.verify((2, 0), system.forms)
        kept = system.subsystem([entry.index for entry in report.entries if entry.status is InequalityStatus.FACET])
        assert same_cone(kept, system)
        assert same_cone(facets(system), system)
        assert brute_force_redundancy(system).agrees_with(report)
        assert report.to_dict()["multiple_count"] == 1

    def test_multiple_of_redundant_form(self):
        """测试冗余法向量的倍数也只记为重复"""
        system = InequalitySystem.from_forms([(1, 0), (0, 1), (1, 1), (3, 3)])
        report = classify_redundancy(system)
        assert [entry.status.value for entry in report.entries] == ["facet", "facet", "redundant", "duplicate"]
        assert report.redundant[0].certificate.generators == (0, 1)
        assert brute_force_redundancy(system).agrees_with(report)

    def test_report_serialization(self):
        """测试报告的字典与CSV形式"""
        report = classify_redundancy(InequalitySystem.from_forms([(1, 0), (0, 1), (1, 1)]))
        payload = report.to_dict()
        json.dumps(payload)
        assert payload["redundant_count"] == 1
        assert payload["inequalities"][2]["status"] == InequalityStatus.REDUNDANT.value
        assert payload["inequalities"][2]["certificate"] == {"0": "1", "1": "1"}
        rows = report.to_csv_rows()
        assert rows[0][0] == "index"
        assert len(rows) == 4


class TestDoubleDescription:
    """双重描述验证测试类"""

    def test_a2_rays(self, a2, a2_word):
        """测试A2弦锥的极射线"""
        system = system_from_string_system(string_system(a2, a2_word))
        assert extreme_rays(system) == ((0, 1, 0), (0, 1, 1), (1, 0, 0))

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_agrees_with_farkas(self, seed):
        """测试两种冗余判定在随机尖锥上一致"""
        system = TestDataBuilder.random_system(3, 4, seed=seed)
        assert brute_force_redundancy(system).agrees_with(classify_redundancy(system))

    @pytest.mark.parametrize("seed", range(20))
    def test_agrees_with_farkas_dimension_5(self, seed):
        """测试5维随机尖锥上两种判定一致"""
        system = TestDataBuilder.random_system(5, 10, seed=seed)
        oracle = brute_force_redundancy(system)
        report = classify_redundancy(system)
        assert oracle.agrees_with(report), (oracle.facet_flags, report.facet_flags)
        assert oracle.facet_count == report.facet_count

    def test_not_full_dimensional(self):
        """测试尖但不满维的锥被拒绝"""
        forms = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 1), (1, 0, -1)]
        system = InequalitySystem.from_forms(forms)
        with pytest.raises(OracleLimitError, match="full-dimensional"):
            extreme_rays(system)
        with pytest.raises(OracleLimitError):
            brute_force_redundancy(system)

    def test_not_pointed(self):
        """测试非尖锥被拒绝"""
        with pytest.raises(OracleLimitError):
            extreme_rays(InequalitySystem.from_forms([(1, 0, 0), (0, 1, 0)]))

    def test_size_limit(self, scan_settings):
        """测试超出规模限制"""
        scan_settings.oracle_max_dimension = 2
        with pytest.raises(OracleLimitError):
            extreme_rays(InequalitySystem.from_forms([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))


class TestNewton:
    """Newton 多面体顶点测试类"""

    def test_two_vertices(self):
        """测试 x₁ + x₂ 的两个单项式都是顶点"""
        p = LaurentPolynomial.variable(2, 1) + LaurentPolynomial.variable(2, 2)
        assert all(entry.vertex for entry in newton_vertex_report(p))

    def test_interior_term(self):
        """测试 1 + 2x + x² 的中间项不是顶点"""
        x = LaurentPolynomial.variable(1, 1)
        entries = {entry.exponent: entry.vertex for entry in newton_vertex_report((1 + x) ** 2)}
        assert entries == {(0,): True, (1,): False, (2,): True}
        assert fei_check((1 + x) ** 2).holds

    def test_criterion_failure_reported(self):
        """测试系数为 1 的非顶点被报告为不一致"""
        x = LaurentPolynomial.variable(1, 1)
        report = fei_check(1 + x + x ** 2)
        assert not report.holds
        assert [entry.exponent for entry in report.disagreements] == [(1,)]


class TestScanner:
    """猜想扫描测试类"""

    def test_select_explicit_words(self, a2):
        """测试显式单词列表必须是约化的"""
        assert select_words(a2, [Word((2, 1, 2))]) == [Word((2, 1, 2))]

    def test_select_enumerates(self, a3):
        """测试枚举全部单词"""
        assert len(select_words(a3, cap=0)) == 16

    def test_select_sampling_reproducible(self, a3):
        """测试超过上限时按种子抽样"""
        first = select_words(a3, cap=5, seed=9)
        assert first == select_words(a3, cap=5, seed=9)
        assert len(first) == 5

    def test_enumeration_cap(self, a3, scan_settings):
        """测试枚举规模超过上限"""
        scan_settings.enumeration_cap = 10
        with pytest.raises(EnumerationCapError):
            select_words(a3)

    def test_scan_word_record(self):
        """测试单个单词的扫描记录"""
        records = scan_word("A2", [1, 2], (1, 2, 1))
        assert [r["key"] for r in records] == [record_key("A2", (1, 2, 1), 1), record_key("A2", (1, 2, 1), 2)]
        assert all(r["multiplicity_free"] and r["conj_mu2"] == "agree" for r in records)
        assert records[1]["monomials"] == 2

    def test_scan_resumes(self, a2, temp_dir):
        """测试输出文件中已有的键被跳过"""
        output = temp_dir / "scan_a2.jsonl"
        first = scan_conjectures(a2, output=output, threads=1)
        assert first.summary()["records"] == 4
        second = scan_conjectures(a2, output=output, threads=1)
        assert second.resumed == 4
        assert len(output.read_text(encoding="utf-8").splitlines()) == 4

    def test_malformed_records_ignored(self, a2, temp_dir):
        """测试续跑时忽略不符合模式的记录"""
        output = temp_dir / "scan_bad.jsonl"
        output.write_text(json.dumps({"type": "A2", "key": "A2:1 2 1:1"}) + "\n", encoding="utf-8")
        report = scan_conjectures(a2, letters=[1], output=output, threads=1)
        assert report.resumed == 0
        assert len(report.records) == 2
