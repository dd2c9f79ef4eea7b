"""性能基线测试

测量弦锥计算、冗余分类与扫描在中等规模类型上的耗时。
"""

import time

import pytest

from app.core.lie_core import Word, cartan_matrix, longest_element, reduced_words
from app.core.polyhedral import brute_force_redundancy, classify_redundancy, scan_conjectures, system_from_string_system
from app.core.stringcone import _string_system, string_system
from tests.utils import TestDataBuilder


def timed(func, *args, **kwargs):
    start_time = time.perf_counter()
    result = func(*args, **kwargs)
    return result, time.perf_counter() - start_time


class TestStringSystemBaseline:
    """弦锥计算性能基线测试类"""

    def test_a3_all_words(self):
        """A3 全部16个单词的弦锥应在数秒内算完"""
        c = cartan_matrix("A", 3)
        _string_system.cache_clear()
        words = list(reduced_words(c, longest_element(c)))

        _, elapsed = timed(lambda: [string_system(c, w) for w in words])

        assert elapsed < 10.0, f"A3 弦锥耗时过长: {elapsed:.2f}s"
        print(f"A3 弦锥: {len(words)} 个单词, {elapsed:.3f}s")

    def test_cache_hit(self):
        """重复计算命中缓存"""
        c = cartan_matrix("A", 3)
        w = Word((1, 2, 1, 3, 2, 1))
        string_system(c, w)

        _, elapsed = timed(string_system, c, w)

        assert elapsed < 0.01

    @pytest.mark.slow
    def test_d4_example(self, d4, d4_word):
        """D4 算例的弦锥与冗余分类"""
        _string_system.cache_clear()
        strings, build_time = timed(string_system, d4, d4_word)
        report, classify_time = timed(classify_redundancy, system_from_string_system(strings))

        assert report.facet_count > 0
        assert build_time + classify_time < 120.0
        print(f"D4 弦锥 {build_time:.2f}s, 冗余分类 {classify_time:.2f}s")


class TestRedundancyBaseline:
    """冗余判定性能基线测试类"""

    @pytest.mark.parametrize("dimension,count", [(4, 8), (5, 10), (6, 12)])
    def test_farkas_versus_double_description(self, dimension, count):
        """Farkas 分类与双重描述在随机系统上的耗时"""
        system = TestDataBuilder.random_system(dimension, count, seed=dimension)

        report, farkas_time = timed(classify_redundancy, system)
        oracle, oracle_time = timed(brute_force_redundancy, system)

        assert oracle.agrees_with(report)
        assert farkas_time < 10.0
        print(f"dim={dimension}: Farkas {farkas_time:.3f}s, 双重描述 {oracle_time:.3f}s")


class TestScanBaseline:
    """扫描性能基线测试类"""

    @pytest.mark.slow
    def test_a4_sampled_scan(self, temp_dir):
        """A4 抽样扫描"""
        c = cartan_matrix("A", 4)
        output = temp_dir / "perf_a4.jsonl"

        report, elapsed = timed(scan_conjectures, c, output=output, cap=20, seed=7, threads=2)

        assert len(report.records) == 20 * c.rank
        assert not report.violations
        print(f"A4 抽样扫描: {len(report.records)} 条记录, {elapsed:.2f}s")

    def test_resume_is_fast(self, temp_dir):
        """续跑时不重新计算已有记录"""
        c = cartan_matrix("A", 3)
        output = temp_dir / "perf_resume.jsonl"
        scan_conjectures(c, output=output, cap=0, threads=1)

        report, elapsed = timed(scan_conjectures, c, output=output, cap=0, threads=1)

        assert report.resumed == 48
        assert elapsed < 2.0
