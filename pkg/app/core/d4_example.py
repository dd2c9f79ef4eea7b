"""D4 算例核验

对单词 (2,1,4,2,3,2,4,2,1,2,3,4) 逐项检查势函数、ς 锥的面数与冗余、
冻结顶点的优化情况，并把印刷版 W₂ 在变量重标号下与计算结果对齐。
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.core.cluster_engine import (
    optimized_frozen,
    potential,
    potential_from_mutations,
    potential_via_separation,
    seed_from_word,
)
from app.core.exact_poly import LaurentPolynomial
from app.core.lie_core import CartanDatum, Word, cartan_matrix
from app.core.polyhedral.redundancy import classify_redundancy, fei_check, system_from_string_system
from app.core.polyhedral.simplex import farkas_member
from app.core.special_words import simply_braided
from app.core.stringcone import string_system
from app.utils.helpers import fraction_to_str
from app.utils.logger import get_logger, log_execution_time

logger = get_logger(__name__)

D4_WORD = Word((2, 1, 4, 2, 3, 2, 4, 2, 1, 2, 3, 4))
PRINTED_SEQUENCE: Tuple[int, ...] = (6, 3, 5, 4, 3, 1, 2, 7, 6, 8)
PRINTED_OPTIMIZED: Tuple[int, ...] = (10, 11, 12)
PRINTED_FROZEN_MATCH: Dict[int, int] = {9: 10}

# 印刷版 W₂：(系数, {变量: 指数})，按原文顺序
PRINTED_W2: Tuple[Tuple[int, Dict[int, int]], ...] = (
    (1, {9: -1, 1: -1, 2: -1, 3: -1, 4: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 2: -1, 3: -1, 4: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 2: -1, 3: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 2: -1, 4: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 3: -1, 4: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {2: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 3: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 4: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 2: -1, 5: -1, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 3: -1, 5: -1, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 4: -1, 5: -1, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 5: -2, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 4: -1, 5: -1, 6: -1, 7: -1}),
    (1, {9: -1, 3: -1, 5: -1, 6: -1, 8: -1}),
    (1, {9: -1, 2: -1, 5: -1, 7: -1, 8: -1}),
    (2, {9: -1, 5: -1, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 5: -1, 6: -1, 7: -1}),
    (1, {9: -1, 5: -1, 6: -1, 8: -1}),
    (1, {9: -1, 5: -1, 7: -1, 8: -1}),
    (1, {9: -1, 6: -1, 7: -1, 8: -1}),
    (1, {9: -1, 6: -1, 7: -1}),
    (1, {9: -1, 6: -1, 8: -1}),
    (1, {9: -1, 7: -1, 8: -1}),
    (1, {9: -1, 6: -1}),
    (1, {7: -1}),
    (1, {9: -1, 8: -1}),
    (1, {9: -1}),
)


def printed_w2(nvars: int = 12) -> LaurentPolynomial:
    items = []
    for coefficient, powers in PRINTED_W2:
        exponent = [0] * nvars
        for var, power in powers.items():
            exponent[var - 1] = power
        items.append((tuple(exponent), coefficient))
    return LaurentPolynomial.from_terms(nvars, items)


# ==================== 重标号搜索 ====================


def _profile(p: LaurentPolynomial, var: int) -> Counter:
    return Counter(exponent[var - 1] for exponent in p.support)


def _distance(a: Counter, b: Counter) -> int:
    return sum(abs(a[key] - b[key]) for key in set(a) | set(b))


@dataclass
class RelabelingMatch:
    """印刷变量 -> 计算变量 的最佳对应"""

    mapping: Dict[int, int]
    overlap: int
    printed_terms: int
    computed_terms: int
    unmatched_printed: List[str] = field(default_factory=list)
    unmatched_computed: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mapping": {str(k): v for k, v in sorted(self.mapping.items())},
            "overlap": self.overlap,
            "printed_terms": self.printed_terms,
            "computed_terms": self.computed_terms,
            "unmatched_printed": self.unmatched_printed,
            "unmatched_computed": self.unmatched_computed,
        }


def relabeling_search(
    printed: LaurentPolynomial,
    computed: LaurentPolynomial,
    fixed: Optional[Dict[int, int]] = None,
    max_assignments: int = 50_000,
    slack: int = 1,
) -> RelabelingMatch:
    """在保持指数分布的变量双射中找与计算结果重合单项式最多的一个

    每个印刷变量只考虑分布距离不超过最小值 + slack 的候选；搜索总数受 max_assignments 限制。
    """
    fixed = dict(fixed or {})
    n = computed.nvars
    printed_vars = [v for v in range(1, printed.nvars + 1) if any(e[v - 1] for e in printed.support)]
    computed_vars = [v for v in range(1, n + 1) if any(e[v - 1] for e in computed.support)]
    free = [v for v in printed_vars if v not in fixed]
    candidates: Dict[int, List[int]] = {}
    for var in free:
        scored = [
            (_distance(_profile(printed, var), _profile(computed, target)), target)
            for target in computed_vars
            if target not in fixed.values()
        ]
        best = min((score for score, _ in scored), default=0)
        candidates[var] = [target for score, target in scored if score <= best + slack]

    target_terms = set(computed.terms)
    best_match: Optional[Tuple[int, Dict[int, int]]] = None
    explored = 0

    def overlap_for(mapping: Dict[int, int]) -> int:
        moved = printed.permute_variables(mapping) if mapping else printed
        return len(set(moved.terms) & target_terms)

    for choice in itertools.product(*(candidates[v] for v in free)):
        if len(set(choice)) != len(choice):
            continue
        explored += 1
        if explored > max_assignments:
            logger.warning(f"Relabeling search stopped after {max_assignments} assignments")
            break
        mapping = dict(fixed)
        mapping.update(zip(free, choice))
        score = overlap_for(_complete_bijection(mapping, n))
        if best_match is None or score > best_match[0]:
            best_match = (score, mapping)

    score, mapping = best_match if best_match is not None else (overlap_for({}), dict(fixed))
    full = _complete_bijection(mapping, n)
    moved = printed.permute_variables(full)
    return RelabelingMatch(
        mapping=mapping,
        overlap=score,
        printed_terms=len(printed),
        computed_terms=len(computed),
        unmatched_printed=[str(LaurentPolynomial(n, (term,))) for term in sorted(set(moved.terms) - target_terms)],
        unmatched_computed=[str(LaurentPolynomial(n, (term,))) for term in sorted(target_terms - set(moved.terms))],
    )


def _complete_bijection(mapping: Dict[int, int], n: int) -> Dict[int, int]:
    """把部分映射补成 [n] 上的置换"""
    full = dict(mapping)
    unused_targets = [v for v in range(1, n + 1) if v not in full.values()]
    for source in range(1, n + 1):
        if source not in full:
            full[source] = unused_targets.pop(0)
    return full


# ==================== 核验 ====================


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    asserted: bool = True


@dataclass
class D4Report:
    word: Word
    checks: List[CheckResult] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "", asserted: bool = True) -> None:
        self.checks.append(CheckResult(name, bool(passed), detail, asserted))
        level = "info" if passed or not asserted else "error"
        getattr(logger, level)(f"verify-d4 {name}: {'ok' if passed else 'FAILED'} {detail}")

    @property
    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if check.asserted and not check.passed]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "word": list(self.word.letters),
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "asserted": c.asserted, "detail": c.detail} for c in self.checks
            ],
            "data": self.data,
        }


def _average_pair(support: Sequence[Tuple[int, ...]], target: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    for u, v in itertools.combinations(support, 2):
        if u != target and v != target and all(a + b == 2 * t for a, b, t in zip(u, v, target)):
            return u, v
    return None


@log_execution_time("verify_d4")
def verify_d4(c: Optional[CartanDatum] = None, word: Word = D4_WORD) -> D4Report:
    """运行全部 D4 检查；asserted=False 的条目只报告"""
    c = c or cartan_matrix("D", 4)
    report = D4Report(word=word)
    seed = seed_from_word(c, word)
    n = len(word)

    report.add("frozen vertices", seed.frozen_vertices == (9, 10, 11, 12), str(seed.frozen_vertices))
    optimized = optimized_frozen(seed)
    report.data["optimized_frozen"] = list(optimized)
    report.add(
        "printed optimized set",
        tuple(optimized) == PRINTED_OPTIMIZED,
        f"computed {list(optimized)}, printed {list(PRINTED_OPTIMIZED)}",
        asserted=False,
    )

    for letter in (3, 4):
        w = potential(c, word, letter)
        f = word.last_occurrence(letter)
        report.add(f"W{letter} single monomial", w == LaurentPolynomial.variable(n, f, -1), str(w))
    w1 = potential(c, word, 1)
    report.data["W1"] = str(w1)
    report.add("printed W1 = X10^-1", w1 == LaurentPolynomial.variable(n, 10, -1), str(w1), asserted=False)

    w2 = potential(c, word, 2)
    frozen = word.last_occurrence(2)
    assert frozen is not None
    report.data["W2"] = str(w2)
    report.add("W2 has 27 monomials", len(w2) == 27, str(len(w2)))
    multiset = Counter(int(coefficient) for coefficient in w2.coefficients)
    report.add("W2 coefficient multiset", multiset == Counter({1: 26, 2: 1}), str(dict(multiset)))
    report.add("W2 common frozen factor", all(e[frozen - 1] <= -1 for e in w2.support), f"X{frozen}^-1")
    report.add("W2 separation formula", potential_via_separation(c, word, 2) == w2)
    report.add("not simply-braided for 2", simply_braided(c, word, 2) is None)

    strings = string_system(c, word)
    letter_system = system_from_string_system(strings, [2])
    redundancy = classify_redundancy(letter_system)
    report.add("letter-2 facets", redundancy.facet_count == 26, str(redundancy.facet_count))
    heavy = [form for form in strings.letter(2).inequalities if form.coefficient == 2]
    redundant_forms = [entry.inequality.form for entry in redundancy.redundant]
    report.add(
        "redundant form is the coefficient-2 monomial",
        len(heavy) == 1 and redundant_forms == [heavy[0].form],
        f"redundant {redundant_forms}",
    )

    heavy_exponent = next(e for e, coefficient in w2.terms if coefficient == 2)
    pair = _average_pair(w2.support, heavy_exponent)
    weights: List[str] = []
    if pair is not None:
        certificate = farkas_member(heavy_exponent, list(pair))
        weights = [fraction_to_str(w) for _, w in certificate.weights] if certificate else []
    report.add("midpoint certificate (1/2, 1/2)", weights == ["1/2", "1/2"], f"pair {pair}, weights {weights}")

    fei = fei_check(w2)
    report.data["fei_disagreements"] = [list(entry.exponent) for entry in fei.disagreements]
    report.add("vertex iff coefficient 1", fei.holds, f"{len(fei.disagreements)} disagreements", asserted=False)

    replay = potential_from_mutations(c, word, 2, PRINTED_SEQUENCE)
    report.data["printed_sequence_optimizes"] = replay is not None
    report.add(
        "printed mutation sequence reproduces W2",
        replay == w2,
        "sequence does not optimize" if replay is None else f"{len(replay)} terms",
        asserted=False,
    )

    match = relabeling_search(printed_w2(n), w2, fixed=PRINTED_FROZEN_MATCH)
    report.data["relabeling"] = match.to_dict()
    report.add(
        "printed W2 overlap",
        match.overlap == 27,
        f"{match.overlap}/27 monomials after relabeling",
        asserted=False,
    )
    return report


__all__ = [
    "D4_WORD",
    "PRINTED_SEQUENCE",
    "PRINTED_W2",
    "printed_w2",
    "RelabelingMatch",
    "relabeling_search",
    "CheckResult",
    "D4Report",
    "verify_d4",
]
