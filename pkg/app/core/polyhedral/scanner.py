"""猜想扫描器

对每个 (单词, 字母) 记录多重性自由标志、冗余不等式集合与系数>1的单项式集合，
比较两条猜想并对两条定理做硬断言。输出为只追加的 JSON 行，可按键续跑。
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from app.config.settings import get_settings
from app.core.lie_core import CartanDatum, Word, longest_element, parse_cartan, reduced_words, require_reduced_w0
from app.core.polyhedral.redundancy import classify_redundancy, system_from_string_system
from app.core.schemas.results import ScanRecordSchema
from app.core.schemas.validation import schema_validator
from app.core.stringcone import string_system
from app.utils.exceptions import EnumerationCapError, TheoremViolationError
from app.utils.helpers import append_jsonl, chunked, read_jsonl
from app.utils.logger import get_logger, log_execution_time

logger = get_logger(__name__)


def record_key(type_label: str, word: Sequence[int], letter: int) -> str:
    return f"{type_label}:{' '.join(str(x) for x in word)}:{letter}"


def select_words(
    c: CartanDatum,
    words: Optional[Iterable[Word]] = None,
    cap: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[Word]:
    """显式单词列表，或枚举 w₀ 的约化单词并在超过上限时按固定种子抽样

    Raises:
        EnumerationCapError: 枚举规模超过 enumeration_cap
    """
    scan = get_settings().scan
    if words is not None:
        return [require_reduced_w0(c, w) for w in words]
    cap = scan.word_cap if cap is None else cap
    seed = scan.sample_seed if seed is None else seed
    limit = scan.enumeration_cap
    enumerated = list(reduced_words(c, longest_element(c), limit=limit + 1))
    if len(enumerated) > limit:
        raise EnumerationCapError(f"More than {limit} reduced words for {c.label}", size=len(enumerated), cap=limit)
    if cap == 0 or len(enumerated) <= cap:
        return enumerated
    rng = np.random.default_rng(seed)
    chosen = sorted(int(i) for i in rng.choice(len(enumerated), size=cap, replace=False))
    logger.info(f"Sampled {cap} of {len(enumerated)} reduced words of {c.label} with seed {seed}")
    return [enumerated[i] for i in chosen]


def scan_word(type_label: str, letters: Sequence[int], word: Sequence[int]) -> List[Dict[str, Any]]:
    """单个单词上所有请求字母的扫描记录"""
    c = parse_cartan(type_label)
    w = Word(tuple(word))
    strings = string_system(c, w)
    report = classify_redundancy(system_from_string_system(strings))
    records = []
    for letter in letters:
        data = strings.letter(letter)
        coefficients = {form.form: form.coefficient for form in data.inequalities}
        multiplicity_free = data.polynomial.is_multiplicity_free()
        redundant_entries = report.letter_redundant(letter)
        redundant = sorted(entry.inequality.form for entry in redundant_entries)
        heavy = sorted(form for form, coefficient in coefficients.items() if coefficient > 1)
        mult2_counter = sorted(form for form in redundant if coefficients.get(form, 1) <= 1)
        cross_letter = any(entry.cross_letter for entry in redundant_entries)
        records.append(
            {
                "key": record_key(type_label, w.letters, letter),
                "type": type_label,
                "word": list(w.letters),
                "letter": letter,
                "monomials": len(data.polynomial),
                "multiplicity_free": multiplicity_free,
                "redundant": [list(form) for form in redundant],
                "coefficient_gt1": [list(form) for form in heavy],
                "conj_mu2": "agree" if (not redundant) == multiplicity_free else "counterexample",
                "conj_mult2": "agree" if not mult2_counter else "counterexample",
                "mult2_counterexamples": [list(form) for form in mult2_counter],
                "nomulti_violation": multiplicity_free and bool(redundant),
                "cross_letter": cross_letter,
            }
        )
    return records


@dataclass
class ScanReport:
    records: List[Dict[str, Any]] = field(default_factory=list)
    resumed: int = 0

    @property
    def mu2_counterexamples(self) -> List[str]:
        return [r["key"] for r in self.records if r["conj_mu2"] != "agree"]

    @property
    def mult2_counterexamples(self) -> List[str]:
        return [r["key"] for r in self.records if r["conj_mult2"] != "agree"]

    @property
    def violations(self) -> List[Dict[str, Any]]:
        return [
            {"key": r["key"], "nomulti": r["nomulti_violation"], "cross_letter": r["cross_letter"]}
            for r in self.records
            if r["nomulti_violation"] or r["cross_letter"]
        ]

    def summary(self) -> Dict[str, Any]:
        return {
            "records": len(self.records),
            "resumed": self.resumed,
            "multiplicity_free": sum(1 for r in self.records if r["multiplicity_free"]),
            "with_redundancy": sum(1 for r in self.records if r["redundant"]),
            "mu2_counterexamples": self.mu2_counterexamples,
            "mult2_counterexamples": self.mult2_counterexamples,
            "violations": self.violations,
        }


@log_execution_time("scan_conjectures")
def scan_conjectures(
    c: CartanDatum,
    words: Optional[Iterable[Word]] = None,
    letters: Optional[Sequence[int]] = None,
    output: Optional[Union[str, Path]] = None,
    cap: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> ScanReport:
    """扫描单词集合

    已存在于 output 中的键会被跳过（续跑）；新记录按单词顺序追加。

    Raises:
        TheoremViolationError: 多重性自由却冗余，或出现跨字母证书
    """
    letters = tuple(letters) if letters is not None else tuple(c.nodes)
    for letter in letters:
        c.check_letter(letter)
    threads = threads or get_settings().scan.threads
    selected = select_words(c, words, cap, seed)

    report = ScanReport()
    done: Set[str] = set()
    if output is not None:
        previous = [r for r in read_jsonl(output) if r.get("type") == c.label]
        valid, invalid = schema_validator.partition(previous, ScanRecordSchema)
        if invalid:
            logger.warning(f"Ignoring {len(invalid)} malformed records in {output}: {invalid[0].errors[:1]}")
        for record in valid:
            if record["key"] not in done:
                done.add(record["key"])
                report.records.append(record)
        report.resumed = len(report.records)

    pending: List[Tuple[int, ...]] = [
        w.letters for w in selected if any(record_key(c.label, w.letters, l) not in done for l in letters)
    ]
    logger.info(f"Scanning {len(pending)} words of {c.label} ({report.resumed} records resumed, {threads} workers)")

    for batch in chunked(pending, max(threads, 1) * 4):
        results = Parallel(n_jobs=threads)(delayed(scan_word)(c.label, letters, word) for word in batch)
        fresh = [record for records in results for record in records if record["key"] not in done]
        done.update(record["key"] for record in fresh)
        report.records.extend(fresh)
        if output is not None:
            append_jsonl(output, fresh)

    if report.violations:
        raise TheoremViolationError("Scan found theorem violations", violations=report.violations)
    return report


__all__ = [
    "record_key",
    "select_words",
    "scan_word",
    "ScanReport",
    "scan_conjectures",
]
