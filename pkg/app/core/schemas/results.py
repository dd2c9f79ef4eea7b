"""命令输出Schema

各 CLI 命令的 JSON 输出结构，以及扫描器 JSON 行记录的结构。
"""

from typing import Any, Dict, List, Optional

from pydantic import Field

from .base import BaseSchema, ConjectureVerdict


class TermSchema(BaseSchema):
    """单项式：系数以 "p/q" 字符串保存"""

    coeff: str = Field(..., description="精确有理系数")
    exp: List[int] = Field(..., description="指数向量")


class PolynomialResult(BaseSchema):
    """potential / varsigma 输出"""

    type: str
    word: List[int]
    letter: int
    chart: str = Field(..., description="X 为簇坐标，x 为弦坐标")
    vars: int = Field(..., ge=1)
    terms: List[TermSchema]
    text: str = Field(..., description="可读形式")


class LetterFormsSchema(BaseSchema):
    terms: List[TermSchema]
    forms: List[List[int]]


class StringSystemResult(BaseSchema):
    """cone 输出"""

    type: str
    word: List[int]
    letters: Dict[str, LetterFormsSchema]


class InequalityEntrySchema(BaseSchema):
    """labels 为 (字母, 序号, 系数) 三元组"""

    index: int
    form: List[int]
    status: str
    labels: List[List[int]]
    certificate: Optional[Dict[str, str]] = None
    cross_letter: bool = False


class RedundancyResult(BaseSchema):
    """facets 输出"""

    type: str
    word: List[int]
    letters: List[int]
    dimension: int
    facet_count: int
    redundant_count: int
    duplicate_count: int
    multiple_count: int = 0
    mixes_letters: bool
    inequalities: List[InequalityEntrySchema]
    duplicates: List[Dict[str, Any]] = Field(default_factory=list)


class PsiResult(BaseSchema):
    """psi 输出"""

    type: str
    source: List[int]
    target: List[int]
    point: List[int]
    image: List[int]
    steps: List[str]
    in_source_cone: bool
    in_target_cone: bool


class TrailSchema(BaseSchema):
    """单条 trail：权序列与 c、d 指数"""

    weights: List[List[int]]
    c: List[int]
    d: List[int]


class TrailDump(BaseSchema):
    """trails 输出"""

    type: str
    word: List[int]
    letter: int
    trails: List[TrailSchema]
    forms: List[List[int]]
    matches_varsigma: bool


class ScanRecordSchema(BaseSchema):
    """扫描器的一条 JSON 行"""

    key: str
    type: str
    word: List[int]
    letter: int
    monomials: int = Field(..., ge=1)
    multiplicity_free: bool
    redundant: List[List[int]]
    coefficient_gt1: List[List[int]]
    conj_mu2: ConjectureVerdict
    conj_mult2: ConjectureVerdict
    mult2_counterexamples: List[List[int]]
    nomulti_violation: bool
    cross_letter: bool


class ScanSummarySchema(BaseSchema):
    """scan 输出"""

    records: int
    resumed: int
    multiplicity_free: int
    with_redundancy: int
    mu2_counterexamples: List[str]
    mult2_counterexamples: List[str]
    violations: List[Dict[str, Any]]


class CheckSchema(BaseSchema):
    name: str
    passed: bool
    asserted: bool
    detail: str = ""


class D4Result(BaseSchema):
    """verify-d4 输出"""

    word: List[int]
    ok: bool
    checks: List[CheckSchema]
    data: Dict[str, Any] = Field(default_factory=dict)


class WordsResult(BaseSchema):
    """words 输出"""

    type: str
    count: int
    words: List[List[int]]
    nice: bool = False


__all__ = [
    "TermSchema",
    "PolynomialResult",
    "LetterFormsSchema",
    "StringSystemResult",
    "InequalityEntrySchema",
    "RedundancyResult",
    "PsiResult",
    "TrailSchema",
    "TrailDump",
    "ScanRecordSchema",
    "ScanSummarySchema",
    "CheckSchema",
    "D4Result",
    "WordsResult",
]
