"""齐次不等式系统的冗余分类

不等式 ⟨a,t⟩ ≥ 0 冗余当且仅当 a 在其余法向量的锥包中（Farkas）。
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.core.exact_poly import LaurentPolynomial
from app.core.polyhedral.simplex import FarkasCertificate, farkas_member, solve_nonnegative
from app.core.stringcone import StringSystem
from app.utils.exceptions import DimensionMismatchError
from app.utils.helpers import fraction_to_str
from app.utils.logger import get_logger, log_execution_time

logger = get_logger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class InequalityLabel:
    """来源标签：(字母, 单项式序号, 合并后的系数)"""

    letter: int
    index: int
    coefficient: int

    def __str__(self) -> str:
        return f"{self.letter}#{self.index}(c={self.coefficient})"


@dataclass(frozen=True)
class Inequality:
    form: Vector
    labels: Tuple[InequalityLabel, ...]

    @property
    def letters(self) -> frozenset:
        return frozenset(label.letter for label in self.labels)

    @property
    def coefficient(self) -> int:
        return max((label.coefficient for label in self.labels), default=1)

    @property
    def duplicate_labels(self) -> Tuple[InequalityLabel, ...]:
        return self.labels[1:]


class InequalitySystem:
    """带标签的齐次线性不等式；相同法向量合并，标签取并"""

    def __init__(self, dimension: int, items: Sequence[Tuple[Sequence[int], Optional[InequalityLabel]]] = ()):
        self.dimension = dimension
        merged: Dict[Vector, List[InequalityLabel]] = {}
        for form, label in items:
            key = tuple(int(v) for v in form)
            if len(key) != dimension:
                raise DimensionMismatchError(dimension, len(key), "inequality")
            labels = merged.setdefault(key, [])
            if label is not None:
                labels.append(label)
        self.inequalities: Tuple[Inequality, ...] = tuple(
            Inequality(form, tuple(labels)) for form, labels in merged.items()
        )

    @classmethod
    def from_forms(cls, forms: Sequence[Sequence[int]], dimension: Optional[int] = None) -> "InequalitySystem":
        dim = dimension if dimension is not None else (len(forms[0]) if forms else 0)
        return cls(dim, [(form, InequalityLabel(0, index, 1)) for index, form in enumerate(forms)])

    @property
    def forms(self) -> List[Vector]:
        return [ineq.form for ineq in self.inequalities]

    def __len__(self) -> int:
        return len(self.inequalities)

    def subsystem(self, indices: Sequence[int]) -> "InequalitySystem":
        system = InequalitySystem(self.dimension)
        system.inequalities = tuple(self.inequalities[i] for i in indices)
        return system

    def contains(self, point: Sequence[int]) -> bool:
        return all(sum(a * t for a, t in zip(form, point)) >= 0 for form in self.forms)

    def to_json(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "inequalities": [
                {
                    "form": list(ineq.form),
                    "labels": [[l.letter, l.index, l.coefficient] for l in ineq.labels],
                }
                for ineq in self.inequalities
            ],
        }


def system_from_string_system(system: StringSystem, letters: Optional[Sequence[int]] = None) -> InequalitySystem:
    items = [
        (form.form, InequalityLabel(form.letter, form.index, form.coefficient))
        for form in system.inequalities(letters)
    ]
    return InequalitySystem(system.dimension, items)


def _content(form: Sequence[int]) -> int:
    return reduce(gcd, (abs(v) for v in form), 0)


def primitive_form(form: Sequence[int]) -> Vector:
    """除以各分量的最大公约数；零向量不变"""
    divisor = _content(form) or 1
    return tuple(v // divisor for v in form)


def primitive_owners(forms: Sequence[Sequence[int]]) -> List[int]:
    """每个法向量所在正倍数类中第一个成员的下标"""
    first: Dict[Vector, int] = {}
    return [first.setdefault(primitive_form(form), index) for index, form in enumerate(forms)]


class InequalityStatus(str, Enum):
    FACET = "facet"
    REDUNDANT = "redundant"
    DUPLICATE = "duplicate"  # 较早某条法向量的正倍数


@dataclass(frozen=True)
class RedundancyEntry:
    index: int
    inequality: Inequality
    status: InequalityStatus
    certificate: Optional[FarkasCertificate] = None
    cross_letter: bool = False


@dataclass
class RedundancyReport:
    """逐条不等式的分类结果"""

    system: InequalitySystem
    entries: List[RedundancyEntry] = field(default_factory=list)
    duplicates: List[Tuple[InequalityLabel, Vector]] = field(default_factory=list)

    @property
    def facet_count(self) -> int:
        return sum(1 for entry in self.entries if entry.status is InequalityStatus.FACET)

    @property
    def redundant(self) -> List[RedundancyEntry]:
        return [entry for entry in self.entries if entry.status is InequalityStatus.REDUNDANT]

    @property
    def multiples(self) -> List[RedundancyEntry]:
        return [entry for entry in self.entries if entry.status is InequalityStatus.DUPLICATE]

    @property
    def facet_flags(self) -> Tuple[bool, ...]:
        return tuple(entry.status is InequalityStatus.FACET for entry in self.entries)

    @property
    def mixes_letters(self) -> bool:
        return any(entry.cross_letter for entry in self.entries)

    def letter_redundant(self, letter: int) -> List[RedundancyEntry]:
        return [entry for entry in self.redundant if letter in entry.inequality.letters]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": self.system.dimension,
            "facet_count": self.facet_count,
            "redundant_count": len(self.redundant),
            "duplicate_count": len(self.duplicates),
            "multiple_count": len(self.multiples),
            "mixes_letters": self.mixes_letters,
            "inequalities": [
                {
                    "index": entry.index,
                    "form": list(entry.inequality.form),
                    "labels": [[l.letter, l.index, l.coefficient] for l in entry.inequality.labels],
                    "status": entry.status.value,
                    "certificate": (
                        {str(k): fraction_to_str(v) for k, v in entry.certificate.weights}
                        if entry.certificate is not None
                        else None
                    ),
                    "cross_letter": entry.cross_letter,
                }
                for entry in self.entries
            ],
            "duplicates": [
                {"label": [l.letter, l.index, l.coefficient], "form": list(form)} for l, form in self.duplicates
            ],
        }

    def to_csv_rows(self) -> List[List[str]]:
        rows = [["index", "form", "letters", "coefficient", "status", "certificate"]]
        for entry in self.entries:
            certificate = ""
            if entry.certificate is not None:
                certificate = " ".join(f"{k}:{fraction_to_str(v)}" for k, v in entry.certificate.weights)
            rows.append(
                [
                    str(entry.index),
                    " ".join(str(v) for v in entry.inequality.form),
                    " ".join(str(l) for l in sorted(entry.inequality.letters)),
                    str(entry.inequality.coefficient),
                    entry.status.value,
                    certificate,
                ]
            )
        return rows


def _is_cross_letter(system: InequalitySystem, target: Inequality, certificate: FarkasCertificate, others: List[int]) -> bool:
    if not target.labels:
        return False
    for generator, weight in certificate.weights:
        source = system.inequalities[others[generator]]
        if weight > 0 and source.labels and not (source.letters & target.letters):
            return True
    return False


@log_execution_time("classify_redundancy")
def classify_redundancy(system: InequalitySystem) -> RedundancyReport:
    """每条不等式相对其余全部不等式做 Farkas 检验

    正倍数类只保留第一条参与检验，其余记为 DUPLICATE，证书指向该代表。
    冗余时若首个证书混用其他字母，会再只用同字母的不等式求一次。
    """
    report = RedundancyReport(system=system)
    forms = system.forms
    owners = primitive_owners(forms)
    for index, inequality in enumerate(system.inequalities):
        owner = owners[index]
        if owner != index:
            ratio = Fraction(_content(forms[index]), _content(forms[owner]))
            certificate = FarkasCertificate(((owner, ratio),))
            report.entries.append(RedundancyEntry(index, inequality, InequalityStatus.DUPLICATE, certificate))
            continue
        others = [j for j in range(len(forms)) if j != index and owners[j] == j]
        certificate = farkas_member(inequality.form, [forms[j] for j in others])
        if certificate is None:
            report.entries.append(RedundancyEntry(index, inequality, InequalityStatus.FACET))
            continue
        cross = _is_cross_letter(system, inequality, certificate, others)
        if cross:
            # 优先找只用同字母不等式的证书
            same = [j for j in others if system.inequalities[j].letters & inequality.letters]
            retry = farkas_member(inequality.form, [forms[j] for j in same])
            if retry is not None:
                certificate, others, cross = retry, same, False
        remapped = FarkasCertificate(tuple((others[g], w) for g, w in certificate.weights))
        report.entries.append(RedundancyEntry(index, inequality, InequalityStatus.REDUNDANT, remapped, cross))
        logger.debug(f"Inequality {inequality.form} is redundant via {remapped.generators}")
    for entry in report.entries:
        for label in entry.inequality.duplicate_labels:
            report.duplicates.append((label, entry.inequality.form))
    return report


def facets(system: InequalitySystem) -> InequalitySystem:
    """逐条删除冗余不等式，按法向量字典序降序处理"""
    kept = list(range(len(system)))
    order = sorted(kept, key=lambda i: system.inequalities[i].form, reverse=True)
    for index in order:
        rest = [j for j in kept if j != index]
        if farkas_member(system.inequalities[index].form, [system.inequalities[j].form for j in rest]) is not None:
            kept = rest
    return system.subsystem(kept)


def cone_contains(outer: InequalitySystem, inner: InequalitySystem) -> bool:
    """outer 的锥包含 inner 的锥：outer 的每个法向量在 inner 法向量的锥包中"""
    return all(farkas_member(form, inner.forms) is not None for form in outer.forms)


def same_cone(a: InequalitySystem, b: InequalitySystem) -> bool:
    """双向 Farkas 包含"""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(a.dimension, b.dimension, "cone dimension")
    return cone_contains(a, b) and cone_contains(b, a)


# ==================== Newton 多面体 ====================


@dataclass(frozen=True)
class NewtonVertexEntry:
    exponent: Vector
    coefficient: Fraction
    vertex: bool


def newton_vertex_report(p: LaurentPolynomial) -> List[NewtonVertexEntry]:
    """单项式 u 是 Newton 多面体顶点 ⇔ u 不是其余支撑点的凸组合"""
    support = list(p.support)
    entries = []
    for index, u in enumerate(support):
        others = [v for j, v in enumerate(support) if j != index]
        if not others:
            entries.append(NewtonVertexEntry(u, p.coefficient(u), True))
            continue
        rows = [[v[d] for v in others] for d in range(p.nvars)] + [[1] * len(others)]
        rhs = list(u) + [1]
        vertex = solve_nonnegative(rows, rhs) is None
        entries.append(NewtonVertexEntry(u, p.coefficient(u), vertex))
    return entries


@dataclass
class FeiReport:
    """顶点 ⇔ 系数为 1 的逐项对照（仅报告）"""

    entries: List[NewtonVertexEntry]
    disagreements: List[NewtonVertexEntry]

    @property
    def holds(self) -> bool:
        return not self.disagreements


def fei_check(p: LaurentPolynomial) -> FeiReport:
    entries = newton_vertex_report(p)
    disagreements = [entry for entry in entries if entry.vertex != (entry.coefficient == 1)]
    if disagreements:
        logger.info(f"Vertex/coefficient criterion fails on {len(disagreements)} monomials")
    return FeiReport(entries=entries, disagreements=disagreements)


__all__ = [
    "InequalityLabel",
    "Inequality",
    "InequalitySystem",
    "system_from_string_system",
    "primitive_form",
    "primitive_owners",
    "InequalityStatus",
    "RedundancyEntry",
    "RedundancyReport",
    "classify_redundancy",
    "facets",
    "cone_contains",
    "same_cone",
    "NewtonVertexEntry",
    "newton_vertex_report",
    "FeiReport",
    "fei_check",
]
