"""精确多面体计算

Farkas 证书、冗余分类、双重描述验证与猜想扫描。
"""

from app.core.polyhedral.double_description import BruteForceReport, brute_force_redundancy, extreme_rays
from app.core.polyhedral.redundancy import (
    InequalityLabel,
    InequalityStatus,
    InequalitySystem,
    RedundancyReport,
    classify_redundancy,
    facets,
    fei_check,
    newton_vertex_report,
    same_cone,
    system_from_string_system,
)
from app.core.polyhedral.scanner import ScanReport, scan_conjectures, select_words
from app.core.polyhedral.simplex import FarkasCertificate, farkas_member

__all__ = [
    "FarkasCertificate",
    "farkas_member",
    "InequalityLabel",
    "InequalityStatus",
    "InequalitySystem",
    "RedundancyReport",
    "classify_redundancy",
    "facets",
    "same_cone",
    "newton_vertex_report",
    "fei_check",
    "system_from_string_system",
    "BruteForceReport",
    "brute_force_redundancy",
    "extreme_rays",
    "ScanReport",
    "scan_conjectures",
    "select_words",
]
