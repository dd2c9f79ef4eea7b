"""输入输出Schema

运行配置 RunConfig、各命令的 JSON 输出结构与扫描记录的校验。
"""

from .base import BaseSchema, ConjectureVerdict, OutputFormat, SchemaVersion
from .config import ConventionFlags, RunConfig, ScanCaps
from .results import (
    CheckSchema,
    D4Result,
    InequalityEntrySchema,
    LetterFormsSchema,
    PolynomialResult,
    PsiResult,
    RedundancyResult,
    ScanRecordSchema,
    ScanSummarySchema,
    StringSystemResult,
    TermSchema,
    TrailDump,
    TrailSchema,
    WordsResult,
)
from .validation import SchemaValidator, ValidationResult, schema_validator, validate_schema

__all__ = [
    # Base
    "BaseSchema",
    "SchemaVersion",
    "OutputFormat",
    "ConjectureVerdict",
    # Config
    "ConventionFlags",
    "ScanCaps",
    "RunConfig",
    # Results
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
    # Validation
    "SchemaValidator",
    "ValidationResult",
    "schema_validator",
    "validate_schema",
]

SCHEMA_VERSION = SchemaVersion.V1_0.value
