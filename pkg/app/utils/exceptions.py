"""自定义异常类

定义弦锥计算中使用的各种自定义异常。每个异常带有错误码和命令行退出码：
2 表示用法错误，3 表示约定违例（内部约定错误的信号），1 表示验收失败。
"""

from typing import Any, Dict, List, Optional, Sequence


class StringConeException(Exception):
    """StringCone基础异常类"""

    def __init__(
        self,
        message: str,
        error_code: str = "STRINGCONE_ERROR",
        exit_code: int = 2,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        return f"[{self.error_code}] {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            "error_code": self.error_code,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


# ==================== 用法错误 (退出码 2) ====================


class CartanTypeError(StringConeException):
    """Cartan类型异常"""

    def __init__(
        self,
        message: str,
        family: Optional[str] = None,
        rank: Optional[int] = None,
    ):
        details: Dict[str, Any] = {}
        if family is not None:
            details["family"] = family
        if rank is not None:
            details["rank"] = rank
        super().__init__(message, error_code="CARTAN_TYPE_ERROR", details=details)


class LetterRangeError(StringConeException):
    """字母越界异常"""

    def __init__(self, letter: int, rank: int):
        super().__init__(
            f"Letter {letter} is outside the node range 1..{rank}",
            error_code="LETTER_RANGE_ERROR",
            details={"letter": letter, "rank": rank},
        )


class WordParseError(StringConeException):
    """单词文本解析异常"""

    def __init__(self, message: str, text: Optional[str] = None):
        details = {"text": text} if text is not None else {}
        super().__init__(message, error_code="WORD_PARSE_ERROR", details=details)


class NotReducedError(StringConeException):
    """非约化单词异常"""

    def __init__(self, word: Sequence[int], expected: Optional[str] = None):
        details: Dict[str, Any] = {"word": list(word)}
        if expected:
            details["expected"] = expected
        message = f"Word {tuple(word)} is not reduced"
        if expected:
            message += f" for {expected}"
        super().__init__(message, error_code="NOT_REDUCED", details=details)


class IllegalMoveError(StringConeException):
    """非法辫子移动异常"""

    def __init__(self, message: str, word: Sequence[int], position: int):
        super().__init__(
            message,
            error_code="ILLEGAL_MOVE",
            details={"word": list(word), "position": position},
        )


class WordMismatchError(StringConeException):
    """两个单词代表不同Weyl群元素"""

    def __init__(self, source: Sequence[int], target: Sequence[int]):
        super().__init__(
            f"Words {tuple(source)} and {tuple(target)} represent different elements",
            error_code="WORD_MISMATCH",
            details={"source": list(source), "target": list(target)},
        )


class DimensionMismatchError(StringConeException):
    """维数不匹配异常"""

    def __init__(self, expected: int, actual: int, what: str = "vector"):
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected}, got {actual}",
            error_code="DIMENSION_MISMATCH",
            details={"expected": expected, "actual": actual, "what": what},
        )


class NotSubtractionFreeError(StringConeException):
    """多项式含负系数，无法热带化"""

    def __init__(self, coefficient: Any):
        super().__init__(
            f"Polynomial has non-positive coefficient {coefficient}",
            error_code="NOT_SUBTRACTION_FREE",
            details={"coefficient": str(coefficient)},
        )


class FrozenVertexError(StringConeException):
    """在冻结顶点处变异"""

    def __init__(self, vertex: int):
        super().__init__(
            f"Vertex {vertex} is frozen and cannot be mutated",
            error_code="FROZEN_VERTEX",
            details={"vertex": vertex},
        )


class NotMinusculeError(StringConeException):
    """字母对应的基本权不是minuscule"""

    def __init__(self, letter: int, cartan: str):
        super().__init__(
            f"Fundamental weight {letter} of {cartan} is not minuscule",
            error_code="NOT_MINUSCULE",
            details={"letter": letter, "cartan": cartan},
        )


class InvalidWitnessError(StringConeException):
    """simply-braided见证无效"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_code="INVALID_WITNESS", details=details)


class EnumerationCapError(StringConeException):
    """枚举规模超过上限"""

    def __init__(self, message: str, size: Optional[int] = None, cap: Optional[int] = None):
        details: Dict[str, Any] = {}
        if size is not None:
            details["size"] = size
        if cap is not None:
            details["cap"] = cap
        super().__init__(message, error_code="ENUMERATION_CAP", details=details)


class OracleLimitError(StringConeException):
    """暴力验证超出规模限制"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_code="ORACLE_LIMIT", details=details)


class ConfigurationError(StringConeException):
    """配置异常"""

    def __init__(self, message: str, config_key: Optional[str] = None):
        details = {"config_key": config_key} if config_key else {}
        super().__init__(message, error_code="CONFIGURATION_ERROR", details=details)


# ==================== 约定违例 (退出码 3) ====================


class ConventionError(StringConeException):
    """约定违例：计算结果与理论保证矛盾，通常说明约定选错"""

    def __init__(
        self,
        message: str,
        error_code: str = "CONVENTION_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, error_code=error_code, exit_code=3, details=details)


class NonLaurentError(ConventionError):
    """拉回或交换关系的结果不是Laurent多项式"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_code="NON_LAURENT", details=details)


class NonUnimodularError(ConventionError):
    """CA矩阵行列式不是±1"""

    def __init__(self, determinant: int, word: Sequence[int]):
        super().__init__(
            f"CA matrix of {tuple(word)} has determinant {determinant}",
            error_code="NON_UNIMODULAR",
            details={"determinant": determinant, "word": list(word)},
        )


class TheoremViolationError(ConventionError):
    """扫描中违反了已证明的定理"""

    def __init__(self, message: str, violations: Optional[List[Dict[str, Any]]] = None):
        super().__init__(
            message,
            error_code="THEOREM_VIOLATION",
            details={"violations": violations or []},
        )


# ==================== 验收失败 (退出码 1) ====================


class AcceptanceError(StringConeException):
    """验收检查失败"""

    def __init__(self, message: str, failed_checks: Optional[List[str]] = None):
        super().__init__(
            message,
            error_code="ACCEPTANCE_FAILED",
            exit_code=1,
            details={"failed_checks": failed_checks or []},
        )


def handle_exception(exc: Exception) -> StringConeException:
    """将通用异常转换为自定义异常

    Args:
        exc: 原始异常

    Returns:
        转换后的自定义异常
    """
    if isinstance(exc, StringConeException):
        return exc

    if isinstance(exc, FileNotFoundError):
        return StringConeException(
            message=f"File not found: {exc}",
            error_code="FILE_NOT_FOUND",
            details={"original_error": str(exc)},
        )

    if isinstance(exc, PermissionError):
        return StringConeException(
            message=f"Permission denied: {exc}",
            error_code="PERMISSION_DENIED",
            details={"original_error": str(exc)},
        )

    if isinstance(exc, (ValueError, TypeError)):
        return StringConeException(
            message=f"Invalid value: {exc}",
            error_code="VALUE_ERROR",
            details={"original_error": str(exc), "type": type(exc).__name__},
        )

    if isinstance(exc, ZeroDivisionError):
        return ConventionError(
            message=f"Division by zero: {exc}",
            details={"original_error": str(exc)},
        )

    return StringConeException(
        message=f"Unexpected error: {exc}",
        error_code="INTERNAL_ERROR",
        exit_code=1,
        details={"original_error": str(exc), "type": type(exc).__name__},
    )


__all__ = [
    "StringConeException",
    "CartanTypeError",
    "LetterRangeError",
    "WordParseError",
    "NotReducedError",
    "IllegalMoveError",
    "WordMismatchError",
    "DimensionMismatchError",
    "NotSubtractionFreeError",
    "FrozenVertexError",
    "NotMinusculeError",
    "InvalidWitnessError",
    "EnumerationCapError",
    "OracleLimitError",
    "ConfigurationError",
    "ConventionError",
    "NonLaurentError",
    "NonUnimodularError",
    "TheoremViolationError",
    "AcceptanceError",
    "handle_exception",
]
