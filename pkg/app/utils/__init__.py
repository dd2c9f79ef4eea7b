"""工具函数模块

提供应用的各种工具函数和辅助功能。
"""

from app.utils.exceptions import (
    AcceptanceError,
    ConventionError,
    StringConeException,
    handle_exception,
)
from app.utils.helpers import (
    append_jsonl,
    ensure_dir,
    format_duration,
    fraction_to_str,
    parse_fraction,
    parse_int_sequence,
    read_jsonl,
)
from app.utils.logger import get_logger, log_execution_time, setup_logger

__all__ = [
    "setup_logger",
    "get_logger",
    "log_execution_time",
    "StringConeException",
    "ConventionError",
    "AcceptanceError",
    "handle_exception",
    "ensure_dir",
    "format_duration",
    "fraction_to_str",
    "parse_fraction",
    "parse_int_sequence",
    "append_jsonl",
    "read_jsonl",
]
