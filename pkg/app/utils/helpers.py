"""工具函数

提供文本解析、分数序列化、JSON行读写等辅助功能。
"""

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Tuple, Union

from app.utils.exceptions import WordParseError
from app.utils.logger import get_logger

logger = get_logger(__name__)

_SEPARATORS = re.compile(r"[\s,;()\[\]]+")


# 文件操作相关
def ensure_dir(path: Union[str, Path]) -> Path:
    """确保目录存在

    Args:
        path: 目录路径

    Returns:
        Path对象
    """
    path_obj = Path(path)
    path_obj.mkdir(parents=True, exist_ok=True)
    return path_obj


# 文本解析相关
def parse_int_sequence(text: str) -> Tuple[int, ...]:
    """解析空白或逗号分隔的整数序列

    Args:
        text: 例如 "2 1 4 2" 或 "(1,1,0)"

    Returns:
        整数元组
    """
    tokens = [tok for tok in _SEPARATORS.split(text.strip()) if tok]
    try:
        return tuple(int(tok) for tok in tokens)
    except ValueError as e:
        raise WordParseError(f"Cannot parse integer sequence: {e}", text=text) from e


def parse_type_string(text: str) -> Tuple[str, int]:
    """解析类型字符串，例如 "D4" -> ("D", 4)"""
    match = re.fullmatch(r"\s*([A-Za-z])\s*_?\s*(\d+)\s*", text)
    if not match:
        raise WordParseError(f"Cannot parse Cartan type: {text!r}", text=text)
    return match.group(1).upper(), int(match.group(2))


# 分数序列化
def fraction_to_str(value: Fraction) -> str:
    """分数转为 "p/q" 或整数字符串"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    """从字符串或整数解析分数"""
    if isinstance(text, Fraction):
        return text
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise WordParseError(f"Cannot parse rational {text!r}: {e}", text=str(text)) from e


# 格式化
def format_duration(seconds: float) -> str:
    """格式化时间间隔为人类可读格式

    Args:
        seconds: 秒数

    Returns:
        格式化后的字符串
    """
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"
    elif seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds // 60
        remaining_seconds = seconds % 60
        return f"{minutes:.0f}m {remaining_seconds:.0f}s"
    else:
        hours = seconds // 3600
        remaining_minutes = (seconds % 3600) // 60
        return f"{hours:.0f}h {remaining_minutes:.0f}m"


def format_vector(values: Iterable[Any]) -> str:
    """将向量格式化为 "(a,b,c)" """
    return "(" + ",".join(str(v) for v in values) + ")"


# JSON行处理
def append_jsonl(path: Union[str, Path], records: Iterable[Dict[str, Any]]) -> int:
    """追加写入JSON行文件

    Args:
        path: 文件路径
        records: 记录序列

    Returns:
        写入的记录数
    """
    path_obj = Path(path)
    if path_obj.parent != Path("."):
        ensure_dir(path_obj.parent)
    count = 0
    with path_obj.open("a", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            count += 1
    return count


def read_jsonl(path: Union[str, Path]) -> Iterator[Dict[str, Any]]:
    """逐行读取JSON行文件，跳过损坏的尾行"""
    path_obj = Path(path)
    if not path_obj.exists():
        return
    with path_obj.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                logger.warning(f"Skipping malformed JSONL line {line_number}: {e}")


def chunked(items: List[Any], size: int) -> Iterator[List[Any]]:
    """按固定大小切分列表"""
    for start in range(0, len(items), max(size, 1)):
        yield items[start : start + size]


__all__ = [
    "ensure_dir",
    "parse_int_sequence",
    "parse_type_string",
    "fraction_to_str",
    "parse_fraction",
    "format_duration",
    "format_vector",
    "append_jsonl",
    "read_jsonl",
    "chunked",
]
