"""运行配置Schema

CLI 每条命令都先构造 RunConfig，再据此调用核心模块。
RunConfig 可以写成 YAML 或 JSON 并原样读回。
"""

import json
from pathlib import Path
from typing import List, Optional, Union

import yaml
from pydantic import Field, field_validator, model_validator

from app.config.settings import get_settings
from app.core.cluster_engine import QuiverConvention
from app.core.lie_core import CartanDatum, Word, parse_cartan
from app.utils.exceptions import ConfigurationError, WordParseError
from app.utils.helpers import parse_int_sequence

from .base import BaseSchema, OutputFormat


class ConventionFlags(BaseSchema):
    """箭头与索引约定"""

    type_ii_reversed: bool = Field(default=False, description="反转第(ii)类箭头")
    type_ii_requires_adjacency: bool = Field(default=True, description="第(ii)类箭头要求相邻")

    @classmethod
    def from_settings(cls) -> "ConventionFlags":
        conventions = get_settings().conventions
        return cls(
            type_ii_reversed=conventions.type_ii_reversed,
            type_ii_requires_adjacency=conventions.type_ii_requires_adjacency,
        )

    def to_convention(self) -> QuiverConvention:
        return QuiverConvention(
            type_ii_reversed=self.type_ii_reversed,
            type_ii_requires_adjacency=self.type_ii_requires_adjacency,
        )


class ScanCaps(BaseSchema):
    """扫描规模限制"""

    word_cap: int = Field(default=500, ge=0, description="扫描单词数上限，0 表示不限")
    threads: int = Field(default=1, ge=1, description="并行工作进程数")

    @classmethod
    def from_settings(cls) -> "ScanCaps":
        scan = get_settings().scan
        return cls(word_cap=scan.word_cap, threads=scan.threads)


class RunConfig(BaseSchema):
    """一次命令运行的完整输入"""

    type: str = Field(..., min_length=2, description="Cartan类型，如 A2、D4、E6")
    words: List[List[int]] = Field(default_factory=list, description="约化单词列表")
    letters: List[int] = Field(default_factory=list, description="字母；为空表示全部")
    format: OutputFormat = Field(default=OutputFormat.JSON, description="输出格式")
    output: Optional[str] = Field(default=None, description="输出文件路径")
    conventions: ConventionFlags = Field(default_factory=ConventionFlags.from_settings)
    seed: int = Field(default_factory=lambda: get_settings().scan.sample_seed, description="抽样随机种子")
    caps: ScanCaps = Field(default_factory=ScanCaps.from_settings)

    @field_validator("type")
    @classmethod
    def validate_type(cls, v: str) -> str:
        """验证类型字符串可解析"""
        parse_cartan(v)
        return v.strip().upper()

    @field_validator("words", mode="before")
    @classmethod
    def parse_words(cls, v):
        """允许 "2 1 2" 形式的字符串"""
        if isinstance(v, str):
            v = [v]
        return [list(parse_int_sequence(w)) if isinstance(w, str) else w for w in v]

    @model_validator(mode="after")
    def check_letters(self) -> "RunConfig":
        c = self.cartan
        for letter in self.letters:
            c.check_letter(letter)
        for word in self.words:
            for letter in word:
                c.check_letter(letter)
        return self

    # ==================== 便捷访问 ====================

    @property
    def cartan(self) -> CartanDatum:
        return parse_cartan(self.type)

    @property
    def word_objects(self) -> List[Word]:
        return [Word(tuple(w)) for w in self.words]

    def word(self, index: int = 0) -> Word:
        if index >= len(self.words):
            raise WordParseError(f"RunConfig has no word #{index + 1}")
        return Word(tuple(self.words[index]))

    @property
    def selected_letters(self) -> List[int]:
        return list(self.letters) or list(self.cartan.nodes)

    # ==================== 序列化 ====================

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=True, allow_unicode=True)

    def to_json_text(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, ensure_ascii=False, indent=2)

    def save(self, path: Union[str, Path]) -> Path:
        """按扩展名写出 YAML 或 JSON"""
        path = Path(path)
        text = self.to_json_text() if path.suffix.lower() == ".json" else self.to_yaml()
        path.write_text(text, encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """读取 YAML 或 JSON 运行配置

        Raises:
            ConfigurationError: 文件不存在或内容不是映射
        """
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"Run config not found: {path}", config_key=str(path))
        text = path.read_text(encoding="utf-8")
        data = json.loads(text) if path.suffix.lower() == ".json" else yaml.safe_load(text)
        if not isinstance(data, dict):
            raise ConfigurationError(f"Run config must be a mapping: {path}", config_key=str(path))
        return cls.model_validate(data)


__all__ = ["ConventionFlags", "ScanCaps", "RunConfig"]
