"""应用配置管理

使用Pydantic Settings进行配置管理，支持环境变量和.env文件。
"""

from functools import lru_cache
from pathlib import Path
from typing import List, Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class LogSettings(BaseSettings):
    """日志配置 - 使用loguru"""

    # 日志级别
    level: str = Field(default="WARNING", description="日志级别")

    # 日志格式
    format: str = Field(
        default="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[name]}:{function}:{line} - {message}",
        description="loguru格式模板",
    )

    # 文件日志配置
    file_enabled: bool = Field(default=False, description="是否写入日志文件")
    file_path: Path = Field(default=Path("./logs/stringcone.log"))
    file_rotation: str = Field(default="10 MB")
    file_retention: str = Field(default="30 days")

    # 控制台日志配置
    console_enabled: bool = Field(default=True)
    console_colorize: bool = Field(default=True)

    # 结构化日志
    json_format: bool = Field(default=False, description="以JSON行输出日志")

    model_config = {"env_prefix": "LOG_", "case_sensitive": False, "extra": "ignore"}

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        """验证日志级别"""
        allowed = {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}
        level = v.upper()
        if level not in allowed:
            raise ValueError(f"Unknown log level: {v}")
        return level


class ConventionSettings(BaseSettings):
    """约定配置

    箭头方向与索引约定的开关，默认值是在A2/A3/D4上验证通过的组合。
    """

    # 箭头约定
    type_ii_reversed: bool = Field(default=False, description="反转第(ii)类箭头方向")
    type_ii_requires_adjacency: bool = Field(
        default=True, description="第(ii)类箭头要求Cartan矩阵元素非零"
    )

    # simply-braided 约束使用 α_{letter} (direct) 还是 α_{letter*} (dual)
    simply_braided_root: Literal["direct", "dual"] = Field(default="direct")

    # trail 起止权使用 ω_{letter*} (dual) 还是 ω_{letter} (direct)
    trail_endpoints: Literal["dual", "direct"] = Field(default="dual")

    # 子词公式中的部分乘积截止到 k(j) 还是 k(j+1)
    subword_partial_product: Literal["j", "j+1"] = Field(default="j")

    model_config = {
        "env_prefix": "STRINGCONE_CONVENTION_",
        "case_sensitive": False,
        "extra": "ignore",
    }


class ScanSettings(BaseSettings):
    """扫描与采样配置"""

    # 并行配置 (环境变量 STRINGCONE_THREADS)
    threads: int = Field(default=1, ge=1, description="扫描工作进程上限")

    # 单词来源
    word_cap: int = Field(default=500, ge=0, description="扫描单词数上限")
    sample_seed: int = Field(default=20240101, description="抽样随机种子")
    enumeration_cap: int = Field(default=200_000, ge=1, description="约化单词枚举上限")
    weyl_order_cap: int = Field(default=100_000, ge=1, description="Weyl群阶上限")

    # Ψ 兼容性采样
    psi_box: int = Field(default=4, ge=0, description="格点盒子边长B")
    psi_box_max_rank: int = Field(default=6, ge=1, description="穷举盒子的最大N")
    psi_random_samples: int = Field(default=2000, ge=1, description="随机采样点数")

    # 暴力验证上限
    oracle_max_dimension: int = Field(default=12, ge=1)
    oracle_max_inequalities: int = Field(default=64, ge=1)

    model_config = {"env_prefix": "STRINGCONE_", "case_sensitive": False, "extra": "ignore"}


class AppSettings(BaseSettings):
    """应用主配置"""

    # 应用基础信息
    app_name: str = Field(default="StringCone")
    app_version: str = Field(default="0.1.0")
    debug: bool = Field(default=False)

    # 输出配置
    output_formats: List[str] = Field(default=["json", "text", "csv"])

    # 子配置
    log: LogSettings = Field(default_factory=LogSettings)
    conventions: ConventionSettings = Field(default_factory=ConventionSettings)
    scan: ScanSettings = Field(default_factory=ScanSettings)

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "extra": "ignore",
    }


# 全局配置实例
settings = AppSettings()


@lru_cache()
def get_settings() -> AppSettings:
    """获取缓存的配置实例"""
    return settings


# 配置验证函数
def validate_settings() -> bool:
    """验证配置是否正确"""
    try:
        assert settings.scan.threads >= 1, "STRINGCONE_THREADS must be positive"
        assert settings.scan.psi_box >= 0, "psi box must be non-negative"
        assert set(settings.output_formats) <= {"json", "text", "csv"}, (
            f"Unknown output formats: {settings.output_formats}"
        )
        if settings.log.file_enabled:
            settings.log.file_path.parent.mkdir(parents=True, exist_ok=True)
        return True
    except Exception as e:
        from loguru import logger

        logger.error(f"Configuration validation failed: {e}")
        return False


# 导出配置
__all__ = [
    "AppSettings",
    "LogSettings",
    "ConventionSettings",
    "ScanSettings",
    "settings",
    "get_settings",
    "validate_settings",
]
