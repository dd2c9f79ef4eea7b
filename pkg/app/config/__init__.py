"""配置管理模块

提供应用的所有配置管理功能。
"""

from app.config.settings import (
    AppSettings,
    ConventionSettings,
    LogSettings,
    ScanSettings,
    get_settings,
    settings,
    validate_settings,
)

__all__ = [
    "settings",
    "get_settings",
    "AppSettings",
    "ConventionSettings",
    "LogSettings",
    "ScanSettings",
    "validate_settings",
]
