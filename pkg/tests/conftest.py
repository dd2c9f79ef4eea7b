"""pytest配置文件 - 全局测试配置和fixtures"""

import tempfile
from pathlib import Path
from typing import Generator

import pytest

from app.config.settings import get_settings
from app.core.lie_core import CartanDatum, Word, cartan_matrix
from app.utils.logger import setup_logger

D4_WORD_LETTERS = (2, 1, 4, 2, 3, 2, 4, 2, 1, 2, 3, 4)


@pytest.fixture(scope="session", autouse=True)
def quiet_logger():
    """测试期间只输出警告及以上日志"""
    log = get_settings().log.model_copy(update={"level": "WARNING", "file_enabled": False})
    setup_logger(log)
    yield


@pytest.fixture(scope="session")
def temp_dir() -> Generator[Path, None, None]:
    """会话级临时目录"""
    with tempfile.TemporaryDirectory() as tmp:
        yield Path(tmp)


# ==================== Cartan 数据 ====================


@pytest.fixture(scope="session")
def a2() -> CartanDatum:
    return cartan_matrix("A", 2)


@pytest.fixture(scope="session")
def a3() -> CartanDatum:
    return cartan_matrix("A", 3)


@pytest.fixture(scope="session")
def d4() -> CartanDatum:
    return cartan_matrix("D", 4)


@pytest.fixture(scope="session")
def a2_word() -> Word:
    return Word((1, 2, 1))


@pytest.fixture(scope="session")
def d4_word() -> Word:
    return Word(D4_WORD_LETTERS)


@pytest.fixture
def conventions():
    """可修改的约定配置，测试结束后恢复"""
    current = get_settings().conventions
    snapshot = current.model_dump()
    yield current
    for key, value in snapshot.items():
        setattr(current, key, value)


@pytest.fixture
def scan_settings():
    """可修改的扫描配置，测试结束后恢复"""
    current = get_settings().scan
    snapshot = current.model_dump()
    yield current
    for key, value in snapshot.items():
        setattr(current, key, value)


def pytest_collection_modifyitems(config, items):
    """根据文件路径自动添加标记"""
    for item in items:
        path = str(item.fspath)
        if "unit" in path:
            item.add_marker(pytest.mark.unit)
        elif "integration" in path:
            item.add_marker(pytest.mark.integration)
        elif "performance" in path:
            item.add_marker(pytest.mark.performance)
