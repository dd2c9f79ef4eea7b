"""日志配置模块

使用loguru进行日志管理，提供文本和JSON行两种输出。
"""

import functools
import sys
import time
from typing import Any, Callable, Optional, TypeVar

from loguru import logger

from app.config.settings import LogSettings, settings

F = TypeVar("F", bound=Callable[..., Any])

# 未调用 setup_logger 时保持安静，库调用方自行决定是否打开日志
logger.remove()
logger.configure(extra={"name": "stringcone", "component": "app"})


def setup_logger(log_settings: Optional[LogSettings] = None, debug: bool = False) -> None:
    """设置日志配置

    Args:
        log_settings: 日志配置，默认使用全局配置
        debug: 是否输出回溯诊断信息
    """
    config = log_settings or settings.log

    # 移除默认处理器
    logger.remove()

    # 控制台日志
    if config.console_enabled:
        if config.json_format:
            logger.add(sys.stderr, level=config.level, serialize=True)
        else:
            logger.add(
                sys.stderr,
                format=config.format,
                level=config.level,
                colorize=config.console_colorize,
                backtrace=debug,
                diagnose=debug,
            )

    # 文件日志
    if config.file_enabled:
        config.file_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            config.file_path,
            format=config.format,
            level=config.level,
            rotation=config.file_rotation,
            retention=config.file_retention,
            serialize=config.json_format,
            backtrace=debug,
            diagnose=debug,
            enqueue=True,
        )

    logger.debug(f"Logger initialized with level: {config.level}")


def get_logger(name: Optional[str] = None) -> Any:
    """获取日志器实例

    Args:
        name: 日志器名称，默认为调用模块名

    Returns:
        绑定了名称与组件（模块名最后一段）的日志器
    """
    if name is None:
        import inspect

        frame = inspect.currentframe()
        caller = frame.f_back if frame is not None else None
        name = caller.f_globals.get("__name__", "unknown") if caller else "unknown"

    return logger.bind(name=name, component=name.rsplit(".", 1)[-1])


def log_execution_time(func_name: Optional[str] = None) -> Callable[[F], F]:
    """记录函数执行时间的装饰器

    Args:
        func_name: 自定义函数名称
    """

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            name = func_name or func.__name__
            start_time = time.perf_counter()

            try:
                logger.debug(f"Starting execution: {name}")
                result = func(*args, **kwargs)
                execution_time = time.perf_counter() - start_time
                logger.info(f"Completed execution: {name} in {execution_time:.3f}s")
                return result
            except Exception as e:
                execution_time = time.perf_counter() - start_time
                logger.error(f"Failed execution: {name} in {execution_time:.3f}s - {e}")
                raise

        return wrapper  # type: ignore[return-value]

    return decorator


# 导出
__all__ = [
    "setup_logger",
    "get_logger",
    "log_execution_time",
]
