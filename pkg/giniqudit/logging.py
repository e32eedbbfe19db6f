"""
gini-qudit 的日志

所有处理器都挂在 "giniqudit" 记录器上，只写 stderr 和可选的轮转文件；
stdout 留给 CSV/JSON 与 ✓ 行。每条记录可以带上 command、d、seed 三个字段，
JSON 格式下它们成为顶层键。
"""

import json
import logging
import logging.handlers
import sys
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

LOGGER_NAME = "giniqudit"

EXTRA_FIELDS = ("command", "d", "seed")

TEXT_FORMAT = "%(asctime)s %(levelname)s [%(module)s] %(message)s"


class LogLevel(Enum):
    """配置文件与 --log-level 使用的小写级别名"""
    DEBUG = "debug"
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"

    def to_logging_level(self) -> int:
        return getattr(logging, self.name)


@dataclass
class LoggingConfig:
    """对应 .giniquditrc 的 logging 段"""
    level: LogLevel = LogLevel.WARNING
    console_enabled: bool = True
    file_enabled: bool = False
    file_path: str = ".gini-qudit/gini-qudit.log"
    max_size_mb: int = 10
    backup_count: int = 3
    json_format: bool = False


class JSONFormatter(logging.Formatter):
    """一条记录一行 JSON"""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        payload.update({name: getattr(record, name) for name in EXTRA_FIELDS if hasattr(record, name)})
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


class ColoredFormatter(logging.Formatter):
    """按级别给整行加 ANSI 颜色；record 本身不改"""

    COLORS = {
        logging.DEBUG: "\033[36m",
        logging.INFO: "\033[32m",
        logging.WARNING: "\033[33m",
        logging.ERROR: "\033[31m",
        logging.CRITICAL: "\033[35m",
    }
    RESET = "\033[0m"

    def __init__(self, fmt: Optional[str] = None, use_colors: bool = True):
        super().__init__(fmt)
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        if self.use_colors:
            line = f"{self.COLORS.get(record.levelno, self.RESET)}{line}{self.RESET}"
        return line


def _handlers_for(config: LoggingConfig) -> List[logging.Handler]:
    handlers: List[logging.Handler] = []

    if config.console_enabled:
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(
            JSONFormatter() if config.json_format
            else ColoredFormatter(TEXT_FORMAT, use_colors=sys.stderr.isatty())
        )
        handlers.append(console)

    if config.file_enabled:
        path = Path(config.file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        rotating = logging.handlers.RotatingFileHandler(
            path,
            maxBytes=config.max_size_mb * 1024 * 1024,
            backupCount=config.backup_count,
            encoding="utf-8",
        )
        rotating.setFormatter(JSONFormatter() if config.json_format else logging.Formatter(TEXT_FORMAT))
        handlers.append(rotating)

    for handler in handlers:
        handler.setLevel(config.level.to_logging_level())
    return handlers


class GiniQuditLogger:
    """进程内唯一的日志管理器；第一次取 logger 时按默认配置初始化"""

    _instance: Optional["GiniQuditLogger"] = None
    _config: Optional[LoggingConfig] = None

    def __new__(cls) -> "GiniQuditLogger":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @property
    def config(self) -> Optional[LoggingConfig]:
        return self._config

    @property
    def logger(self) -> logging.Logger:
        if self._config is None:
            self.configure()
        return logging.getLogger(LOGGER_NAME)

    def configure(self, config: Optional[LoggingConfig] = None) -> None:
        """替换全部处理器；重复调用不会累积"""
        config = config or LoggingConfig()
        GiniQuditLogger._config = config

        target = logging.getLogger(LOGGER_NAME)
        for old in list(target.handlers):
            target.removeHandler(old)
            old.close()
        target.setLevel(config.level.to_logging_level())
        target.propagate = False
        for handler in _handlers_for(config):
            target.addHandler(handler)

    def debug(self, message: str, **fields: Any) -> None:
        self.logger.debug(message, extra=fields)

    def info(self, message: str, **fields: Any) -> None:
        self.logger.info(message, extra=fields)

    def warning(self, message: str, **fields: Any) -> None:
        self.logger.warning(message, extra=fields)

    def error(self, message: str, **fields: Any) -> None:
        self.logger.error(message, extra=fields)

    def run_log(
        self,
        message: str,
        command: str,
        d: Optional[int] = None,
        seed: Optional[int] = None,
        level: LogLevel = LogLevel.INFO,
    ) -> None:
        """子命令进度；d 与 seed 为 None 时不写入记录"""
        fields: Dict[str, Any] = {"command": command}
        if d is not None:
            fields["d"] = d
        if seed is not None:
            fields["seed"] = seed
        self.logger.log(level.to_logging_level(), message, extra=fields)


def get_logger() -> GiniQuditLogger:
    return GiniQuditLogger()


def configure_logging(
    level: str = "warning",
    console: bool = True,
    file: bool = False,
    file_path: str = ".gini-qudit/gini-qudit.log",
    json_format: bool = False,
) -> GiniQuditLogger:
    """
    不经配置文件直接设置日志。

    level 取 debug/info/warning/error/critical，大小写不限；其他值抛 ValueError。
    """
    manager = get_logger()
    manager.configure(LoggingConfig(
        level=LogLevel(level.lower()),
        console_enabled=console,
        file_enabled=file,
        file_path=file_path,
        json_format=json_format,
    ))
    return manager
