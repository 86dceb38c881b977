import os
import sys
from enum import IntEnum

from loguru import logger

LOGLEVEL_ENV = "LOGLEVEL"


class LogLevelEnum(IntEnum):
    """Уровни loguru, включая TRACE и SUCCESS, которых нет в logging."""

    TRACE = 5
    DEBUG = 10
    INFO = 20
    SUCCESS = 25
    WARNING = 30
    ERROR = 40
    CRITICAL = 50

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            name = value.strip().upper()
            if name.isdigit():
                return cls(int(name))
            if name == "WARN":
                return cls.WARNING
            for member in cls:
                if member.name == name:
                    return member
        return super()._missing_(value)

    @classmethod
    def from_env(cls, default: "LogLevelEnum | None" = None) -> "LogLevelEnum":
        default = cls.INFO if default is None else default
        raw = os.getenv(LOGLEVEL_ENV, "").strip()
        if not raw:
            return default
        try:
            return cls(raw)
        except ValueError:
            logger.warning(f"{LOGLEVEL_ENV}={raw!r} не распознан, используется {default.name}")
            return default


def configure_logging(level: LogLevelEnum | None = None) -> LogLevelEnum:
    """Один sink в stderr: stdout остаётся под CSV/JSON вывод."""
    level = LogLevelEnum.from_env() if level is None else level
    logger.remove()
    logger.add(sys.stderr, level=level.value)
    return level
