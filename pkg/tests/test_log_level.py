import pytest

from settings.log_level import LogLevelEnum, configure_logging


@pytest.mark.parametrize(
    ("raw", "expected"),
    [("debug", LogLevelEnum.DEBUG), (" Success ", LogLevelEnum.SUCCESS), ("warn", LogLevelEnum.WARNING), ("5", LogLevelEnum.TRACE)],
)
def test_parse_level(raw, expected):
    assert LogLevelEnum(raw) is expected


def test_unknown_level_is_rejected():
    with pytest.raises(ValueError):
        LogLevelEnum("verbose")


def test_level_from_env(monkeypatch):
    monkeypatch.setenv("LOGLEVEL", "error")
    assert LogLevelEnum.from_env() is LogLevelEnum.ERROR
    monkeypatch.setenv("LOGLEVEL", "verbose")
    assert LogLevelEnum.from_env() is LogLevelEnum.INFO
    monkeypatch.delenv("LOGLEVEL")
    assert LogLevelEnum.from_env(LogLevelEnum.DEBUG) is LogLevelEnum.DEBUG


def test_configure_logging_returns_level():
    assert configure_logging(LogLevelEnum.WARNING) is LogLevelEnum.WARNING
