"""Tests for structured logging and settings."""

import json
import logging

from collection_sim.core.config import Settings
from collection_sim.core.logging_config import ColoredFormatter, JSONFormatter, setup_logging


def make_record(**extra_data):
    record = logging.LogRecord("collection_sim.test", logging.INFO, __file__, 10, "Run finished", None, None)
    if extra_data:
        record.extra_data = extra_data
    return record


class TestFormatters:
    """Record rendering."""

    def test_json_includes_extra_data(self):
        """Test that JSON lines carry extra data."""
        line = JSONFormatter().format(make_record(seed=3, window=(0.0, 400.0)))
        data = json.loads(line)
        assert data["message"] == "Run finished"
        assert data["level"] == "INFO"
        assert data["seed"] == 3
        assert data["window"] == [0.0, 400.0]

    def test_colored_appends_context_and_restores_level(self):
        """Test colored output with context."""
        record = make_record(rounds=12)
        line = ColoredFormatter(fmt="%(levelname)s %(message)s").format(record)
        assert line.endswith("| rounds=12")
        assert record.levelname == "INFO"

    def test_setup_logging_writes_file(self, tmp_path):
        """Test logging to a file."""
        log_file = tmp_path / "logs" / "run.log"
        setup_logging(level="DEBUG", log_file=str(log_file), json_format=True)
        logging.getLogger("collection_sim.test").info("hello", extra={"extra_data": {"seed": 1}})
        for handler in logging.getLogger().handlers:
            handler.flush()
        last = log_file.read_text(encoding="utf-8").strip().split("\n")[-1]
        assert json.loads(last)["seed"] == 1
        setup_logging(level="WARNING")


class TestSettings:
    """Environment-driven settings."""

    def test_defaults(self, monkeypatch):
        """Test settings defaults."""
        for key in ("ENVIRONMENT", "LOG_LEVEL", "DEFAULT_PROFILE", "DEFAULT_WORKERS"):
            monkeypatch.delenv(key, raising=False)
        settings = Settings(_env_file=None)
        assert settings.DEFAULT_PROFILE == "desk"
        assert settings.DEFAULT_WORKERS == 1
        assert settings.LOG_FILE is None

    def test_environment_overrides(self, monkeypatch):
        """Test settings read from the environment."""
        monkeypatch.setenv("DEFAULT_WORKERS", "6")
        monkeypatch.setenv("ENVIRONMENT", "production")
        settings = Settings(_env_file=None)
        assert settings.DEFAULT_WORKERS == 6
        assert settings.ENVIRONMENT == "production"
