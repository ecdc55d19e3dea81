"""Unit tests for runtime settings."""

import pytest

from surfrig.config import Settings, get_settings, reset_settings


class TestSettings:
    """Tests for defaults and environment overrides."""

    def test_defaults(self):
        """Model defaults match the documented values."""
        settings = Settings()
        assert settings.analyze_trials == 3
        assert settings.type_trials == 5
        assert settings.type_sizes == (4, 5, 6)
        assert settings.sample_height == 10**6
        assert settings.seed == 0

    def test_environment_override(self):
        """SURFRIG_* variables override defaults."""
        settings = Settings.from_env(
            {"SURFRIG_ANALYZE_TRIALS": "7", "SURFRIG_TYPE_SIZES": "5,6"}
        )
        assert settings.analyze_trials == 7
        assert settings.type_sizes == (5, 6)

    def test_invalid_value_names_variable(self):
        """A bad value reports the variable name."""
        with pytest.raises(ValueError, match="SURFRIG_WORKERS"):
            Settings.from_env({"SURFRIG_WORKERS": "0"})

    def test_log_level_upper_cased(self):
        """Log levels are normalized."""
        assert Settings(log_level="debug").log_level == "DEBUG"

    def test_singleton(self, monkeypatch):
        """get_settings caches until reset."""
        first = get_settings()
        assert get_settings() is first
        monkeypatch.setenv("SURFRIG_SEED", "11")
        reset_settings()
        assert get_settings().seed == 11

    def test_fixture_height(self, settings):
        """The test environment samples with a small height."""
        assert settings.sample_height == 1000
