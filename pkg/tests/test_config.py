"""
Tests for settings resolution: defaults, environment, YAML file and overrides.
"""
import pytest

from steiner.config import Settings, get_settings, load_settings, use_settings
from steiner.errors import ConfigurationValidationError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("STEINER_CONFIG", "STEINER_MAX_WORD_LEN", "STEINER_GENERATORS", "STEINER_THREADS"):
        monkeypatch.delenv(name, raising=False)
    yield
    use_settings(None)


class TestLoadSettings:

    def test_defaults(self):
        settings = load_settings()
        assert settings.generators == 3
        assert settings.max_word_len == 64
        assert settings.max_points == 15
        assert settings.json_output is False

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("STEINER_MAX_WORD_LEN", "12")
        assert load_settings().max_word_len == 12

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "steiner.yaml"
        path.write_text("generators: 4\ndepth: 5\n", encoding="utf-8")
        settings = load_settings(str(path))
        assert settings.generators == 4
        assert settings.depth == 5

    def test_yaml_from_environment(self, tmp_path, monkeypatch):
        path = tmp_path / "steiner.yaml"
        path.write_text("threads: 2\n", encoding="utf-8")
        monkeypatch.setenv("STEINER_CONFIG", str(path))
        assert load_settings().threads == 2

    def test_overrides_win_over_file(self, tmp_path):
        path = tmp_path / "steiner.yaml"
        path.write_text("generators: 4\n", encoding="utf-8")
        assert load_settings(str(path), generators=5).generators == 5

    def test_none_overrides_ignored(self):
        assert load_settings(generators=None, threads=None).generators == 3

    def test_invalid_value(self):
        with pytest.raises(ConfigurationValidationError):
            load_settings(max_word_len=0)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationValidationError):
            load_settings(str(tmp_path / "absent.yaml"))

    def test_file_must_hold_mapping(self, tmp_path):
        path = tmp_path / "steiner.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigurationValidationError):
            load_settings(str(path))


class TestActiveSettings:

    def test_use_settings(self):
        settings = Settings(generators=6)
        use_settings(settings)
        assert get_settings() is settings

    def test_reset_reads_environment(self, monkeypatch):
        use_settings(Settings(generators=6))
        use_settings(None)
        monkeypatch.setenv("STEINER_GENERATORS", "2")
        assert get_settings().generators == 2
