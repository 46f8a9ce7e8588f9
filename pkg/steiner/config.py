"""
Steiner loop engine - configuration

Resource caps and output options with environment variable support.
Values are resolved from defaults, STEINER_* environment variables (or a
.env file), an optional YAML file and finally explicit overrides.
"""

import logging
import os
from typing import Optional

import yaml
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from steiner.errors import ConfigurationValidationError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "STEINER_CONFIG"


class Settings(BaseSettings):
    """
    Engine settings. Every cap is a hard limit: exceeding it raises
    ResourceLimitError instead of truncating a result.
    """

    model_config = SettingsConfigDict(
        env_prefix="STEINER_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Alphabet
    generators: int = Field(default=3, gt=0)

    # Word and subloop caps
    max_word_len: int = Field(default=64, gt=0)
    max_closure_size: int = Field(default=20000, gt=0)
    max_elements: int = Field(default=200000, gt=0)

    # Group searches
    max_image_len: int = Field(default=4096, gt=0)
    max_group_order: int = Field(default=10 ** 7, gt=0)
    max_points: int = Field(default=15, gt=0)
    max_search_nodes: int = Field(default=2000000, gt=0)
    depth: int = Field(default=8, gt=0)
    threads: int = Field(default=1, gt=0)

    # Output
    json_output: bool = False
    log_level: str = "WARNING"


def _read_yaml(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as file:
        data = yaml.safe_load(file) or {}
    if not isinstance(data, dict):
        raise ConfigurationValidationError(f"Configuration file {path} must contain a mapping")
    return data


def load_settings(path: Optional[str] = None, **overrides) -> Settings:
    """
    Build Settings from the environment, an optional YAML file and overrides.
    Overrides set to None are ignored so CLI flags can be passed through as-is.
    """
    path = path or os.getenv(CONFIG_ENV_VAR)
    values = {}
    if path:
        try:
            values.update(_read_yaml(path))
        except OSError as e:
            raise ConfigurationValidationError(f"Cannot read configuration file {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigurationValidationError(f"Invalid YAML in {path}: {e}") from e
        logger.debug("Loaded configuration file %s", path)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigurationValidationError(str(e)) from e


_active: Optional[Settings] = None


def get_settings() -> Settings:
    global _active  # pylint: disable=global-statement
    if _active is None:
        _active = load_settings()
    return _active


def use_settings(settings: Optional[Settings]):
    """Make settings the process-wide defaults; None falls back to the environment on next use."""
    global _active  # pylint: disable=global-statement
    _active = settings
