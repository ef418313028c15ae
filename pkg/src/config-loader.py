"""YAML configuration loader with ${VAR} environment substitution."""

import logging
import os
import re
from functools import lru_cache
from pathlib import Path

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

_CONFIG_DIR = Path(__file__).parents[1] / "config"
_ENV_VAR = re.compile(r"\$\{(\w+)\}")

load_dotenv()


@lru_cache(maxsize=None)
def load_config(name: str, config_dir: Path = _CONFIG_DIR) -> dict:
    """Load ``config/<name>.yaml`` with ${VAR} replaced by environment values.

    Unset variables become empty strings, which YAML reads as null.
    """
    path = config_dir / f"{name}.yaml"
    if not path.exists():
        raise FileNotFoundError(f"Missing config file: {path}")
    text = _ENV_VAR.sub(lambda m: os.environ.get(m.group(1), ""), path.read_text())
    cfg = yaml.safe_load(text) or {}
    logger.debug("Loaded config %s (%d sections)", path.name, len(cfg))
    return cfg


def section(name: str, key: str) -> dict:
    """Return one top-level section of a config file (empty dict when absent)."""
    return dict(load_config(name).get(key) or {})


def worker_count() -> int | None:
    """Worker cap from runtime.threads (SOCNET_THREADS); None means library default."""
    raw = load_config("runtime").get("threads")
    if raw in (None, ""):
        return None
    count = int(raw)
    if count < 1:
        raise ValueError(f"SOCNET_THREADS must be a positive integer, got {raw!r}")
    return count


def log_level() -> str:
    return str(load_config("runtime").get("log_level") or "INFO").upper()
