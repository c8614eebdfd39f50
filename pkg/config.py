import copy
import json
import logging
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

from errors import ConfigError

# Configure logging
logger = logging.getLogger(__name__)

# Pick up a local .env before anything reads the environment
load_dotenv()

DEFAULTS = {
    "spectral": {
        "n_samples": 256,
    },
    "norms": {
        "radii_per_level": 16,
        "max_levels": 60,
        "tail_tol": 1e-8,
    },
    "diffeo": {
        "trials": 64,
        "trial_band": 16,
    },
    "extension": {
        "n_samples": 4096,
        "levels": 5,
        "y_max": 0.125,
    },
    "solver": {
        "spacing": 1.0 / 32.0,
        "mu_cap": 0.7,
        "tol": 1e-8,
        "max_iter": 200,
        "boundary_samples": 1024,
        "jet_samples": 256,
        "extraction_radius": 1.0,
    },
    "bounds": {
        "alpha": 1.0,
        "lambda": None,
        "n_max": 200,
        "zeta_radii": [0.0, 0.3, 0.6, 0.9],
        "zeta_angles": 8,
    },
}


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw in (None, ""):
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from e


@dataclass
class Settings:
    """Resolved configuration: JSON sections plus environment values."""

    sections: dict = field(default_factory=lambda: copy.deepcopy(DEFAULTS))
    threads: int = 4
    seed: int = 0
    source: str | None = None

    def get(self, section, key):
        return self.sections[section][key]

    def section(self, name):
        return dict(self.sections[name])

    def ladder(self) -> dict:
        """Radii-ladder keyword arguments for the B^Z and A^Z norms."""
        n = self.sections["norms"]
        return {"per_level": n["radii_per_level"], "max_levels": n["max_levels"], "tail_tol": n["tail_tol"]}

    def environment(self):
        """Flat view recorded in every report."""
        flat = {"threads": self.threads, "seed": self.seed}
        for name, values in self.sections.items():
            for key, value in values.items():
                flat[f"{name}.{key}"] = value
        return flat


def load_settings(path=None, seed=None):
    """
    Build Settings from defaults, the JSON config file and the environment.

    Args:
        path (str, optional): Config file; falls back to ZQ_CONFIG.
        seed (int, optional): Overrides ZQ_SEED.

    Returns:
        Settings: The merged configuration.
    """
    sections = copy.deepcopy(DEFAULTS)
    path = path or os.environ.get("ZQ_CONFIG") or None
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        if not isinstance(overrides, dict):
            raise ConfigError(f"Config {path} must hold a JSON object")
        for name, values in overrides.items():
            if name not in sections or not isinstance(values, dict):
                raise ConfigError(f"Unknown config section {name!r}")
            for key, value in values.items():
                if key not in sections[name]:
                    raise ConfigError(f"Unknown config key {name}.{key}")
                sections[name][key] = value
        logger.info(f"Loaded config from {path}")

    threads = _env_int("ZQ_THREADS", 4)
    if threads < 1:
        raise ConfigError("ZQ_THREADS must be at least 1")
    resolved_seed = _env_int("ZQ_SEED", 0) if seed is None else int(seed)
    return Settings(sections=sections, threads=threads, seed=resolved_seed, source=path)


def log_level():
    return os.environ.get("ZQ_LOG_LEVEL", "INFO").upper()
