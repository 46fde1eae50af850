import argparse
import os
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional

from src.models.errors import ConfigError
from src.models.run_config import RunConfig
from src.utils.hashing import provenance_line
from src.utils.parser import parse_json_config

THREADS_ENV = "CBS_ANTILOC_THREADS"


class Command(ABC):
    """One CLI subcommand. `act` returns the process exit code."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self._raw_config: Dict[str, Any] = {}

    def load_config(self) -> RunConfig:
        config_path = getattr(self.args, "config", None)
        if not config_path:
            raise ConfigError(f"{self.args.command} needs --config PATH")
        self._raw_config = parse_json_config(config_path)
        config = RunConfig.from_dict(self._raw_config)
        if getattr(self.args, "seed", None) is not None:
            config = config.with_seed(self.args.seed)
        return config

    @abstractmethod
    def act(self) -> int:
        pass

    def threads(self) -> Optional[int]:
        """--threads, else CBS_ANTILOC_THREADS; 0 or unset means every core."""
        threads = getattr(self.args, "threads", None)
        if threads is None:
            env_value = os.getenv(THREADS_ENV)
            if env_value:
                try:
                    threads = int(env_value)
                except ValueError:
                    raise ConfigError(f"{THREADS_ENV}={env_value!r} is not an integer") from None
        if threads is not None and threads < 0:
            raise ConfigError("--threads must be non-negative")
        return threads or None

    def output_path(self, configured: str) -> Path:
        """The configured path, moved into --out DIR when that flag is given."""
        out_dir = getattr(self.args, "out", None)
        if out_dir:
            return Path(out_dir) / Path(configured).name
        return Path(configured)

    def provenance(self, seed: int) -> str:
        return provenance_line(self._raw_config, seed)
