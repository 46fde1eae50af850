import hashlib
import json
from typing import Any, Dict


def config_digest(config: Dict[str, Any]) -> str:
    """SHA-256 of the configuration in canonical JSON form (sorted keys, no whitespace)."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def provenance_line(config: Dict[str, Any], seed: int) -> str:
    return f"config_sha256={config_digest(config)} seed={seed}"
