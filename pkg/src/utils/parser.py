import json
from pathlib import Path
from typing import Any, Dict, Union

from src.models.errors import ConfigError


def parse_json_config(source: Union[str, Path]) -> Dict[str, Any]:
    """
    Reads a JSON run configuration.

    Args:
        source: path of the JSON file.

    Returns:
        The decoded JSON object.

    Raises:
        ConfigError: the file cannot be read, is not valid JSON (the message
            carries the line and column of the first syntax error) or does not
            hold an object.
    """
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read configuration {path}: {e.strerror}") from e

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON in {path}: {e.msg}", line=e.lineno, column=e.colno) from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return data
