import pytest

from src.models.errors import ConfigError
from src.utils.decorators import log_execution, retry_on
from src.utils.hashing import config_digest, provenance_line
from src.utils.logger import log
from src.utils.parser import parse_json_config


def test_parse_json_config_reads_object(tmp_path):
    # Arrange
    path = tmp_path / "run.json"
    path.write_text('{"seed": 3}', encoding="utf-8")

    # Act & Assert
    assert parse_json_config(path) == {"seed": 3}


def test_parse_json_config_reports_position_of_syntax_error(tmp_path):
    # Arrange
    path = tmp_path / "broken.json"
    path.write_text('{\n  "seed": 3,\n  "n_samples": \n}', encoding="utf-8")

    # Act
    with pytest.raises(ConfigError) as error:
        parse_json_config(path)

    # Assert
    assert error.value.line == 4
    assert error.value.column == 1
    assert "line 4" in str(error.value)


def test_parse_json_config_rejects_missing_file_and_non_object(tmp_path):
    # Arrange
    array = tmp_path / "array.json"
    array.write_text("[1, 2]", encoding="utf-8")

    # Act & Assert
    with pytest.raises(ConfigError):
        parse_json_config(tmp_path / "missing.json")
    with pytest.raises(ConfigError):
        parse_json_config(array)


def test_config_digest_ignores_key_order():
    # Act
    first = config_digest({"seed": 1, "cloud": {"sigma": 10, "shape": "sphere"}})
    second = config_digest({"cloud": {"shape": "sphere", "sigma": 10}, "seed": 1})

    # Assert
    assert first == second
    assert len(first) == 64
    assert first != config_digest({"seed": 2, "cloud": {"sigma": 10, "shape": "sphere"}})


def test_provenance_line_carries_digest_and_seed():
    assert provenance_line({}, 9) == f"config_sha256={config_digest({})} seed=9"


def test_retry_on_retries_until_success():
    # Arrange
    calls = []

    @retry_on(ArithmeticError, max_attempts=3)
    def flaky():
        calls.append(1)
        if len(calls) < 3:
            raise ZeroDivisionError("not yet")
        return "done"

    # Act & Assert
    assert flaky() == "done"
    assert len(calls) == 3


def test_retry_on_reraises_after_last_attempt():
    # Arrange
    @retry_on(ValueError, max_attempts=2)
    def always_fails():
        raise ValueError("never")

    # Act & Assert
    with pytest.raises(ValueError):
        always_fails()


def test_log_execution_logs_start_and_end(monkeypatch, capsys):
    # Arrange
    monkeypatch.delenv("CBS_ANTILOC_QUIET")

    @log_execution("job")
    def job():
        return 5

    # Act
    result = job()

    # Assert
    output = capsys.readouterr().out
    assert result == 5
    assert "[job] START" in output
    assert "END" in output


def test_log_execution_logs_failure_and_reraises(monkeypatch, capsys):
    # Arrange
    monkeypatch.delenv("CBS_ANTILOC_QUIET")

    @log_execution("job")
    def job():
        raise RuntimeError("boom")

    # Act & Assert
    with pytest.raises(RuntimeError):
        job()
    assert "FAILED - boom" in capsys.readouterr().out


def test_log_is_silenced_by_quiet_variable(capsys):
    # Act
    log("source", "hidden")

    # Assert
    assert capsys.readouterr().out == ""
