import numpy as np
import pytest

from src.models.beat_spectrum import BeatSpectrum
from src.models.spectrum_record import SpectrumRecord
from src.views.csv_view import SPECTRUM_COLUMNS, format_value, write_beat_csv, write_spectrum_csv
from src.views.svg_view import write_spectrum_svg

PROVENANCE = "config_sha256=abc seed=1"


def _records():
    return [
        SpectrumRecord(delta=-10.0, sigma_single=1.0, sigma_ladder=2.0, sigma_interf=0.5, X_EF=7 / 6, R2=0.25),
        SpectrumRecord(delta=-9.0, sigma_single=1.0, sigma_ladder=2.0, sigma_interf=-0.3, X_EF=0.9, R2=-0.15),
    ]


def test_format_value_is_locale_independent():
    assert format_value(True) == "1"
    assert format_value(12) == "12"
    assert format_value(1 / 3) == "0.333333333333"
    assert format_value(-2.5e-7) == "-2.5e-07"


def test_write_spectrum_csv_layout(tmp_path):
    # Act
    path = write_spectrum_csv(tmp_path / "nested" / "spectrum.csv", PROVENANCE, _records())

    # Assert
    raw = path.read_bytes()
    lines = raw.decode("utf-8").split("\n")
    assert b"\r" not in raw
    assert lines[0] == f"# {PROVENANCE}"
    assert lines[1] == ",".join(SPECTRUM_COLUMNS)
    assert lines[2].startswith("-10,1,2,0.5,1.16666666667,0.25")
    assert len([line for line in lines if line]) == 4


def test_write_beat_csv_rejects_mismatched_grids(tmp_path):
    # Arrange
    first = BeatSpectrum(np.linspace(-1, 1, 3), np.ones(3), 0.2, 0.1, 0.2)
    second = BeatSpectrum(np.linspace(-1, 1, 5), np.ones(5), 0.2, 0.1, 0.2)

    # Act & Assert
    with pytest.raises(ValueError):
        write_beat_csv(tmp_path / "beat.csv", PROVENANCE, first, second)


def test_write_spectrum_svg_is_deterministic(rb85, tmp_path):
    # Act
    first = write_spectrum_svg(tmp_path / "a.svg", PROVENANCE, _records(), rb85, title="rb85").read_bytes()
    second = write_spectrum_svg(tmp_path / "b.svg", PROVENANCE, _records(), rb85, title="rb85").read_bytes()

    # Assert
    assert first.startswith(f"<!-- {PROVENANCE} -->\n".encode())
    assert b"<svg" in first
    assert first == second
