import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from src.models.beat_spectrum import BeatSpectrum
from src.models.spectrum_record import SpectrumRecord
from src.services.oracle_suite import OracleResult
from src.services.quadrature_service import QuadratureComparison

SPECTRUM_COLUMNS = (
    "delta_gamma",
    "sigma_single",
    "sigma_ladder",
    "sigma_interf",
    "X_EF",
    "R2",
    "stderr_X_EF",
    "stderr_R2",
    "resampled_paths",
)
BEAT_COLUMNS = ("omega_offset_gamma", "I1", "I2")
QUADRATURE_COLUMNS = (
    "delta_gamma",
    "mc_ladder",
    "mc_ladder_stderr",
    "quad_ladder",
    "mc_interf",
    "mc_interf_stderr",
    "quad_interf",
    "passed",
)
ORACLE_COLUMNS = ("oracle", "passed", "detail")


def format_value(value) -> str:
    """Locale-independent text of one cell; floats keep 12 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def write_table(
    path: Union[str, Path], provenance: str, columns: Sequence[str], rows: Iterable[Sequence]
) -> Path:
    """Writes '# provenance', the header and the rows with LF line endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(f"# {provenance}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def spectrum_rows(records: Sequence[SpectrumRecord]) -> List[tuple]:
    return [
        (
            record.delta,
            record.sigma_single,
            record.sigma_ladder,
            record.sigma_interf,
            record.X_EF,
            record.R2,
            record.stderr_X_EF,
            record.stderr_R2,
            record.resampled_paths,
        )
        for record in records
    ]


def write_spectrum_csv(path, provenance: str, records: Sequence[SpectrumRecord]) -> Path:
    return write_table(path, provenance, SPECTRUM_COLUMNS, spectrum_rows(records))


def write_beat_csv(path, provenance: str, single: BeatSpectrum, double: BeatSpectrum) -> Path:
    if len(single.omega_grid) != len(double.omega_grid):
        raise ValueError("I1 and I2 must share the omega grid")
    rows = (
        (float(omega), float(i1), float(i2))
        for omega, i1, i2 in zip(single.omega_grid, single.intensity, double.intensity)
    )
    return write_table(path, provenance, BEAT_COLUMNS, rows)


def write_quadrature_csv(path, provenance: str, comparisons: Sequence[QuadratureComparison]) -> Path:
    rows = (
        (
            c.delta,
            c.mc_ladder,
            c.mc_ladder_stderr,
            c.quad_ladder,
            c.mc_interf,
            c.mc_interf_stderr,
            c.quad_interf,
            c.passed,
        )
        for c in comparisons
    )
    return write_table(path, provenance, QUADRATURE_COLUMNS, rows)


def write_oracle_csv(path, provenance: str, results: Sequence[OracleResult]) -> Path:
    return write_table(path, provenance, ORACLE_COLUMNS, ((r.name, r.passed, r.detail) for r in results))
