from typing_extensions import override

from src.commands.command import Command
from src.models.errors import InvariantViolation
from src.services.spectrum_orchestrator import check_record, mc_spectrum, xef_minimum
from src.utils.logger import log
from src.views.csv_view import write_spectrum_csv
from src.views.svg_view import write_spectrum_svg


class SpectrumCommand(Command):
    """Monte-Carlo scan of the backscattering enhancement over the detuning grid."""

    @override
    def act(self) -> int:
        config = self.load_config()
        scheme = config.scheme()
        records = mc_spectrum(
            config.channel,
            scheme,
            config.cloud,
            config.deltas(),
            config.n_samples,
            config.n_max_order,
            config.seed,
            threads=self.threads(),
        )

        for record in records:
            problems = check_record(record)
            if problems:
                raise InvariantViolation(f"delta={record.delta}: " + "; ".join(problems))

        provenance = self.provenance(config.seed)
        csv_path = write_spectrum_csv(self.output_path(config.csv_path), provenance, records)
        log(self.__class__.__name__, f"wrote {csv_path}")
        if config.plot_path:
            svg_path = write_spectrum_svg(
                self.output_path(config.plot_path), provenance, records, scheme, title=scheme.name
            )
            log(self.__class__.__name__, f"wrote {svg_path}")

        delta, x_ef = xef_minimum(records)
        log(self.__class__.__name__, f"smallest X_EF={x_ef:.5f} at delta={delta:+.3f}")
        return 0
