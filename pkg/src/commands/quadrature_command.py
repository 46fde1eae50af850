from typing_extensions import override

from src.commands.command import Command
from src.services.quadrature_service import compare_with_monte_carlo
from src.utils.logger import log
from src.views.csv_view import write_quadrature_csv


class QuadratureCommand(Command):
    """Order-2 Monte Carlo against deterministic quadrature at the configured detunings."""

    @override
    def act(self) -> int:
        config = self.load_config()
        comparisons = compare_with_monte_carlo(
            config.channel,
            config.scheme(),
            config.cloud,
            config.quadrature_deltas,
            config.n_samples,
            config.seed,
            threads=self.threads(),
            tolerance=config.quadrature_tolerance,
        )
        path = write_quadrature_csv(self.output_path(config.csv_path), self.provenance(config.seed), comparisons)
        log(self.__class__.__name__, f"wrote {path}")

        failed = [comparison.delta for comparison in comparisons if not comparison.passed]
        if failed:
            log(self.__class__.__name__, f"quadrature mismatch beyond {config.quadrature_tolerance:.0%} at {failed}")
            return 1
        return 0
