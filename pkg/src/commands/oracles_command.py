from typing_extensions import override

from src.commands.command import Command
from src.services.oracle_suite import run_oracles
from src.utils.decorators import log_execution
from src.utils.logger import log
from src.views.csv_view import write_oracle_csv

# the checks carry their own fixed seeds; files record this placeholder
ORACLE_SEED = 0


class OraclesCommand(Command):
    """Pre-flight suite; needs no configuration and has fixed seeds."""

    @override
    def load_config(self):
        return None

    @override
    @log_execution("oracles")
    def act(self) -> int:
        results = run_oracles()
        failed = [result.name for result in results if not result.passed]
        if getattr(self.args, "out", None):
            path = write_oracle_csv(self.output_path("oracles.csv"), self.provenance(ORACLE_SEED), results)
            log(self.__class__.__name__, f"wrote {path}")
        if failed:
            log(self.__class__.__name__, f"{len(failed)} of {len(results)} oracles failed: {', '.join(failed)}")
            return 1
        log(self.__class__.__name__, f"all {len(results)} oracles passed")
        return 0
