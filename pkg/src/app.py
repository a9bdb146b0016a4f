import logging

from src.cli.commands import run_command
from src.cli.config import RunConfig
from src.errors import ComputationError, ConfigError

logger = logging.getLogger("HeinzConstants.App")

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_COMPUTATION_ERROR = 2
EXIT_BAD_ARGUMENTS = 3

class App:
    """Runs one command of the Heinz constants toolkit."""

    def __init__(self, config: RunConfig):
        """Initialize the application.

        Args:
            config: Validated run configuration
        """
        self.config = config

    def run(self) -> int:
        """Run the configured command.

        Returns:
            int: Process exit code
        """
        command = self.config.command.value
        if self.config.target is not None:
            command = f"{command} {self.config.target.value}"
        logger.info(f"Running {command} for n={self.config.n_values}")
        try:
            return run_command(self.config)
        except ConfigError as e:
            logger.error(f"Invalid configuration: {e}")
            return EXIT_BAD_ARGUMENTS
        except ComputationError as e:
            logger.error(f"Computation failed in {command}: {e}")
            return EXIT_COMPUTATION_ERROR
        except ValueError as e:
            # argument combinations only the library can reject, e.g. r outside a check's range
            logger.error(f"Invalid arguments for {command}: {e}")
            return EXIT_BAD_ARGUMENTS
        finally:
            logger.info(f"Finished {command}")
