import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from src.errors import ConfigError

logger = logging.getLogger("HeinzConstants.Config")

MIN_TOL = 1e-13
MIN_DIMENSION = 2
MAX_DIMENSION = 64

class Command(Enum):
    CONSTANTS = "constants"
    PROFILE = "profile"
    VERIFY = "verify"

class VerifyTarget(Enum):
    SCHWARZ = "schwarz"
    RATIO = "ratio"
    MONOTONE = "monotone"
    SHARPNESS = "sharpness"
    IDENTITIES = "identities"
    POSITIVITY = "positivity"
    DERIVATIVE = "derivative"
    CONSTANTS = "constants"

class OutputFormat(Enum):
    TABLE = "table"
    CSV = "csv"
    JSON = "json"

@dataclass
class RunConfig:
    """Everything one command needs, parsed and validated."""
    command: Command
    n_values: List[int] = field(default_factory=lambda: [2, 3, 4])
    target: Optional[VerifyTarget] = None
    which: str = "U"
    tol: float = 1e-12
    seed: int = 7
    samples: int = 200_000
    maps: int = 20
    grid: Optional[List[float]] = None
    radii: List[float] = field(default_factory=lambda: [0.2, 0.5, 0.8, 0.95])
    r_values: Optional[List[float]] = None
    m_values: List[int] = field(default_factory=lambda: [2, 5, 20, 100])
    k_max: int = 50
    literal: bool = False
    output: Optional[str] = None
    fmt: Optional[OutputFormat] = None

    def validate(self) -> None:
        """Check the run configuration.

        Raises:
            ConfigError: a value is out of range
        """
        if not self.n_values:
            raise ConfigError("At least one dimension is required")
        for n in self.n_values:
            if not MIN_DIMENSION <= n <= MAX_DIMENSION:
                raise ConfigError(f"Dimension {n} outside [{MIN_DIMENSION}, {MAX_DIMENSION}]")
        if not math.isfinite(self.tol) or self.tol < MIN_TOL:
            raise ConfigError(f"tol must be at least {MIN_TOL}, got {self.tol}")
        if self.which not in ("U", "V"):
            raise ConfigError(f"--which must be U or V, got {self.which}")
        if self.command is Command.VERIFY and self.target is None:
            raise ConfigError("verify needs a target")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.maps < 0:
            raise ConfigError(f"maps must be non-negative, got {self.maps}")
        if self.k_max < 1:
            raise ConfigError(f"k-max must be at least 1, got {self.k_max}")
        if any(m < 2 for m in self.m_values):
            raise ConfigError(f"m values must be at least 2, got {self.m_values}")
        for name, values in (('grid', self.grid), ('radii', self.radii), ('r', self.r_values)):
            if values is not None and any(not 0 <= v <= 1 for v in values):
                raise ConfigError(f"{name} values must lie in [0, 1], got {values}")

    @property
    def output_format(self) -> OutputFormat:
        if self.fmt is not None:
            return self.fmt
        if self.command is Command.CONSTANTS:
            return OutputFormat.TABLE
        if self.command is Command.PROFILE:
            return OutputFormat.CSV
        return OutputFormat.JSON

def parse_n_list(text: str) -> List[int]:
    """Parse ``2``, ``2,5,7`` or ``2..8``."""
    try:
        if ".." in text:
            start, stop = text.split("..", 1)
            values = list(range(int(start), int(stop) + 1))
        else:
            values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"Cannot parse dimension list {text!r}")
    if not values:
        raise ConfigError(f"Empty dimension list {text!r}")
    return values

def parse_grid(text: str) -> List[float]:
    """Parse ``start:step:stop`` (inclusive) or a single value.

    Points are ``start + i * step`` rounded to 12 decimals, so ``0:0.1:0.9``
    gives exactly ten radii.
    """
    parts = text.split(":")
    try:
        numbers = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"Cannot parse grid {text!r}")
    if len(numbers) == 1:
        return numbers
    if len(numbers) != 3:
        raise ConfigError(f"Grid must be start:step:stop, got {text!r}")
    start, step, stop = numbers
    if step <= 0:
        raise ConfigError(f"Grid step must be positive, got {step}")
    if stop < start:
        raise ConfigError(f"Grid stop {stop} is below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]

def parse_float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"Cannot parse number list {text!r}")

def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"Cannot parse integer list {text!r}")

def config_from_args(args) -> RunConfig:
    """Build a validated RunConfig from an argparse namespace."""
    command = Command(args.command)
    config = RunConfig(command=command)
    config.n_values = parse_n_list(args.n) if args.n else config.n_values
    config.tol = args.tol
    config.output = args.output
    config.fmt = OutputFormat(args.format) if args.format else None

    if command is Command.PROFILE:
        config.which = args.which
        config.grid = parse_grid(args.grid)
    elif command is Command.VERIFY:
        config.target = VerifyTarget(args.target)
        config.seed = args.seed
        config.samples = args.samples
        config.maps = args.maps
        config.k_max = args.k_max
        config.literal = args.literal
        config.grid = parse_grid(args.grid) if args.grid else None
        config.r_values = parse_float_list(args.r) if args.r else None
        if args.radii:
            config.radii = parse_float_list(args.radii)
        if args.m:
            config.m_values = parse_int_list(args.m)
    config.validate()
    return config
