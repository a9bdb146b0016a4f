import logging
import os
import sys
from typing import Optional

logger = logging.getLogger("HeinzConstants.Output")

def write_output(text: str, path: Optional[str] = None) -> None:
    """Write command output to a file or to stdout.

    Args:
        text: Rendered output
        path: Destination file; parent directories are created. ``None`` or
            ``-`` writes to stdout.
    """
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    # newline="" keeps "\n" line endings on every platform
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"Wrote {len(text)} bytes to {path}")
