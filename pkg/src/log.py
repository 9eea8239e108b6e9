import logging
import sys
from pathlib import Path
from typing import Optional, Union

from init import TOOL_NAME, VERSION

LOG_FILE: str = 'analysis.log'
LOG_FORMAT: str = '%(asctime)s %(levelname)s %(message)s'


def setup_logging(directory: Union[str, Path], verbose: bool = False) -> Optional[Path]:
    """Setup logging with a run log file and a console handler on stderr.

    The file records INFO and above, DEBUG with ``verbose``. The console
    shows warnings only unless ``verbose`` is set; stdout is left to the
    report.

    Args:
        directory: Directory path where log file will be created
        verbose: Also log debug records to the file and info records to stderr

    Returns:
        Path of the log file, or None when only the console could be set up
    """
    level = logging.DEBUG if verbose else logging.INFO
    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.INFO if verbose else logging.WARNING)
    directory = Path(directory)

    try:
        # Create directory if it doesn't exist
        directory.mkdir(parents=True, exist_ok=True)
        log_path = directory / LOG_FILE
        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setLevel(level)
        logging.basicConfig(level=level, format=LOG_FORMAT, handlers=[file_handler, console], force=True)

    except OSError as e:
        print(f"Failed to setup logging: {e}", file=sys.stderr)
        # Fallback to console-only logging
        logging.basicConfig(level=level, format=LOG_FORMAT, handlers=[console], force=True)
        return None

    logging.info(f"{TOOL_NAME} {VERSION} log file: {log_path}")
    return log_path
