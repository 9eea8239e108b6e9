from pathlib import Path
from provider import provide_log_directory


def get_base_directory() -> Path:
    """Get the base directory for a run."""
    return Path('.')


def get_log_root() -> Path:
    """Get the directory that holds one log directory per run."""
    return get_base_directory() / 'logs' / 'pealab'


def get_corpus_dir() -> Path:
    """Get the default output directory of the corpus command."""
    return get_base_directory() / 'corpus'


def get_run_log_dir() -> Path:
    """Get the log directory of the current run, falling back to the log root."""
    log_dir = provide_log_directory()
    if log_dir:
        return Path(log_dir)
    return get_log_root()


# File suffixes understood by the command line
PEA_SUFFIX: str = '.pea'
PMV_SUFFIX: str = '.pmv'
GRP_SUFFIX: str = '.grp'
STATE_SUFFIX: str = '.state'
WINDOW_SUFFIX: str = '.window'

# Exit codes
EXIT_OK: int = 0
EXIT_PARSE_ERROR: int = 1
EXIT_AXIOM_VIOLATION: int = 2
EXIT_ANALYSIS_ERROR: int = 3

# Tool information embedded in every report
TOOL_NAME: str = 'pealab'
VERSION: str = 'v1.0.0'
