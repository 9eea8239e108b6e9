from typing import Optional
from dataclasses import dataclass, fields


@dataclass
class AnalysisConfig:
    """Configuration for analysis runs."""
    seed: int = 20260101
    fail_fast: bool = False
    witness_cap: int = 8
    commute_mode: str = 'symmetric'
    interval_cap: int = 10000
    unit_cap: int = 64
    polyhedral_coefficient_cap: int = 32
    window_radius: int = 2
    decomposition_cap: int = 12
    random_bound: int = 1000
    include_timing: bool = False
    json_output: bool = False
    log_directory: Optional[str] = None


class ConfigManager:
    """Singleton configuration manager for the analysis tool."""
    _instance: Optional['ConfigManager'] = None
    _config: AnalysisConfig

    def __new__(cls) -> 'ConfigManager':
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._config = AnalysisConfig()
        return cls._instance

    @property
    def config(self) -> AnalysisConfig:
        """Get the current configuration."""
        return self._config

    def update_config(self, **kwargs) -> None:
        """Update configuration with provided keyword arguments."""
        for key, value in kwargs.items():
            if hasattr(self._config, key):
                setattr(self._config, key, value)
            else:
                raise ValueError(f"Unknown configuration key: {key}")

    def reset(self) -> None:
        """Restore every field to its default."""
        defaults = AnalysisConfig()
        for field in fields(AnalysisConfig):
            setattr(self._config, field.name, getattr(defaults, field.name))


_config_manager = ConfigManager()


def provide_seed() -> int:
    """Get the seed shared by every random generator."""
    return _config_manager.config.seed


def set_seed(seed: int) -> None:
    """Set the random seed."""
    _config_manager.config.seed = seed


def provide_fail_fast() -> bool:
    return _config_manager.config.fail_fast


def set_fail_fast(fail_fast: bool) -> None:
    _config_manager.config.fail_fast = fail_fast


def provide_witness_cap() -> int:
    """Get the maximum number of witnesses kept per property."""
    return _config_manager.config.witness_cap


def provide_commute_mode() -> str:
    """Get the reading of "x and y commute" ('symmetric' or 'strict')."""
    return _config_manager.config.commute_mode


def set_commute_mode(mode: str) -> None:
    """Set the reading of "x and y commute"."""
    if mode not in ('symmetric', 'strict'):
        raise ValueError(f"Unknown commute mode: {mode}")
    _config_manager.config.commute_mode = mode


def provide_json_output() -> bool:
    return _config_manager.config.json_output


def set_json_output(json_output: bool) -> None:
    _config_manager.config.json_output = json_output


def provide_log_directory() -> Optional[str]:
    """Get the current log directory."""
    return _config_manager.config.log_directory


def set_log_directory(log_directory: str) -> None:
    """Set the log directory."""
    _config_manager.config.log_directory = log_directory


def update_config(**kwargs) -> None:
    """Update several configuration fields at once."""
    _config_manager.update_config(**kwargs)


def reset_config() -> None:
    """Restore the default configuration."""
    _config_manager.reset()


def get_config() -> AnalysisConfig:
    """Get the configuration instance for direct access."""
    return _config_manager.config
