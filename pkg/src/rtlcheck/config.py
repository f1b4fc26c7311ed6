import logging
import os
from copy import deepcopy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import tomli
from dotenv import dotenv_values

from rtlcheck.errors import UsageError

DEFAULT_CONFIG_PATH = Path("rtlcheck.toml")
SEED_VARIABLE = "CHAMOIS_LITE_SEED"
# looked up in this order
SEED_VARIABLES = (SEED_VARIABLE, "RTLCHECK_SEED")

DEFAULT_CONFIG: dict[str, dict[str, Any]] = {
    "SOLVER": {"fuel_factor": 50},
    "LOGGING": {"level": "INFO", "timezone": "UTC", "log_path": ""},
    "RANDOM": {"seed": 0},
    "BENCH": {
        "join_sizes": [1000, 2000, 4000, 8000],
        "touched_keys": 10,
        "chain_lengths": [10, 20, 40],
        "set_sizes": [1000, 2000, 4000, 8000],
    },
}


def load_config(
    config_path: Path | None, logger: logging.Logger | None = None
) -> dict[str, Any]:
    """
    Load the configuration file of the toolkit, merged over the defaults.

    Parameters
    ----------
    config_path : Path | None
        The path of the TOML configuration. None means the default path
        ``rtlcheck.toml``, which may be absent.
    logger : logging.Logger, optional
        where to report configuration problems

    Returns
    -------
    dict[str, Any]
        The dictionary containing the configuration, one entry per section

    Raises
    ------
    UsageError
        if an explicitly given configuration file does not exist
    """
    config = deepcopy(DEFAULT_CONFIG)
    explicit = config_path is not None
    path = config_path if explicit else DEFAULT_CONFIG_PATH

    if not path.exists():
        if explicit:
            if logger is not None:
                logger.error(f"Configuration file {path} does not exist.")
            raise UsageError(f"configuration file {path} does not exist")
        return config

    with open(path, "rb") as f:
        toml_dict = tomli.load(f)

    for section, values in toml_dict.items():
        if isinstance(values, dict):
            config.setdefault(section, {}).update(values)
        else:
            config[section] = values
    return config


def resolve_seed(
    cli_seed: int | None, config: dict[str, Any], env_file: Path = Path(".env")
) -> int:
    """
    Pick the seed of the random generators.

    The ``--seed`` flag wins, then the ``CHAMOIS_LITE_SEED`` variable or its
    alias ``RTLCHECK_SEED`` (process environment first, then the ``.env``
    file), then ``[RANDOM] seed``.

    Parameters
    ----------
    cli_seed : int | None
        value of the ``--seed`` flag, None if not given
    config : dict[str, Any]
        the loaded configuration
    env_file : Path, optional
        the dotenv file to look into, by default ".env"

    Returns
    -------
    int
        the seed
    """
    if cli_seed is not None:
        return cli_seed

    sources = [os.environ]
    if env_file.exists():
        sources.append(dotenv_values(env_file))

    for source in sources:
        for name in SEED_VARIABLES:
            raw = source.get(name)
            if raw is None:
                continue
            try:
                return int(raw)
            except ValueError as e:
                raise UsageError(f"{name} must be an integer, got {raw!r}") from e

    return int(config["RANDOM"]["seed"])


@dataclass
class Settings:
    """
    Typed view over the merged configuration dictionary.
    """

    config: dict[str, Any] = field(default_factory=lambda: deepcopy(DEFAULT_CONFIG))
    seed: int = 0

    @classmethod
    def load(
        cls,
        config_path: Path | None = None,
        cli_seed: int | None = None,
        logger: logging.Logger | None = None,
        env_file: Path = Path(".env"),
    ) -> "Settings":
        config = load_config(config_path, logger=logger)
        return cls(config=config, seed=resolve_seed(cli_seed, config, env_file))

    @property
    def fuel_factor(self) -> int:
        return int(self.config["SOLVER"]["fuel_factor"])

    def fuel_for(self, nb_locations: int) -> int:
        """
        Default fuel of the fixpoint engines for a function

        Parameters
        ----------
        nb_locations : int
            number of control locations of the function

        Returns
        -------
        int
            fuel_factor × nb_locations, at least 1
        """
        return max(1, self.fuel_factor * nb_locations)

    @property
    def log_level(self) -> str:
        return str(self.config["LOGGING"]["level"]).upper()

    @property
    def timezone(self) -> str:
        return str(self.config["LOGGING"]["timezone"])

    @property
    def log_path(self) -> Path | None:
        raw = self.config["LOGGING"].get("log_path", "")
        return Path(raw) if raw else None

    @property
    def bench(self) -> dict[str, Any]:
        return self.config["BENCH"]
