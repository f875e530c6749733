# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# config.py
# Run configuration: key=value files merged with command-line flags
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path

from .criteria import Truncation
from .errors import PreconditionError
from .templates import (CONFIG_KEYS, D_MAX, DEFAULT_SEED, DEFAULT_TOL, FAMILY_SIZE, K_HI, K_LO, RL_WINDOW,
                        SERIES_WINDOW, TAIL_SLACK, TAU_WINDOW)
from .weights import parse_weight

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


@dataclass
class RunConfig:
    """
    One command of the command line with its truncation overrides, weights and output.

    ``params`` holds the parameters specific to the subcommand; the weights stay
    descriptor strings until ``weight()`` parses them.
    """

    group: str = None
    action: str = None
    tol: float = DEFAULT_TOL
    tau_window: int = TAU_WINDOW
    series_window: int = SERIES_WINDOW
    d_max: int = D_MAX
    rl_window: int = RL_WINDOW
    k_lo: float = K_LO
    k_hi: float = K_HI
    tail_slack: float = TAIL_SLACK
    family_size: int = FAMILY_SIZE
    seed: int = DEFAULT_SEED
    threads: int = None
    format: str = "json"
    output: str = None
    u: str = None
    v: str = None
    w: str = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise PreconditionError("unknown output format", format=self.format, known=FORMATS)
        for key in ("tau_window", "series_window", "d_max", "family_size"):
            if getattr(self, key) < 1:
                raise PreconditionError(f"{key} must be positive", **{key: getattr(self, key)})
        if self.threads is not None and self.threads < 1:
            raise PreconditionError("threads must be positive", threads=self.threads)
        if not self.tol > 0.0:
            raise PreconditionError("tol must be positive", tol=self.tol)

    @property
    def command(self):
        return f"{self.group} {self.action}"

    def truncation(self):
        return Truncation(self.tau_window, self.series_window, self.d_max)

    def weight(self, key, required=True):
        """The weight named ``key`` (``"u"``, ``"v"`` or ``"w"``) parsed from its descriptor."""
        text = getattr(self, key)
        if text is None:
            if required:
                raise PreconditionError(f"weight --{key} is required by '{self.command}'")
            return None
        return parse_weight(text)


def _typed(key, text):
    kind = CONFIG_KEYS[key]
    try:
        return kind(text)
    except ValueError as e:
        raise PreconditionError("config value has the wrong type", key=key, value=text,
                                expected=kind.__name__) from e


def read_config_file(path):
    """
    Reads a plain ``key=value`` configuration file.

    Blank lines and lines starting with ``#`` are ignored; keys must be among
    ``CONFIG_KEYS`` and values are converted with the type recorded there.

    Raises
    ------
    PreconditionError
        On a missing file, a line without ``=``, an unknown key or a badly typed value.
    """
    path = Path(path)
    if not path.is_file():
        raise PreconditionError("config file not found", path=str(path))
    values = {}
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise PreconditionError("config line is not key=value", path=str(path), line=number)
            key, text = (part.strip() for part in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise PreconditionError("unknown config key", key=key, line=number, known=sorted(CONFIG_KEYS))
            values[key] = _typed(key, text)
    logger.info(f"Config {path}: {len(values)} value(s) read")
    return values


def merge_config(file_values, flag_values):
    """
    ``RunConfig`` from template defaults, then the file, then the flags.

    Flags set to ``None`` leave the file value in place; flags that are not
    ``RunConfig`` fields land in ``params``.

    Examples
    --------
    >>> merge_config({"d_max": 6, "seed": 3}, {"d_max": 8, "seed": None, "n": 2}).d_max
    8
    """
    known = {f.name for f in fields(RunConfig)} - {"params"}
    merged = dict(file_values)
    params = {}
    for key, value in flag_values.items():
        if key in known:
            if value is not None:
                merged[key] = value
        else:
            params[key] = value
    return RunConfig(**merged, params=params)
