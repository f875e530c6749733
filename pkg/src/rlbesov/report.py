# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# report.py
# JSON and CSV emission of reports
import json
import logging
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd

from .templates import SCHEMA_VERSION

logger = logging.getLogger(__name__)


def sanitize(value):
    """
    Turns a report payload into plain JSON types.

    Non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``, Fractions
    their ``"p/q"`` text, numpy scalars and arrays Python numbers and lists, tables a
    list of row dictionaries.

    Examples
    --------
    >>> sanitize({"a": float("inf"), "b": (1, Fraction(1, 2))})
    {'a': 'inf', 'b': [1, '1/2']}
    """
    if isinstance(value, dict):
        return {str(key): sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(item) for item in value]
    if isinstance(value, pd.DataFrame):
        return sanitize(value.to_dict(orient="records"))
    if isinstance(value, np.ndarray):
        return sanitize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def json_text(kind, payload):
    """Versioned JSON document ``{"schema": 1, "kind": <command>, ...}`` with sorted keys."""
    doc = {**sanitize(payload), "schema": SCHEMA_VERSION, "kind": kind}
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


def csv_text(table, columns):
    """``table`` restricted to ``columns`` as semicolon-separated text."""
    return table.to_csv(index=False, sep=";", columns=columns)


def emit(text, output=None):
    """
    Writes report text to ``output`` or, when it is ``None``, returns it for stdout.

    Returns
    -------
    str or None
        The text if nothing was written.
    """
    if output is None:
        return text
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error(f"Error while saving {path}: {e}")
        raise
    logger.info(f"File {path} has been saved successfully.")
    return None
