# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# errors.py
from .templates import EXIT_NUMERIC, EXIT_PRECONDITION


class RlbesovError(Exception):
    """
    Root of the package exceptions.

    Parameters
    ----------
    message : str
        Human-readable description.
    **details
        Offending values (required range, both computed values, minimal order, ...),
        kept in ``self.details`` so reports can carry them.
    """

    exit_code = EXIT_PRECONDITION

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def __str__(self):
        text = super().__str__()
        if self.details:
            extra = ", ".join(f"{key}={value}" for key, value in self.details.items())
            text = f"{text} ({extra})"
        return text


class PreconditionError(RlbesovError, ValueError):
    """Rejected input: violated precondition, insufficient window, non-dyadic breakpoint."""

    exit_code = EXIT_PRECONDITION


class NumericFailure(RlbesovError, ArithmeticError):
    """Root finder, quadrature or truncation did not deliver the requested accuracy."""

    exit_code = EXIT_NUMERIC


class ConsistencyError(NumericFailure):
    """An identity the construction relies on failed its self-check."""


def exit_code_for(error):
    """Exit code of the command line for an exception raised by the library."""
    if isinstance(error, RlbesovError):
        return error.exit_code
    return EXIT_NUMERIC
