# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# conftest.py
# Shared weights and truncations of the test suite
import pytest

from src.rlbesov.criteria import Truncation
from src.rlbesov.weights import constant_weight, power_weight


@pytest.fixture
def unit_weight():
    return constant_weight()


@pytest.fixture
def u_ex1():
    """``(1+|x|)**-3``."""
    return power_weight(3)


@pytest.fixture
def v_ex1():
    """``(1+|x|)**(sp - 3)`` with ``s = 2``, ``p = 2``."""
    return power_weight(3, delta=4)


@pytest.fixture
def small_trunc():
    return Truncation(tau_window=16, series_window=64, d_max=4)
