# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_harness.py
import math

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.rlbesov import harness
from src.rlbesov.besov import SpaceParams
from src.rlbesov.bspline import shifted_bspline
from src.rlbesov.criteria import Truncation
from src.rlbesov.errors import PreconditionError
from src.rlbesov.piecewise import pp_eval, zero
from src.rlbesov.rliouville import RLSpec, rl_apply
from src.rlbesov.templates import FAIL, MEMBER_RATIO_COLUMNS, PASS
from src.rlbesov.weights import constant_weight, power_weight


def test_fstar_with_unit_weight_is_a_plain_sum():
    f = harness.make_test_function(harness.FSTAR, R=3, nu=0, m_star=2, alpha=1, p=2.0, v=constant_weight())
    xs = np.linspace(-6, 4, 101)
    expected = sum(pp_eval(shifted_bspline(2, tau - 1), xs) for tau in range(-3, 1))
    assert_allclose(pp_eval(f, xs), expected, atol=1e-13)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_fstar_is_nonnegative_and_compact(alpha, v_ex1):
    f = harness.make_test_function(harness.FSTAR, R=8, nu=2, m_star=2, alpha=alpha, p=3.0, v=v_ex1)
    assert f.is_compact
    assert np.min(pp_eval(f, np.linspace(-15, 8, 400))) >= -1e-14


def test_gstar_support():
    g = harness.make_test_function(harness.GSTAR, R=4, nu=-1, m_star=1, alpha=2, p=2.0, u=power_weight(3))
    # B_1(y - tau + 2), -1 <= tau <= 4
    assert g.support == (-3.0, 4.0)


def test_extremal_parameter_checks(v_ex1):
    with pytest.raises(PreconditionError):
        harness.make_test_function(harness.FSTAR, R=2, nu=-3, m_star=2, alpha=1, p=2.0, v=v_ex1)
    with pytest.raises(PreconditionError):
        harness.make_test_function(harness.FSTAR, R=2, nu=0, m_star=2, alpha=1, p=1.0, v=v_ex1)
    with pytest.raises(PreconditionError):
        harness.make_test_function(harness.HSTAR, d0=0, tau0=0, m_star=1, alpha=1)
    with pytest.raises(PreconditionError):
        harness.make_test_function(harness.FSTAR, R=2, nu=0)
    with pytest.raises(PreconditionError):
        harness.make_test_function("sawtooth")


@pytest.mark.parametrize("m_star,alpha", [(1, 1), (1, 2), (2, 1), (2, 2)])
@pytest.mark.parametrize("d0,tau0", [(1, 0), (2, 3), (3, -2)])
def test_hstar_image_has_the_quoted_support(m_star, alpha, d0, tau0):
    h = harness.make_test_function(harness.HSTAR, d0=d0, tau0=tau0, m_star=m_star, alpha=alpha)
    assert h.is_compact
    image = rl_apply(RLSpec(alpha), h)
    assert harness.numerical_support(image) == harness.hstar_image_support(d0, tau0, m_star, alpha)


@pytest.mark.parametrize("R", [8, 16, 64])
@pytest.mark.parametrize("nu", [-8, 0, 8])
@pytest.mark.parametrize("m_star,alpha", [(1, 1), (2, 2), (3, 3), (4, 2)])
def test_fstar_witness_ratio_is_bounded_below(R, nu, m_star, alpha, v_ex1):
    ratio = harness.fstar_witness_ratio(R, nu, m_star, alpha, 2.0, v_ex1)
    assert ratio >= 0.5 / math.factorial(alpha - 1) - 1e-12


def test_random_members_are_reproducible():
    first = harness.make_test_function(harness.RANDOM_COMBO, seed=7, index=3, order=2, window=(0, 8))
    again = harness.make_test_function(harness.RANDOM_COMBO, seed=7, index=3, order=2, window=(0, 8))
    other = harness.make_test_function(harness.RANDOM_COMBO, seed=7, index=4, order=2, window=(0, 8))
    assert first.breakpoints == again.breakpoints
    assert_array_equal(first.pieces, again.pieces)
    assert not (first.breakpoints == other.breakpoints and np.array_equal(first.pieces, other.pieces))
    assert 0.0 <= first.support[0] and first.support[1] <= 8.0


def test_random_member_window_too_short():
    with pytest.raises(PreconditionError):
        harness.make_test_function(harness.RANDOM_COMBO, seed=1, order=3, window=(0, 2), max_level=0)


def test_families():
    random = harness.make_family(harness.RANDOM_COMBO, count=5, seed=3, order=2, window=(-4, 4))
    assert len(random) == 5
    assert random.labels[-1] == "random_combo[4]"
    extremal = harness.make_family(harness.FSTAR, R=[2, 4], nu=[0, 1], m_star=2, alpha=1, p=2.0,
                                   v=power_weight(3))
    assert len(extremal) == 4
    assert extremal.labels[0] == "fstar(R=2, nu=0)"
    merged = random.merged(extremal)
    assert len(merged) == 9
    assert merged.kind == "mixed"


def test_numerical_support_ignores_residue():
    assert harness.numerical_support(zero()) is None
    image = rl_apply(RLSpec(1), shifted_bspline(1, 0))
    assert harness.numerical_support(image) == (0, math.inf)


@pytest.mark.parametrize("criterion,empirical,verdict", [
    (1.0, 1.0, PASS),
    (1.0, 100.0, FAIL),
    (100.0, 1.0, FAIL),
    (math.inf, math.inf, PASS),
    (math.inf, 3.0, FAIL),
    (3.0, math.inf, FAIL),
])
def test_compare(criterion, empirical, verdict):
    assert harness.compare(criterion, empirical).verdict == verdict


def test_compare_tail_slack():
    assert harness.compare(100.0, 1.0, tail_slack=10.0).verdict == PASS
    assert harness.compare(100.0, 1.0, k_lo=200.0).verdict == PASS


def _spaces(u_weight):
    return SpaceParams(2.0, 2.0, 0.5, constant_weight()), SpaceParams(2.0, 2.0, 1.5, u_weight)


def test_empirical_constant_table(u_ex1):
    spec_in, spec_out = _spaces(u_ex1)
    family = harness.make_family(harness.RANDOM_COMBO, count=3, seed=11, order=2, window=(-4, 4))
    result = harness.empirical_constant(1, spec_in, spec_out, family, d_max=3, rw_in=1.0, rw_out=1.0, threads=1)
    assert list(result.table.columns) == MEMBER_RATIO_COLUMNS
    assert len(result.table) == 3
    assert result.value == pytest.approx(result.table["Ratio"].max())
    assert result.member in family.labels
    assert (result.n_in, result.n_out) == (2, 3)


def test_empirical_constant_skips_zero_denominator(u_ex1):
    spec_in, spec_out = _spaces(u_ex1)
    family = harness.TestFamily("mixed", (zero(), shifted_bspline(2, 0)), ("zero", "b"))
    result = harness.empirical_constant(1, spec_in, spec_out, family, d_max=2, rw_in=1.0, rw_out=1.0)
    assert result.skipped == 1
    assert result.member == "b"
    assert result.table.loc[0, "Note"] == "zero denominator"


def test_empirical_constant_rejects_empty_and_all_zero(u_ex1):
    spec_in, spec_out = _spaces(u_ex1)
    with pytest.raises(PreconditionError):
        harness.empirical_constant(1, spec_in, spec_out, harness.TestFamily("mixed", (), ()), rw_in=1.0,
                                   rw_out=1.0)
    with pytest.raises(PreconditionError):
        harness.empirical_constant(1, spec_in, spec_out, harness.TestFamily("mixed", (zero(),), ("z",)),
                                   d_max=2, rw_in=1.0, rw_out=1.0)


def test_empirical_constant_does_not_depend_on_threads(u_ex1):
    spec_in, spec_out = _spaces(u_ex1)
    family = harness.make_family(harness.RANDOM_COMBO, count=4, seed=5, order=2, window=(-4, 4))
    serial = harness.empirical_constant(1, spec_in, spec_out, family, d_max=2, rw_in=1.0, rw_out=1.0, threads=1)
    pooled = harness.empirical_constant(1, spec_in, spec_out, family, d_max=2, rw_in=1.0, rw_out=1.0, threads=4)
    pd.testing.assert_frame_equal(serial.table, pooled.table)
    assert serial.value == pooled.value


def test_reverse_constant_for_equal_weights_stays_bounded(u_ex1):
    spec_in = SpaceParams(2.0, 2.0, 1.0, u_ex1)
    spec_out = SpaceParams(2.0, 2.0, 2.0, u_ex1)
    family = harness.make_family(harness.RANDOM_COMBO, count=6, seed=2, order=2, window=(-4, 4))
    result = harness.empirical_constant(1, spec_in, spec_out, family, d_max=3, direction=harness.REVERSE,
                                        rw_in=1.0, rw_out=1.0)
    assert 0.0 < result.value <= 16.0


def test_verify_needs_weights():
    with pytest.raises(PreconditionError):
        harness.verify(harness.FORWARD, harness.VerifySetup(u=power_weight(3)))
    with pytest.raises(PreconditionError):
        harness.verify("sideways", harness.VerifySetup())


def test_verification_family_stays_on_the_half_line(u_ex1, v_ex1):
    setup = harness.example_ex1_setup(family_size=4)
    for direction in (harness.FORWARD, harness.REVERSE):
        family = harness.verification_family(setup, direction)
        assert len(family) == 4 + 3
        assert all(member.support[0] >= 0.0 for member in family.members)


def test_example_ex1_passes():
    setup = harness.example_ex1_setup(family_size=6, d_max=3, trunc=Truncation(64, 512, 8), threads=2)
    result = harness.verify(harness.EXAMPLE_EX1, setup)
    assert [part.kind for part in result.parts] == [harness.FORWARD, harness.REVERSE]
    for part in result.parts:
        assert math.isfinite(part.criterion.aggregate)
        assert part.comparison.verdict == PASS, part.comparison.reason
    assert result.verdict == PASS
    doc = result.as_dict()
    assert doc["verdict"] == PASS
    assert len(doc["parts"]) == 2


@pytest.mark.parametrize("direction,smoothness", [(harness.FORWARD, 1.5), (harness.REVERSE, 0.5)])
def test_input_smoothness_follows_the_direction(monkeypatch, u_ex1, v_ex1, direction, smoothness):
    seen = {}

    def fake_empirical(alpha, spec_in, spec_out, *args, **kwargs):
        seen["in"], seen["out"] = spec_in, spec_out
        return harness.EmpiricalConstant(1.0, "m", pd.DataFrame(columns=MEMBER_RATIO_COLUMNS), direction, 0, 2,
                                         3, 2)

    monkeypatch.setattr(harness, "_criterion", lambda setup, kind: 1.0)
    monkeypatch.setattr(harness, "empirical_constant", fake_empirical)
    setup = harness.VerifySetup(s=2.0, alpha=1, kappa=0.5, u=u_ex1, v=v_ex1, w=u_ex1, family_size=1)
    result = harness.verify(direction, setup)
    assert seen["in"].s == pytest.approx(smoothness)
    assert seen["in"].weight is (v_ex1 if direction == harness.FORWARD else u_ex1)
    assert seen["out"].s == 2.0
    assert result.verdict == PASS


def test_given_order_is_checked_at_the_input_smoothness(monkeypatch, u_ex1):
    monkeypatch.setattr(harness, "_criterion", lambda setup, kind: 1.0)
    # reverse input smoothness s - kappa - alpha = 2 needs n >= 4
    setup = harness.VerifySetup(s=2.0, alpha=1, kappa=-1.0, u=u_ex1, w=u_ex1, n_in=3, family_size=1)
    with pytest.raises(PreconditionError) as info:
        harness.verify(harness.REVERSE, setup)
    assert info.value.details["minimal_n"] == 4


def test_empirical_constant_rejects_small_given_order(u_ex1):
    spec_in, spec_out = _spaces(u_ex1)
    family = harness.make_family(harness.RANDOM_COMBO, count=1, seed=1, order=2, window=(-4, 4))
    with pytest.raises(PreconditionError) as info:
        harness.empirical_constant(1, spec_in, spec_out, family, n_out=2, rw_in=1.0, rw_out=1.0)
    assert info.value.details["minimal_n"] == 3
