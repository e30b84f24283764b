"""Symbol registry: values, eigenvalues, growth, parity."""

import numpy as np
import pytest

from dispctl import (asymptotic_gap_divergence, benjamin, benjamin_ono,
                     custom_table, dgbo, eigenvalue, eval_symbol,
                     fourth_order_nls, higher_order, kdv, schrodinger, smith,
                     symbol_from_config)

ALL_FAMILIES = [
    (kdv(), 3.0),
    (schrodinger(), 2.0),
    (benjamin_ono(), 2.0),
    (benjamin(1.0), 3.0),
    (smith(), 2.0),
    (dgbo(1.5), 2.5),
    (fourth_order_nls(-1.0), 4.0),
    (fourth_order_nls(1.0), 4.0),
    (higher_order([1.0, 0.0, 2.0]), 4.0),
    (higher_order([1.0, 1.0, 1.0, 1.0]), 5.0),
]


def test_symbol_values():
    assert eval_symbol(smith(), 0) == 0.0
    assert eval_symbol(smith(), 1) == pytest.approx(
        2.0 * np.pi * (np.sqrt(2.0) - 1.0), rel=1e-15)
    assert eval_symbol(fourth_order_nls(1.0), 1) == 0.0
    assert eval_symbol(kdv(), 3) == 9.0
    assert eval_symbol(benjamin(1.0), 1) == 0.0


def test_zero_mode_vanishes_everywhere():
    for sym, _ in ALL_FAMILIES:
        assert eval_symbol(sym, 0) == 0.0
        assert eigenvalue(sym, 0) == 0.0


def test_eigenvalue_examples():
    assert eigenvalue(kdv(), 2) == 8.0
    assert eigenvalue(dgbo(1.0), 2) == -4.0
    assert eigenvalue(smith(), 1) == pytest.approx(
        2.0 * np.pi * (np.sqrt(2.0) - 1.0), rel=1e-15)
    assert eigenvalue(fourth_order_nls(-1.0), 2) == -20.0


def test_gap_divergence_sequences():
    np.testing.assert_allclose(
        asymptotic_gap_divergence(kdv(), 4), [7.0, 19.0, 37.0], rtol=0)
    np.testing.assert_allclose(
        asymptotic_gap_divergence(dgbo(1.0), 4), [3.0, 5.0, 7.0], rtol=0)
    gaps = asymptotic_gap_divergence(smith(), 400)
    assert np.all(np.diff(gaps) > 0.0)
    assert gaps[-1] > 100.0 * gaps[0]


def test_growth_bound_over_wide_range():
    k = np.arange(1, 10_001)
    for sym, order in ALL_FAMILIES:
        ratio = np.abs(eval_symbol(sym, k)) / k.astype(float) ** (order - 1.0)
        fitted = ratio.max()
        assert np.isfinite(fitted)
        # the bound is tight: the last decade carries the extreme behaviour
        assert ratio[k >= 1000].max() >= 0.3 * fitted


def test_parity_exact():
    k = np.arange(1, 65)
    for sym, _ in ALL_FAMILIES:
        a_plus = eval_symbol(sym, k)
        a_minus = eval_symbol(sym, -k)
        if sym.parity == "even":
            assert np.max(np.abs(a_minus - a_plus)) == 0.0
        elif sym.parity == "odd":
            assert np.max(np.abs(a_minus + a_plus)) == 0.0


def test_custom_table_range_errors():
    sym = custom_table({k: float(k % 2) for k in range(-4, 5)}, order=1.0)
    assert eval_symbol(sym, 3) == 1.0
    with pytest.raises(ValueError):
        eval_symbol(sym, 5)


def test_config_round_trip_and_unknown_family():
    sym = symbol_from_config({"family": "dgbo", "params": {"alpha": 1.5}})
    assert sym.order == 2.5
    with pytest.raises(ValueError):
        symbol_from_config({"family": "airy"})
    with pytest.raises(ValueError):
        symbol_from_config({"family": "higher_order", "params": {}})
