"""Additive white Gaussian noise channel."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqnm.channel import awgn
from gqnm.noise import substream


def test_zero_sigma_is_identity():
    tx = np.array([1.0, -2.0, 3.5])
    s = substream(0, 0)
    out = awgn(tx, 0.0, s)
    np.testing.assert_array_equal(out, tx)
    assert out is not tx
    assert s.position == 0


def test_negative_sigma_rejected():
    with pytest.raises(ValueError):
        awgn(np.zeros(3), -1e-5, substream(0, 0))


def test_input_not_modified():
    tx = np.zeros(5)
    awgn(tx, 1.0, substream(0, 0))
    assert not tx.any()


def test_pooled_variance_at_profile_sigma():
    y = awgn(np.zeros(1_000_000), 2e-5, substream(11, 0))
    y2 = y * y
    se = y2.std() / math.sqrt(y.size)
    assert abs(y2.mean() - 4e-10) < 5 * se


def test_mean_unit_sigma():
    y = awgn(np.zeros(1_000_000), 1.0, substream(11, 1))
    assert abs(y.mean()) < 5 * y.std() / math.sqrt(y.size)


def test_additivity_moments():
    tx = np.linspace(-3, 3, 500_000)
    w = awgn(tx, 0.5, substream(11, 2)) - tx
    n = w.size
    assert abs(w.mean()) < 5 * w.std() / math.sqrt(n)
    w2 = w * w
    assert abs(w2.mean() - 0.25) < 5 * w2.std() / math.sqrt(n)
    w4 = w2 * w2
    assert abs(w4.mean() - 3 * 0.5**4) < 5 * w4.std() / math.sqrt(n)


@given(n=st.integers(1, 200), sigma=st.floats(0, 10))
@settings(max_examples=30, deadline=None)
def test_output_length(n, sigma):
    assert awgn(np.ones(n), sigma, substream(1, n)).shape == (n,)


def test_non_finite_sigma_rejected():
    with pytest.raises(ValueError):
        awgn(np.zeros(3), math.inf, substream(0, 0))
