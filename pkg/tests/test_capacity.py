import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_channel
from qafas.capacity import (
    SubchannelView,
    capacity,
    capacity_covariance_form,
    capacity_penalty_form,
    prefix_capacities,
)
from qafas.channel import ChannelMatrix
from qafas.exceptions import InvalidRequestError
from qafas.quantization import INFINITE, QuantizerModel

Q1 = QuantizerModel.from_bits(1)
BITS = st.sampled_from([1, 2, 3, 4, 5, INFINITE])


def test_empty_selection():
    H = np.zeros((0, 3))
    assert capacity_covariance_form(H, 1.0, Q1) == 0.0
    assert capacity_penalty_form(H, 1.0, Q1) == 0.0


def test_scalar_awgn():
    assert capacity_covariance_form([[1.0]], 1.0, QuantizerModel.perfect()) == pytest.approx(1.0)


def test_scalar_three_bits():
    q = QuantizerModel.from_bits(3)
    assert capacity_covariance_form([[1.0]], 1.0, q) == pytest.approx(0.9510, abs=1e-4)
    assert capacity_penalty_form([[1.0]], 1.0, q) == pytest.approx(0.9510, abs=1e-4)


def test_identity_channel():
    assert capacity_penalty_form(np.eye(2), 3.0, QuantizerModel.perfect()) == pytest.approx(4.0)


@pytest.mark.parametrize("rows,expected", [
    ((0, 2), 2.7566),
    ((3, 2), 2.8089),
    ((0, 3), 2.1425),
])
def test_worked_pairs(worked_H, rows, expected):
    for form in (capacity_covariance_form, capacity_penalty_form):
        assert form(worked_H[list(rows)], 10.0, Q1) == pytest.approx(expected, abs=1e-3)


def test_worked_pairs_all_six(worked_H):
    # frozen from direct evaluation
    expected = {
        (0, 1): 2.6471823782955, (0, 2): 2.7566536539116, (0, 3): 2.1422211477489,
        (1, 2): 1.9762347220592, (1, 3): 2.6997786969475, (2, 3): 2.8089692780877,
    }
    for s, v in expected.items():
        assert capacity(worked_H, s, 10.0, Q1) == pytest.approx(v, rel=1e-12)


def test_subchannel_view(worked_H):
    view = SubchannelView(ChannelMatrix(worked_H), (3, 2))
    assert capacity_penalty_form(view, 10.0, Q1) == pytest.approx(2.8089, abs=1e-4)
    with pytest.raises(InvalidRequestError):
        SubchannelView(ChannelMatrix(worked_H), (1, 1))
    with pytest.raises(InvalidRequestError):
        SubchannelView(ChannelMatrix(worked_H), (4,))


def test_zero_channel_zero_capacity():
    assert capacity_penalty_form(np.zeros((4, 2)), 10.0, Q1) == 0.0
    assert capacity_covariance_form(np.zeros((4, 2)), 10.0, Q1) == 0.0


@settings(max_examples=200)
@given(seed=st.integers(0, 2**32 - 1), b=BITS, rho=st.floats(0.01, 100),
       k=st.integers(1, 12), n_u=st.integers(1, 6))
def test_forms_agree(seed, b, rho, k, n_u):
    H = random_channel(np.random.default_rng(seed), k, n_u)
    q = QuantizerModel.from_bits(b)
    a = capacity_covariance_form(H, rho, q)
    c = capacity_penalty_form(H, rho, q)
    assert c == pytest.approx(a, rel=1e-9)


@settings(max_examples=200)
@given(seed=st.integers(0, 2**32 - 1), b=BITS, rho=st.floats(0.01, 100),
       k=st.integers(1, 12), n_u=st.integers(1, 6))
def test_determinant_duality(seed, b, rho, k, n_u):
    H = random_channel(np.random.default_rng(seed), k, n_u)
    q = QuantizerModel.from_bits(b)
    assert capacity_penalty_form(H, rho, q, dual=True) == pytest.approx(
        capacity_penalty_form(H, rho, q, dual=False), rel=1e-9)


@given(seed=st.integers(0, 2**32 - 1), rho=st.floats(0.01, 100))
def test_monotone_in_resolution(seed, rho):
    H = random_channel(np.random.default_rng(seed), 6, 3)
    caps = [capacity_penalty_form(H, rho, QuantizerModel.from_bits(b)) for b in (1, 2, 3, 4, 5, 6, INFINITE)]
    assert all(y >= x - 1e-12 for x, y in zip(caps, caps[1:]))


@given(seed=st.integers(0, 2**32 - 1), rho=st.floats(0.01, 100), factor=st.floats(1.0, 10.0), b=BITS)
def test_monotone_in_power(seed, rho, factor, b):
    H = random_channel(np.random.default_rng(seed), 6, 3)
    q = QuantizerModel.from_bits(b)
    assert capacity_penalty_form(H, rho * factor, q) >= capacity_penalty_form(H, rho, q) - 1e-12


@given(seed=st.integers(0, 2**32 - 1), rho=st.floats(0.01, 100), b=BITS)
def test_adding_antenna_never_hurts(seed, rho, b):
    H = random_channel(np.random.default_rng(seed), 8, 3)
    q = QuantizerModel.from_bits(b)
    caps = prefix_capacities(H, range(8), rho, q)
    assert np.all(caps >= 0)
    assert np.all(np.diff(caps) >= -1e-12)
