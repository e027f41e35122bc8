import math

import numpy as np
import pytest

from learning import (
    ActivationVector, cross_entropy, one_hot, output_error_signals, predict, softmax_activation
)

INF = math.inf


def test_softmax_single_output():
    assert softmax_activation(np.array([4.2]), 1.0).a == pytest.approx([1.0])


def test_softmax_two_outputs():
    a = softmax_activation(np.array([1.0, 2.0]), 2.0).a
    assert a[0] == pytest.approx(1 / (1 + math.exp(-2)))
    assert a[1] == pytest.approx(math.exp(-2) / (1 + math.exp(-2)))
    assert a == pytest.approx([0.8808, 0.1192], abs=1e-4)


def test_softmax_equal_times_is_uniform():
    assert softmax_activation(np.array([3.0, 3.0, 3.0, 3.0]), 5.0).a == pytest.approx([0.25] * 4)


def test_softmax_shift_invariance():
    rng = np.random.default_rng(0)
    tau = rng.uniform(0, 40, size=6)
    base = softmax_activation(tau, 0.7).a
    for shift in (-3.0, 12.5, 1000.0):
        assert np.max(np.abs(softmax_activation(tau + shift, 0.7).a - base)) < 1e-12
    assert abs(base.sum() - 1.0) < 1e-12


def test_softmax_large_nu_does_not_overflow():
    a = softmax_activation(np.array([0.1, 39.9]), 1000.0).a
    assert np.all(np.isfinite(a))
    assert a[0] == pytest.approx(1.0)


def test_softmax_silent_outputs_get_zero():
    act = softmax_activation(np.array([5.2, INF, 3.1]), 1.0)
    assert act.a[1] == 0.0
    assert act.a.sum() == pytest.approx(1.0)
    assert not act.null


def test_softmax_all_silent_is_null_and_uniform():
    act = softmax_activation(np.array([INF, INF, INF]), 1.0)
    assert act.null
    assert act.a == pytest.approx([1 / 3] * 3)


def test_softmax_monotonic_in_spike_time():
    tau = np.array([4.0, 6.0, 9.0])
    before = softmax_activation(tau, 1.0).a[1]
    tau[1] = 5.0
    assert softmax_activation(tau, 1.0).a[1] > before


def test_softmax_rejects_non_positive_nu():
    with pytest.raises(ValueError):
        softmax_activation(np.array([1.0]), 0.0)


def test_cross_entropy_values():
    assert cross_entropy(ActivationVector(a=np.array([1.0, 0.0]), nu=1.0), 0) == 0.0
    assert cross_entropy(ActivationVector(a=np.array([0.5, 0.5]), nu=1.0), 1) == pytest.approx(math.log(2))
    floored = cross_entropy(ActivationVector(a=np.array([1.0, 0.0]), nu=1.0), 1)
    assert floored == pytest.approx(-math.log(1e-10))
    assert floored == pytest.approx(23.03, abs=0.01)


def test_one_hot():
    assert list(one_hot(2, 4)) == [0, 0, 1, 0]
    with pytest.raises(ValueError):
        one_hot(4, 4)


def test_error_signals():
    act = ActivationVector(a=np.array([0.7, 0.2, 0.1]), nu=1.0)
    assert output_error_signals(act, 0) == pytest.approx([-0.3, 0.2, 0.1])
    exact = ActivationVector(a=np.array([0.0, 1.0]), nu=1.0)
    assert np.all(output_error_signals(exact, 1) == 0.0)


def test_error_signals_sum_to_zero():
    rng = np.random.default_rng(3)
    for _ in range(20):
        act = softmax_activation(rng.uniform(0, 40, size=5), rng.uniform(0.1, 5))
        assert abs(output_error_signals(act, int(rng.integers(5))).sum()) < 1e-12


def test_predict_rules():
    assert predict(np.array([INF, INF]), 0.1) is None
    assert predict(np.array([3.0, 3.0]), 0.1) is None
    assert predict(np.array([5.2, 3.1, INF]), 0.1) == 1
    # one grid step apart is a clear decision
    assert predict(np.array([3.1, 3.0]), 0.1) == 1


def test_predict_invariant_under_monotone_transform():
    tau = np.array([7.3, 2.1, 9.9, 2.1 + 0.3])
    assert predict(tau, 0.1) == predict(2.0 * tau + 5.0, 0.1) == 1
