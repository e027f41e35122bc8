import math

import numpy as np
import pytest

from srm import (
    DEFAULT_KERNEL, EscapeNoiseParams, KernelParams, NeuronState, escape_rate, lif_current_for_latency,
    lif_first_spike_time, membrane_potential, psp_kernel, reset_kernel, spike_probability, step_stochastic
)


def test_psp_peaks_at_one_millivolt():
    """Default kernel peaks at 10 ln 2 ms with a height of 1 mV"""
    peak = DEFAULT_KERNEL.peak_time
    assert peak == pytest.approx(10 * math.log(2), abs=1e-12)
    assert psp_kernel(peak) == pytest.approx(1.0, abs=1e-6)

    lags = np.linspace(0, 40, 4001)
    assert lags[np.argmax(psp_kernel(lags))] == pytest.approx(peak, abs=0.01)


def test_psp_is_causal_and_starts_at_zero():
    assert psp_kernel(0.0) == 0.0
    assert psp_kernel(-3.0) == 0.0
    values = psp_kernel(np.array([-1.0, 0.0, 2.0]))
    assert isinstance(values, np.ndarray)
    assert values[0] == 0.0 and values[1] == 0.0 and values[2] > 0


def test_psp_scalar_returns_float():
    assert isinstance(psp_kernel(5.0), float)
    assert isinstance(reset_kernel(5.0), float)


def test_reset_kernel_amplitude_and_decay():
    """The reset drops the potential from threshold to the reset value, then decays with tau_m"""
    assert reset_kernel(0.0) == pytest.approx(-15.0)
    assert reset_kernel(10.0) == pytest.approx(-15.0 * math.exp(-1))
    assert reset_kernel(-0.5) == 0.0


def test_kernel_params_validation():
    with pytest.raises(ValueError):
        KernelParams(tau_m=5.0, tau_s=10.0)
    with pytest.raises(ValueError):
        KernelParams(theta=0.0, u_r=1.0)
    with pytest.raises(ValueError):
        EscapeNoiseParams(rho0=0.0)
    with pytest.raises(ValueError):
        EscapeNoiseParams(delta_u=-1.0)


def test_kernel_params_dict_roundtrip():
    kernel = KernelParams(eps0=3.0, theta=12.0)
    assert KernelParams.from_dict(kernel.to_dict()) == kernel


def test_escape_rate_at_threshold_is_rho0():
    assert escape_rate(15.0) == pytest.approx(0.01)
    assert escape_rate(16.0) == pytest.approx(0.01 * math.e)
    assert escape_rate(14.0) == pytest.approx(0.01 / math.e)


def test_spike_probability_is_bounded():
    """Exact exponential form: probability stays in [0, 1] even for huge rates"""
    assert spike_probability(15.0, 0.1) == pytest.approx(-math.expm1(-0.001))
    p = spike_probability(np.array([-100.0, 15.0, 60.0, 1e4]), 0.1)
    assert np.all((p >= 0) & (p <= 1))
    assert not np.any(np.isnan(p))
    assert p[-1] == 1.0


def test_lif_first_spike_time_closed_form():
    """R = 4 MOhm, I = 20 nA: t = tau_m ln(RI / (RI - theta))"""
    assert lif_first_spike_time(20.0, 4.0) == pytest.approx(10 * math.log(80 / 65))


def test_lif_first_spike_time_below_threshold_never_fires():
    assert lif_first_spike_time(3.75, 4.0) == math.inf
    assert lif_first_spike_time(0.0, 4.0) == math.inf
    assert lif_first_spike_time(math.inf, 4.0) == 0.0


def test_lif_first_spike_time_decreases_with_current():
    times = lif_first_spike_time(np.array([4.0, 5.0, 10.0, 20.0]), 4.0)
    assert np.all(np.diff(times) < 0)


def test_lif_first_spike_time_rejects_bad_resistance():
    with pytest.raises(ValueError):
        lif_first_spike_time(10.0, 0.0)


def test_lif_current_for_latency_inverts_response_time():
    current = lif_current_for_latency(6.0, 4.0)
    assert current == pytest.approx(15.0 / (4.0 * (1 - math.exp(-0.6))))
    assert current == pytest.approx(8.311, abs=1e-3)
    assert lif_first_spike_time(current, 4.0) == pytest.approx(6.0)
    assert lif_current_for_latency(0.0, 4.0) == math.inf

    with pytest.raises(ValueError):
        lif_current_for_latency(-1.0, 4.0)


@pytest.mark.slow
def test_clamped_neuron_fires_at_rho0():
    """A neuron held at threshold (reset removed each step) fires with rate rho0 over 1e6 steps"""
    n, steps, dt = 10_000, 100, 0.1
    rng = np.random.default_rng(7)
    state = NeuronState.at_rest(n)
    total = 0
    for k in range(steps):
        state.set_input(np.full(n, 15.0), np.zeros(n))
        state.reset_trace[:] = 0.0
        assert np.allclose(membrane_potential(state), 15.0)
        total += int(step_stochastic(state, k * dt, dt, rng).sum())
        state.advance(dt)

    draws = n * steps
    p = spike_probability(15.0, dt)
    se = math.sqrt(draws * p * (1 - p))
    assert abs(total - draws * p) < 3 * se
    assert total / (draws * dt) == pytest.approx(0.01, rel=0.1)
