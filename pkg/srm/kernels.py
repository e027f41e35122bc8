"""Spike Response Model kernels and closed-form LIF response times.

All functions accept scalars or numpy arrays; scalar input returns a float.
Times are in ms, potentials in mV, currents in nA and resistances in MOhm.
"""

import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class KernelParams:
    """PSP and reset kernel constants shared by every SRM neuron in a network."""

    eps0: float = 4.0
    tau_m: float = 10.0
    tau_s: float = 5.0
    theta: float = 15.0
    u_r: float = 0.0

    def __post_init__(self):
        if not (self.tau_m > self.tau_s > 0):
            raise ValueError(f"Kernel time constants must satisfy tau_m > tau_s > 0 (got {self.tau_m}, {self.tau_s})")
        if not self.theta > self.u_r:
            raise ValueError(f"Threshold {self.theta} must exceed reset potential {self.u_r}")

    @property
    def kappa0(self) -> float:
        return -(self.theta - self.u_r)

    @property
    def peak_time(self) -> float:
        """Lag at which the PSP kernel reaches its maximum."""
        return self.tau_m * self.tau_s / (self.tau_m - self.tau_s) * math.log(self.tau_m / self.tau_s)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "KernelParams":
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class EscapeNoiseParams:
    """Exponential escape noise for stochastic hidden neurons."""

    rho0: float = 0.01
    delta_u: float = 1.0

    def __post_init__(self):
        if self.rho0 <= 0:
            raise ValueError(f"rho0 must be positive (got {self.rho0})")
        if self.delta_u <= 0:
            raise ValueError(f"delta_u must be positive (got {self.delta_u})")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EscapeNoiseParams":
        return cls(**{k: float(v) for k, v in data.items()})


DEFAULT_KERNEL = KernelParams()
DEFAULT_NOISE = EscapeNoiseParams()


def _out(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def psp_kernel(s: ArrayLike, kernel: KernelParams = DEFAULT_KERNEL) -> ArrayLike:
    s_arr = np.asarray(s, dtype=float)
    causal = s_arr >= 0
    lag = np.where(causal, s_arr, 0.0)
    value = kernel.eps0 * (np.exp(-lag / kernel.tau_m) - np.exp(-lag / kernel.tau_s))
    return _out(np.where(causal, value, 0.0), s)


def reset_kernel(s: ArrayLike, kernel: KernelParams = DEFAULT_KERNEL) -> ArrayLike:
    s_arr = np.asarray(s, dtype=float)
    causal = s_arr >= 0
    lag = np.where(causal, s_arr, 0.0)
    return _out(np.where(causal, kernel.kappa0 * np.exp(-lag / kernel.tau_m), 0.0), s)


def escape_rate(u: ArrayLike, kernel: KernelParams = DEFAULT_KERNEL,
                noise: EscapeNoiseParams = DEFAULT_NOISE) -> ArrayLike:
    """Instantaneous firing density in spikes/ms; overflows to inf for very large u."""
    u_arr = np.asarray(u, dtype=float)
    with np.errstate(over='ignore'):
        rate = noise.rho0 * np.exp((u_arr - kernel.theta) / noise.delta_u)
    return _out(rate, u)


def spike_probability(u: ArrayLike, dt: float, kernel: KernelParams = DEFAULT_KERNEL,
                      noise: EscapeNoiseParams = DEFAULT_NOISE) -> ArrayLike:
    # exact exponential keeps p <= 1 when rho*dt is large
    rate = np.asarray(escape_rate(u, kernel, noise), dtype=float)
    return _out(-np.expm1(-rate * dt), u)


def lif_first_spike_time(current: ArrayLike, resistance: float,
                         kernel: KernelParams = DEFAULT_KERNEL) -> ArrayLike:
    """
    Response time of a LIF encoder driven by a constant current from rest.
    Returns inf when R*I never reaches threshold and 0 for an infinite current.
    """
    if resistance <= 0:
        raise ValueError(f"Resistance must be positive (got {resistance})")
    drive = resistance * np.asarray(current, dtype=float)
    reaches = drive > kernel.theta
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(reaches, drive / np.where(reaches, drive - kernel.theta, 1.0), 1.0)
        times = np.where(reaches, kernel.tau_m * np.log(ratio), np.inf)
    times = np.where(np.isposinf(drive), 0.0, times)
    return _out(times, current)


def lif_current_for_latency(latency: ArrayLike, resistance: float,
                            kernel: KernelParams = DEFAULT_KERNEL) -> ArrayLike:
    """Inverse of lif_first_spike_time: the constant current firing after `latency` ms."""
    if resistance <= 0:
        raise ValueError(f"Resistance must be positive (got {resistance})")
    t = np.asarray(latency, dtype=float)
    if np.any(t < 0):
        raise ValueError("Latency must be non-negative")
    with np.errstate(divide='ignore'):
        current = kernel.theta / (resistance * -np.expm1(-t / kernel.tau_m))
    return _out(current, latency)
