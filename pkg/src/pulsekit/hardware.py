"""Pulse-generation signal chain: DAC sampling and hold, IQ mixing with
skew, virtual-Z frame updates, and oscillator-phase-noise dephasing.

Sample rates are linear frequencies (samples per time unit); oscillator
frequencies are angular.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import hamiltonians
from .envelopes import ComplexEnvelope
from .evolve import propagate
from .spectral import dft_spectrum, spectral_fwhm


@dataclass(frozen=True)
class SignalChainConfig:
    """Static description of one up-conversion chain."""

    fs: float
    lo_freq: float = 0.0
    iq_skew: float = 0.0
    gain_imbalance: float = 1.0
    lo_noise_sigma: float = 0.0
    seed: int = 0
    path: str = "analog-IQ"

    def __post_init__(self):
        if self.fs <= 0:
            raise ValueError(f"sample rate must be positive, got {self.fs}")
        if self.gain_imbalance <= 0:
            raise ValueError(f"gain imbalance must be positive, got {self.gain_imbalance}")
        if self.path not in ("analog-IQ", "DUC"):
            raise ValueError(f"path must be 'analog-IQ' or 'DUC', got {self.path!r}")


@dataclass(frozen=True)
class SampledWaveform:
    """Uniformly sampled real signal."""

    sample_period: float
    values: np.ndarray

    def __post_init__(self):
        if self.sample_period <= 0:
            raise ValueError("sample period must be positive")

    @property
    def fs(self):
        return 1.0 / self.sample_period

    @property
    def times(self):
        return np.arange(self.values.size) * self.sample_period

    @property
    def duration(self):
        return self.sample_period * (self.values.size - 1)


def sample_and_hold(env, fs):
    """Sample an envelope at ``t_n = n / fs`` into I and Q waveforms.

    The hold (staircase) behaviour is modelled spectrally downstream via the
    sinc roll-off; :func:`hold_staircase` builds the explicit staircase for
    validation.  Warns when ``fs`` is below twice the envelope's spectral
    width (Nyquist-Shannon sampling theorem).
    """
    duration = env.duration
    if fs * duration < 8:
        raise ValueError(f"fs * duration = {fs * duration:.3f} gives fewer than 8 samples")
    n = int(np.floor(duration * fs)) + 1
    t = np.arange(n) / fs

    probe = np.asarray(env.i(np.linspace(0.0, duration, 512)))
    if np.any(probe != probe[0]):
        try:
            fwhm = spectral_fwhm(dft_spectrum(probe, 512 / duration, zero_pad=4))
        except ValueError:
            fwhm = None
        if fwhm is not None and fs < 2.0 * fwhm:
            warnings.warn(
                f"sample rate {fs:.4g} is below twice the envelope spectral "
                f"width {fwhm:.4g}; the Nyquist-Shannon sampling theorem "
                "requires sampling faster than twice the bandwidth",
                RuntimeWarning,
                stacklevel=2,
            )

    period = 1.0 / fs
    i_values = np.asarray(env.i(t), dtype=float)
    q_values = np.asarray(env.q(t), dtype=float)
    return SampledWaveform(period, i_values), SampledWaveform(period, q_values)


def hold_staircase(wf, oversample=32):
    """Explicit zero-order-hold staircase at ``oversample`` times the rate."""
    if oversample < 2:
        raise ValueError(f"oversample must be >= 2, got {oversample}")
    values = np.repeat(wf.values, oversample)
    return SampledWaveform(wf.sample_period / oversample, values)


def apply_iq_skew(i_wf, q_wf, phi, gain=1.0):
    """Mix the quadrature into the in-phase path by the mixer skew ``phi``.

    ``I_eff = I - gain * Q * sin(phi)``, ``Q_eff = gain * Q * cos(phi)``.
    ``gain`` extends the pure-skew model with a quadrature gain mismatch.
    """
    if i_wf.values.size != q_wf.values.size:
        raise ValueError("I and Q waveforms must have equal length")
    i_eff = i_wf.values - gain * q_wf.values * np.sin(phi)
    q_eff = gain * q_wf.values * np.cos(phi)
    return (
        SampledWaveform(i_wf.sample_period, i_eff),
        SampledWaveform(q_wf.sample_period, q_eff),
    )


def _fft_resample(values, factor):
    """Band-limited resampling by spectrum zero-padding (integer factor)."""
    n = values.size
    spectrum = np.fft.fft(values)
    padded = np.zeros(n * factor, dtype=complex)
    half = n // 2
    padded[:half] = spectrum[:half]
    padded[-(n - half):] = spectrum[half:]
    if n % 2 == 0:
        # split the Nyquist bin symmetrically
        padded[half] = spectrum[half] / 2.0
        padded[n * factor - half] = spectrum[half] / 2.0
    return np.real(np.fft.ifft(padded)) * factor


def upconvert(i_wf, q_wf, lo_freq, fs_rf, path="analog-IQ"):
    """Mix baseband I/Q up to the carrier: ``S = I cos(w t) - Q sin(w t)``.

    The analog path holds each baseband sample (zero order) between input
    samples; the DUC path resamples the baseband band-limitedly before the
    digital mix.  ``fs_rf`` must satisfy the sampling theorem for the
    carrier plus baseband content.
    """
    if i_wf.values.size != q_wf.values.size:
        raise ValueError("I and Q waveforms must have equal length")
    f_lo = lo_freq / (2.0 * np.pi)
    fs_bb = i_wf.fs
    if fs_rf <= 2.0 * (abs(f_lo) + fs_bb / 2.0):
        raise ValueError(
            f"output rate {fs_rf:.4g} violates the sampling theorem for "
            f"carrier {f_lo:.4g} plus baseband content up to {fs_bb / 2.0:.4g}"
        )
    ratio = fs_rf / fs_bb
    factor = int(round(ratio))
    if abs(ratio - factor) > 1e-9:
        raise ValueError("fs_rf must be an integer multiple of the baseband rate")

    if path == "analog-IQ":
        i_up = np.repeat(i_wf.values, factor)
        q_up = np.repeat(q_wf.values, factor)
    elif path == "DUC":
        i_up = _fft_resample(i_wf.values, factor)
        q_up = _fft_resample(q_wf.values, factor)
    else:
        raise ValueError(f"path must be 'analog-IQ' or 'DUC', got {path!r}")

    t = np.arange(i_up.size) / fs_rf
    s = i_up * np.cos(lo_freq * t) - q_up * np.sin(lo_freq * t)
    return SampledWaveform(1.0 / fs_rf, s)


def virtual_z(cenv, phase):
    """Zero-duration Z rotation as a baseband frame update.

    ``value -> value * exp(-i phase)``; a quarter turn maps
    ``(I, Q) -> (Q, -I)``.
    """
    if not isinstance(cenv, ComplexEnvelope):
        cenv = ComplexEnvelope.from_envelope(cenv)
    return cenv.rotated(phase)


@dataclass(frozen=True)
class DephasingCurve:
    times: np.ndarray
    coherence: np.ndarray  # |ensemble mean of rho_01|
    ensemble: int


def lo_dephasing_run(env, noise_sigma, seed, duration, steps=200, ensemble=500):
    """Ensemble-averaged coherence decay under oscillator frequency noise.

    Each member draws white frequency noise (piecewise constant per step,
    std ``noise_sigma / sqrt(h)``), evolves ``|+>`` with zero control drive
    (pass ``env = None``), and records the off-diagonal density-matrix
    element.  Member ``i`` is seeded with ``seed + i``, so results are
    independent of evaluation order.
    """
    if ensemble < 1:
        raise ValueError(f"ensemble must be >= 1, got {ensemble}")
    h = duration / steps
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    accumulated = np.zeros(steps + 1, dtype=complex)
    times = None
    for member in range(ensemble):
        rng = np.random.default_rng(seed + member)
        if noise_sigma == 0.0:
            noise = np.zeros(steps)
        else:
            noise = rng.normal(0.0, noise_sigma / np.sqrt(h), size=steps)

        def phi_n_dot(t, noise=noise):
            idx = min(steps - 1, max(0, int(t / h)))
            return noise[idx]

        model = hamiltonians.lo_noise_qubit(env, 0.0, phi_n_dot, 0.0)
        result = propagate(model, duration, steps=steps, initial=plus)
        accumulated += result.coherence01
        times = result.times
    return DephasingCurve(times=times, coherence=np.abs(accumulated / ensemble), ensemble=ensemble)
