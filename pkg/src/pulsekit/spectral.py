"""Fourier-domain analysis: baseband spectra, Nyquist images, sinc roll-off.

Frequencies are linear (cycles per time unit), matching the sample-rate
convention of the hardware module.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Spectrum:
    """Magnitude spectrum on a uniform frequency grid."""

    freqs: np.ndarray
    magnitude: np.ndarray
    resolution: float

    def __post_init__(self):
        if self.freqs.shape != self.magnitude.shape:
            raise ValueError("freqs and magnitude must have equal length")
        if np.any(np.diff(self.freqs) <= 0):
            raise ValueError("frequencies must be strictly increasing")

    def magnitude_at(self, f):
        """Linear interpolation of the magnitude at frequency ``f``."""
        return float(np.interp(f, self.freqs, self.magnitude))

    def peak_frequency(self):
        return float(self.freqs[int(np.argmax(self.magnitude))])


def dft_spectrum(samples, fs, zero_pad=8, zones=1, window=None):
    """Magnitude of the sampled-signal DFT over ``[0, zones * fs)``.

    The transform of the zero-padded sequence is evaluated on bins spaced
    ``fs / (zero_pad * len(samples))``.  The DFT of a sampled sequence is
    fs-periodic, so bins beyond the first zone repeat the first zone
    exactly; requesting ``zones > 1`` extends the grid accordingly.
    ``window="hann"`` applies a Hann window before padding.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        raise ValueError("need at least 2 samples")
    if fs <= 0:
        raise ValueError(f"sample rate must be positive, got {fs}")
    if zero_pad < 1:
        raise ValueError(f"zero_pad must be >= 1, got {zero_pad}")
    if zones < 1:
        raise ValueError(f"zones must be >= 1, got {zones}")
    if window == "hann":
        samples = samples * np.hanning(samples.size)
    elif window is not None:
        raise ValueError(f"unknown window {window!r}")

    n_bins = samples.size * int(zero_pad)
    magnitude = np.abs(np.fft.fft(samples, n=n_bins))
    if zones > 1:
        magnitude = np.tile(magnitude, zones)
    resolution = fs / n_bins
    freqs = np.arange(magnitude.size) * resolution
    return Spectrum(freqs=freqs, magnitude=magnitude, resolution=resolution)


def dft_at(samples, fs, freqs):
    """Direct evaluation of the sampled-sequence DFT at arbitrary frequencies.

    O(N * len(freqs)); used as the independent cross-check of the
    grid/periodicity path in :func:`dft_spectrum`.
    """
    samples = np.asarray(samples, dtype=float)
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    n = np.arange(samples.size)
    phases = np.exp(-2.0j * np.pi * np.outer(freqs, n) / fs)
    return phases @ samples.astype(complex)


def image_frequencies(f0, fs, max_zone=3):
    """Sorted unique image locations ``|C * fs +/- f0|`` for ``C = 0..max_zone``."""
    if not 0 < f0 < fs / 2:
        raise ValueError(
            f"f0 = {f0} lies outside the first Nyquist zone (0, fs/2) = "
            f"(0, {fs / 2}); the sampling theorem bounds recoverable content "
            "to below half the sample rate"
        )
    if max_zone < 1:
        raise ValueError(f"max_zone must be >= 1, got {max_zone}")
    images = set()
    for c in range(max_zone + 1):
        images.add(abs(c * fs + f0))
        images.add(abs(c * fs - f0))
    return np.array(sorted(images))


def sinc_rolloff(f, fs):
    """Zero-order-hold magnitude response ``|sin(pi f/fs) / (pi f/fs)|``."""
    if fs <= 0:
        raise ValueError(f"sample rate must be positive, got {fs}")
    out = np.abs(np.sinc(np.asarray(f, dtype=float) / fs))
    return float(out) if out.ndim == 0 else out


def spectral_fwhm(spec):
    """Full width at half maximum around the unique global peak.

    Half-power crossings are located by linear interpolation between bins.
    Raises if the maximum is not unique or sits on (or spills over) the grid
    boundary.
    """
    mag = spec.magnitude
    peak_idx = int(np.argmax(mag))
    peak = mag[peak_idx]
    if np.count_nonzero(mag == peak) != 1:
        raise ValueError("spectrum has no unique global maximum")
    if peak_idx in (0, mag.size - 1):
        raise ValueError("spectral peak sits on the grid boundary")
    half = peak / 2.0

    left = None
    for k in range(peak_idx, 0, -1):
        if mag[k - 1] < half <= mag[k]:
            frac = (half - mag[k - 1]) / (mag[k] - mag[k - 1])
            left = spec.freqs[k - 1] + frac * (spec.freqs[k] - spec.freqs[k - 1])
            break
    right = None
    for k in range(peak_idx, mag.size - 1):
        if mag[k + 1] < half <= mag[k]:
            frac = (mag[k] - half) / (mag[k] - mag[k + 1])
            right = spec.freqs[k] + frac * (spec.freqs[k + 1] - spec.freqs[k])
            break
    if left is None or right is None:
        raise ValueError("half-maximum level never crossed inside the grid")
    return float(right - left)
