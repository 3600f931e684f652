"""Seeded synthetic SSVEP datasets: harmonics, phase, channel mixing, noise.

The generator is the desk-scale stand-in for a real recording: every
(class, trial) record is a harmonic stack ``h^-1 * sin(2*pi*h*f*t + h*phi)``
projected into channel space through one fixed, well-conditioned random
mixing matrix, plus white Gaussian noise scaled per channel to the
requested SNR.  Noise streams are keyed by (class, trial) so generation is
schedule-independent and bit-reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import SsvepDataset

_MAX_COND = 10.0


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic recording.

    ``snr_db`` may be ``math.inf`` for a noiseless dataset.  ``mixing``
    selects the channel projection: ``"random"`` draws a seeded Gaussian
    matrix (resampled until its condition number is below 10), and
    ``"identity"`` maps harmonic h straight onto channel h, which keeps
    single-channel single-harmonic output an exact sinusoid.
    """

    frequencies_hz: tuple
    phases_rad: tuple
    n_channels: int = 8
    n_trials: int = 15
    duration_s: float = 4.0
    sample_rate_hz: float = 256.0
    n_harmonics: int = 3
    snr_db: float = math.inf
    seed: int = 0
    mixing: str = "random"

    def __post_init__(self):
        freqs = tuple(float(f) for f in self.frequencies_hz)
        phases = tuple(float(p) for p in self.phases_rad)
        if not freqs or len(freqs) != len(phases):
            raise ValueError("frequency and phase lists must be non-empty and equal-length")
        if any(f <= 0 for f in freqs):
            raise ValueError("stimulus frequencies must be positive")
        if self.n_harmonics < 1:
            raise ValueError(f"need at least one harmonic, got {self.n_harmonics}")
        if max(freqs) * self.n_harmonics >= self.sample_rate_hz / 2:
            raise ValueError(
                f"harmonic {self.n_harmonics} of {max(freqs)} Hz is at or above Nyquist "
                f"({self.sample_rate_hz / 2} Hz)"
            )
        if self.n_channels < 1 or self.n_trials < 2:
            raise ValueError("need >=1 channel and >=2 trials")
        if not self.duration_s * self.sample_rate_hz >= 2:
            raise ValueError("duration too short for a 2-sample record")
        if self.mixing not in ("random", "identity"):
            raise ValueError(f"mixing must be 'random' or 'identity', got {self.mixing!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit an unsigned 64-bit integer")
        object.__setattr__(self, "frequencies_hz", freqs)
        object.__setattr__(self, "phases_rad", phases)


def _mixing_matrix(spec: SynthSpec) -> np.ndarray:
    if spec.mixing == "identity":
        return np.eye(spec.n_channels, spec.n_harmonics)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(0,)))
    for _ in range(100):
        mat = rng.standard_normal((spec.n_channels, spec.n_harmonics))
        sv = np.linalg.svd(mat, compute_uv=False)
        if sv[-1] > 0 and sv[0] / sv[-1] < _MAX_COND:
            return mat
    raise RuntimeError("could not draw a well-conditioned mixing matrix")


def generate_ssvep(spec: SynthSpec) -> SsvepDataset:
    """Generate a ground-truth dataset of shape (Nc, Ns, Nt, Nf).

    Deterministic for a given spec; the visual latency is zero since the
    synthetic response starts with the record.
    """
    n_samples = round(spec.duration_s * spec.sample_rate_hz)
    t = np.arange(n_samples) / spec.sample_rate_hz
    harmonics = np.arange(1, spec.n_harmonics + 1)
    mix = _mixing_matrix(spec)

    data = np.empty(
        (spec.n_channels, n_samples, spec.n_trials, len(spec.frequencies_hz)),
        dtype=np.float64,
    )
    for i, (freq, phase) in enumerate(zip(spec.frequencies_hz, spec.phases_rad)):
        sources = np.sin(
            2 * np.pi * harmonics[:, None] * freq * t[None, :] + harmonics[:, None] * phase
        ) / harmonics[:, None]
        clean = mix @ sources
        if math.isinf(spec.snr_db):
            noise_scale = np.zeros(spec.n_channels)
        else:
            signal_power = np.mean(clean ** 2, axis=1)
            noise_scale = np.sqrt(signal_power / 10 ** (spec.snr_db / 10))
        for trial in range(spec.n_trials):
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=spec.seed, spawn_key=(1, i, trial))
            )
            noise = rng.standard_normal((spec.n_channels, n_samples))
            # normalize each channel's realized noise power so the empirical
            # SNR hits the target exactly, not just in expectation
            rms = np.sqrt(np.mean(noise**2, axis=1, keepdims=True))
            data[:, :, trial, i] = clean + noise_scale[:, None] * noise / rms

    return SsvepDataset(
        data=data,
        stim_frequencies_hz=spec.frequencies_hz,
        stim_phases_rad=spec.phases_rad,
        sample_rate_hz=spec.sample_rate_hz,
        visual_latency_s=0.0,
        channel_labels=tuple(f"ch{c + 1}" for c in range(spec.n_channels)),
    )
