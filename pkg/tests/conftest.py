import numpy as np
import pytest

from ssvepfuse import SynthSpec, generate_ssvep

PAPER_FREQS = tuple(float(f) for f in np.round(np.arange(9.25, 14.76, 0.5), 10))
PAPER_PHASES = tuple([0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi][i % 4] for i in range(12))


def twelve_class_spec(snr_db=np.inf, seed=42, **overrides) -> SynthSpec:
    """Synthetic stand-in for the 12-class / 8-channel / 15-trial recording."""
    kwargs = dict(
        frequencies_hz=PAPER_FREQS,
        phases_rad=PAPER_PHASES,
        n_channels=8,
        n_trials=15,
        duration_s=4.0,
        sample_rate_hz=256.0,
        n_harmonics=3,
        snr_db=snr_db,
        seed=seed,
    )
    kwargs.update(overrides)
    return SynthSpec(**kwargs)


@pytest.fixture(scope="session")
def small_noisy_dataset():
    """4 classes x 6 trials at +5 dB: big enough to classify, fast to evaluate."""
    spec = SynthSpec(
        frequencies_hz=(9.25, 10.75, 12.25, 13.75),
        phases_rad=(0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi),
        n_channels=6,
        n_trials=6,
        duration_s=2.0,
        sample_rate_hz=256.0,
        n_harmonics=3,
        snr_db=5.0,
        seed=11,
    )
    return generate_ssvep(spec)


@pytest.fixture(scope="session")
def small_noiseless_dataset():
    spec = SynthSpec(
        frequencies_hz=(9.25, 10.75, 12.25, 13.75),
        phases_rad=(0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi),
        n_channels=6,
        n_trials=4,
        duration_s=2.0,
        sample_rate_hz=256.0,
        n_harmonics=3,
        seed=3,
    )
    return generate_ssvep(spec)
