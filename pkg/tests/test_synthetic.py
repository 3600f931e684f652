import numpy as np
import pytest

from ssvepfuse import SynthSpec, generate_ssvep

from conftest import twelve_class_spec


class TestGenerate:
    def test_twelve_class_dimensions(self):
        ds = generate_ssvep(twelve_class_spec())
        assert ds.data.shape == (8, 1024, 15, 12)
        assert ds.stim_frequencies_hz[0] == 9.25
        assert ds.stim_frequencies_hz[-1] == 14.75
        assert ds.visual_latency_s == 0.0

    def test_same_seed_bit_identical(self):
        a = generate_ssvep(twelve_class_spec(snr_db=0.0, seed=42, n_trials=3))
        b = generate_ssvep(twelve_class_spec(snr_db=0.0, seed=42, n_trials=3))
        assert a.data.tobytes() == b.data.tobytes()

    def test_different_seeds_differ(self):
        a = generate_ssvep(twelve_class_spec(snr_db=0.0, seed=1, n_trials=3))
        b = generate_ssvep(twelve_class_spec(snr_db=0.0, seed=2, n_trials=3))
        assert a.data.tobytes() != b.data.tobytes()

    def test_identity_mixing_exact_sinusoid(self):
        spec = SynthSpec(
            frequencies_hz=(11.0,),
            phases_rad=(0.7,),
            n_channels=1,
            n_trials=2,
            duration_s=1.0,
            sample_rate_hz=256.0,
            n_harmonics=1,
            mixing="identity",
            seed=0,
        )
        ds = generate_ssvep(spec)
        t = np.arange(256) / 256.0
        expected = np.sin(2 * np.pi * 11.0 * t + 0.7).astype(np.float32)
        np.testing.assert_array_equal(ds.data[0, :, 0, 0], expected)
        np.testing.assert_array_equal(ds.data[0, :, 1, 0], expected)

    def test_empirical_snr(self):
        for snr_db in (-5.0, 0.0, 10.0):
            spec = twelve_class_spec(snr_db=snr_db, seed=9, n_trials=2)
            ds = generate_ssvep(spec)
            clean = generate_ssvep(twelve_class_spec(seed=9, n_trials=2))
            for trial in (0, 1):
                sig = clean.data[:, :, trial, 0].astype(np.float64)
                noise = ds.data[:, :, trial, 0].astype(np.float64) - sig
                measured = 10 * np.log10(np.mean(sig**2, axis=1) / np.mean(noise**2, axis=1))
                assert np.all(np.abs(measured - snr_db) <= 0.5)

    def test_spectral_peak_at_stimulus(self):
        ds = generate_ssvep(twelve_class_spec(n_trials=2))
        freqs = np.fft.rfftfreq(ds.n_samples, 1 / ds.sample_rate_hz)
        for i, f in enumerate(ds.stim_frequencies_hz):
            spectrum = np.abs(np.fft.rfft(ds.data[:, :, 0, i].astype(np.float64), axis=1))
            peak_bin = int(np.argmax(spectrum.sum(axis=0)))
            assert abs(freqs[peak_bin] - f) <= ds.sample_rate_hz / ds.n_samples / 2 + 1e-9

    def test_harmonic_above_nyquist_rejected(self):
        with pytest.raises(ValueError):
            SynthSpec(
                frequencies_hz=(40.0,),
                phases_rad=(0.0,),
                n_harmonics=4,
                sample_rate_hz=256.0,
            )

    def test_mixing_matrix_conditioning(self):
        from ssvepfuse.synthetic import _mixing_matrix

        for seed in range(10):
            mat = _mixing_matrix(twelve_class_spec(seed=seed))
            sv = np.linalg.svd(mat, compute_uv=False)
            assert sv[0] / sv[-1] < 10.0

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            SynthSpec(frequencies_hz=(), phases_rad=())
        with pytest.raises(ValueError):
            SynthSpec(frequencies_hz=(10.0,), phases_rad=(0.0, 1.0))
        with pytest.raises(ValueError):
            SynthSpec(frequencies_hz=(10.0,), phases_rad=(0.0,), mixing="butterfly")
