import numpy as np
import pytest

from ssvepfuse import (
    EegEpoch,
    NumericalError,
    SynthSpec,
    build_templates,
    canonical_correlations,
    embed_delay,
    generate_ssvep,
    sscca_correlations,
    sscca_recognize_baseline,
)

FS = 256.0


def epoch(data, fs=FS):
    return EegEpoch(np.asarray(data, dtype=float), fs)


def grid_max_correlation(z, y, n_angles=720):
    """Brute-force first canonical correlation of two 2-row signals.

    Sweeps unit-norm weight pairs parametrized by angles on a grid and takes
    the largest absolute Pearson correlation of the projections, contracted
    through the centered 2x2 covariance blocks.  Independent of the
    eigendecomposition solver.
    """
    zc = z - z.mean(axis=1, keepdims=True)
    yc = y - y.mean(axis=1, keepdims=True)
    czz, cyy, czy = zc @ zc.T, yc @ yc.T, zc @ yc.T
    theta = np.linspace(0.0, np.pi, n_angles, endpoint=False)
    w = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    num = w @ czy @ w.T
    qz = np.einsum("ij,jk,ik->i", w, czz, w)
    qy = np.einsum("ij,jk,ik->i", w, cyy, w)
    return float(np.max(np.abs(num) / np.sqrt(np.outer(qz, qy))))


class TestCanonicalCorrelations:
    def test_identical_inputs(self):
        rng = np.random.default_rng(0)
        z = epoch(rng.standard_normal((2, 100)))
        result = canonical_correlations(z, z, ridge=1e-8)
        assert result.rank == 2
        np.testing.assert_allclose(result.correlations, [1.0, 1.0], atol=1e-6)

    def test_sin_vs_cos_integer_cycles(self):
        t = np.arange(256) / FS
        z = epoch(np.sin(2 * np.pi * 10 * t)[None, :])
        y = epoch(np.cos(2 * np.pi * 10 * t)[None, :])
        result = canonical_correlations(z, y, ridge=0.0)
        assert result.correlations[0] <= 0.01
        # cross-check with the direct Pearson oracle
        pearson = np.corrcoef(z.data[0], y.data[0])[0, 1]
        assert abs(pearson) <= 0.01

    def test_shared_source_mixtures(self):
        rng = np.random.default_rng(1)
        source = rng.standard_normal((2, 200))
        a = np.array([[1.0, 0.5], [-0.3, 2.0]])
        b = np.array([[0.8, -1.0], [0.6, 0.9]])
        result = canonical_correlations(epoch(a @ source), epoch(b @ source), ridge=1e-10)
        np.testing.assert_allclose(result.correlations, [1.0, 1.0], atol=1e-6)

    def test_independent_noise_is_uncorrelated(self):
        for seed in (0, 1, 2):
            rng = np.random.default_rng(seed)
            z = epoch(rng.standard_normal((2, 20000)))
            y = epoch(rng.standard_normal((2, 20000)))
            assert canonical_correlations(z, y, 0.0).correlations[0] < 0.1

    def test_single_channel_equals_pearson(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            z = epoch(rng.standard_normal((1, 300)))
            y = epoch(0.3 * z.data + 0.5 * rng.standard_normal((1, 300)))
            rho = canonical_correlations(z, y, 0.0).correlations[0]
            pearson = abs(np.corrcoef(z.data[0], y.data[0])[0, 1])
            assert abs(rho - pearson) <= 1e-9

    def test_brute_force_grid(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            mix = rng.standard_normal((2, 2))
            shared = rng.standard_normal((2, 500))
            z = rng.standard_normal((2, 500)) + shared
            y = mix @ shared + rng.standard_normal((2, 500))
            rho = canonical_correlations(epoch(z), epoch(y), 0.0).correlations[0]
            grid = grid_max_correlation(z, y, n_angles=2000)
            assert rho - 1e-3 <= grid <= rho + 1e-4

    def test_invertible_mixing_invariance(self):
        rng = np.random.default_rng(3)
        z = rng.standard_normal((3, 400))
        y = rng.standard_normal((2, 400)) + 0.5 * z[:2]
        base = canonical_correlations(epoch(z), epoch(y), 0.0).correlations
        mixing = np.array([[2.0, 0.3, -0.5], [0.1, -1.2, 0.4], [0.7, 0.2, 1.1]])
        moved = canonical_correlations(epoch(mixing @ z), epoch(y), 0.0).correlations
        np.testing.assert_allclose(moved, base, atol=1e-8)

    def test_symmetry(self):
        rng = np.random.default_rng(4)
        z = epoch(rng.standard_normal((2, 300)))
        y = epoch(rng.standard_normal((3, 300)))
        ab = canonical_correlations(z, y, 0.0).correlations
        ba = canonical_correlations(y, z, 0.0).correlations
        np.testing.assert_allclose(ab, ba, atol=1e-9)

    def test_mismatched_samples(self):
        with pytest.raises(ValueError):
            canonical_correlations(epoch(np.zeros((1, 50)) + np.arange(50)),
                                   epoch(np.ones((1, 60)) + np.arange(60)))

    def test_sample_sufficiency(self):
        rng = np.random.default_rng(5)
        with pytest.raises(ValueError):
            canonical_correlations(epoch(rng.standard_normal((4, 8))),
                                   epoch(rng.standard_normal((4, 8))))

    def test_singular_needs_ridge(self):
        row = np.arange(100.0)
        z = epoch(np.vstack([row, row]))  # duplicated rows: rank 1
        y = epoch(np.arange(100.0)[None, :] ** 2)
        with pytest.raises(NumericalError, match="ridge"):
            canonical_correlations(z, y, ridge=0.0)
        result = canonical_correlations(z, y, ridge=1e-8)
        assert result.rank == 1

    def test_zero_variance_rejected(self):
        z = epoch(np.zeros((1, 50)))
        y = epoch(np.arange(50.0)[None, :])
        with pytest.raises(NumericalError):
            canonical_correlations(z, y, ridge=1e-8)


class TestEmbedDelay:
    def test_shape(self):
        rng = np.random.default_rng(0)
        z = epoch(rng.standard_normal((8, 256)))
        emb = embed_delay(z, 1)
        assert emb.data.shape == (16, 255)
        assert emb.tau_samples == 1

    def test_tau_zero_duplicates(self):
        rng = np.random.default_rng(1)
        z = epoch(rng.standard_normal((8, 256)))
        emb = embed_delay(z, 0)
        assert emb.data.shape == (16, 256)
        np.testing.assert_array_equal(emb.data[:8], emb.data[8:])

    def test_ramp_example(self):
        z = epoch(np.array([[0.0, 1.0, 2.0, 3.0]]))
        emb = embed_delay(z, 2)
        np.testing.assert_array_equal(emb.data, [[0.0, 1.0], [2.0, 3.0]])

    def test_content_invariant(self):
        rng = np.random.default_rng(2)
        z = epoch(rng.standard_normal((3, 20)))
        tau = 4
        emb = embed_delay(z, tau)
        for j in range(3):
            for n in range(20 - tau):
                assert emb.data[j, n] == z.data[j, n]
                assert emb.data[3 + j, n] == z.data[j, n + tau]

    def test_tau_out_of_range(self):
        z = epoch(np.zeros((1, 10)) + np.arange(10))
        with pytest.raises(ValueError):
            embed_delay(z, 10)
        with pytest.raises(ValueError):
            embed_delay(z, -1)


class TestSscca:
    def test_tau_zero_matches_plain_cca(self):
        rng = np.random.default_rng(0)
        z = epoch(rng.standard_normal((3, 500)))
        y = epoch(rng.standard_normal((2, 500)) + 0.4 * z.data[:2])
        plain = canonical_correlations(z, y, ridge=1e-8).correlations
        embedded = sscca_correlations(z, y, tau=0, ridge=1e-8).correlations
        np.testing.assert_allclose(embedded, plain, atol=1e-6)

    def test_self_match(self):
        rng = np.random.default_rng(1)
        z = epoch(rng.standard_normal((8, 512)))
        result = sscca_correlations(z, z, tau=1, ridge=1e-8)
        assert result.correlations[0] >= 0.999
        assert result.rank == 8

    def test_embedding_contains_plain_problem(self):
        rng = np.random.default_rng(2)
        tau = 1
        z = epoch(rng.standard_normal((3, 400)))
        y = epoch(rng.standard_normal((3, 400)) + 0.3 * z.data)
        trimmed_z = epoch(z.data[:, : 400 - tau])
        trimmed_y = epoch(y.data[:, : 400 - tau])
        plain = canonical_correlations(trimmed_z, trimmed_y, 1e-8).correlations[0]
        embedded = sscca_correlations(z, y, tau=tau, ridge=1e-8).correlations[0]
        assert embedded >= plain - 1e-6

    def test_synthetic_match_beats_mismatches(self):
        spec = SynthSpec(
            frequencies_hz=tuple(9.25 + 0.5 * i for i in range(12)),
            phases_rad=tuple([0.0, np.pi / 2, np.pi, 1.5 * np.pi][i % 4] for i in range(12)),
            n_channels=8, n_trials=3, duration_s=2.0, sample_rate_hz=FS,
            n_harmonics=3, snr_db=10.0, seed=123,
        )
        ds = generate_ssvep(spec)
        bank = build_templates(ds, [1, 2], (0, 512))
        target = 5  # 11.75 Hz
        z = EegEpoch(ds.data[:, :512, 0, target], FS)
        scores = [
            sscca_correlations(z, bank.overall[i], tau=1, ridge=1e-8).correlations[0]
            for i in range(12)
        ]
        assert np.argmax(scores) == target
        assert all(scores[target] > s for i, s in enumerate(scores) if i != target)


class TestBaselineRecognizer:
    def _bank(self, seed=0, n=4):
        rng = np.random.default_rng(seed)
        return [EegEpoch(rng.standard_normal((4, 300)), FS) for _ in range(n)]

    def test_self_match(self):
        templates = self._bank()
        z = templates[3]
        index, scores = sscca_recognize_baseline(z, templates, tau=1, ridge=1e-8)
        assert index == 3
        assert scores[3] >= 0.999

    def test_tie_breaks_low(self):
        rng = np.random.default_rng(1)
        t = EegEpoch(rng.standard_normal((4, 300)), FS)
        z = EegEpoch(rng.standard_normal((4, 300)), FS)
        index, scores = sscca_recognize_baseline(z, [t, t, t], tau=1, ridge=1e-8)
        assert index == 0
        np.testing.assert_allclose(scores, scores[0], atol=1e-12)

    def test_scale_invariant_argmax(self):
        templates = self._bank(seed=2)
        rng = np.random.default_rng(3)
        z = EegEpoch(0.5 * templates[1].data + 0.1 * rng.standard_normal((4, 300)), FS)
        base_index, _ = sscca_recognize_baseline(z, templates, 1, 1e-8)
        for scale in (0.02, 3.7, 250.0):
            scaled = EegEpoch(scale * z.data, FS)
            index, _ = sscca_recognize_baseline(scaled, templates, 1, 1e-8)
            assert index == base_index

    def test_noiseless_dataset_fully_recognized(self, small_noiseless_dataset):
        ds = small_noiseless_dataset
        bank = build_templates(ds, list(range(ds.n_trials)), (0, 256))
        for trial in range(ds.n_trials):
            for true in range(ds.n_frequencies):
                z = EegEpoch(ds.data[:, :256, trial, true], ds.sample_rate_hz)
                index, _ = sscca_recognize_baseline(z, list(bank.overall), 1, 1e-8)
                assert index == true

    def test_shape_mismatch(self):
        templates = self._bank()
        templates[1] = EegEpoch(np.random.default_rng(9).standard_normal((4, 299)), FS)
        with pytest.raises(ValueError):
            sscca_recognize_baseline(templates[0], templates, 1, 1e-8)
