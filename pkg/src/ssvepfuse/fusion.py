"""Two-stage non-linear feature fusion and the fused-score recognizer.

Stage one operates per subband: the test epoch is compared against both
split templates, the two coefficient vectors are merged, sorted descending
and truncated to the channel count, then collapsed with exponentially
decaying rank weights ``exp(-a1*k) + b1``.  Stage two collapses the
per-band values with power-law weights ``m**-a2 + b2``.  Both weight
families are strictly positive and decreasing at the default parameters:
leading coefficients and low harmonics carry the discriminative mass, but
the tails still contribute.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .canonical import DEFAULT_RIDGE, DEFAULT_TAU, sscca_correlations
from .dataio import EegEpoch, SsvepDataset
from .filterbank import DEFAULT_N_SUBBANDS, decompose
from .templates import TemplateBank, build_templates, loocv_folds, window_bounds

DEFAULT_A1 = 0.6
DEFAULT_B1 = 0.2
DEFAULT_A2 = 2.0
DEFAULT_B2 = 0.25

# invented search grid; the method's parameters were reported, not the grid
DEFAULT_GRID_A1 = tuple(np.round(np.arange(0.2, 1.61, 0.2), 10))
DEFAULT_GRID_B1 = tuple(np.round(np.arange(0.0, 0.51, 0.1), 10))
DEFAULT_GRID_A2 = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
DEFAULT_GRID_B2 = (0.0, 0.25, 0.5)


@dataclass(frozen=True)
class FusionParams:
    """Weighting, subband and embedding parameters of the fused recognizer."""

    a1: float = DEFAULT_A1
    b1: float = DEFAULT_B1
    a2: float = DEFAULT_A2
    b2: float = DEFAULT_B2
    sn: int = DEFAULT_N_SUBBANDS
    tau: int = DEFAULT_TAU
    ridge: float = DEFAULT_RIDGE

    def __post_init__(self):
        if self.sn < 1:
            raise ValueError(f"need at least one subband, got sn={self.sn}")
        if self.tau < 0:
            raise ValueError(f"delay must be non-negative, got {self.tau}")
        if self.ridge < 0:
            raise ValueError(f"ridge must be non-negative, got {self.ridge}")


@dataclass(frozen=True)
class FeatureVector:
    """Top-Nc merged correlation coefficients, sorted descending."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("empty feature vector")
        tol = 1e-9
        if any(v < -tol or v > 1 + tol for v in vals):
            raise ValueError(f"feature values outside [0, 1]: {vals}")
        if any(b > a + tol for a, b in zip(vals, vals[1:])):
            raise ValueError(f"feature values must be sorted descending: {vals}")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class DecisionScores:
    """Fused per-frequency scores and the winning index (lowest on ties)."""

    psi: tuple
    chosen: int

    def __post_init__(self):
        psi = tuple(float(p) for p in self.psi)
        if int(np.argmax(psi)) != self.chosen:
            raise ValueError("chosen index must be the first maximizer of psi")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "chosen", int(self.chosen))


def channel_weights(n_channels: int, a1: float = DEFAULT_A1, b1: float = DEFAULT_B1) -> np.ndarray:
    """Rank weights exp(-a1*k) + b1 for k = 1..Nc."""
    k = np.arange(1, n_channels + 1, dtype=np.float64)
    return np.exp(-a1 * k) + b1


def band_weights(sn: int, a2: float = DEFAULT_A2, b2: float = DEFAULT_B2) -> np.ndarray:
    """Subband weights m**-a2 + b2 for m = 1..Sn."""
    m = np.arange(1, sn + 1, dtype=np.float64)
    return m ** -a2 + b2


def subband_feature(
    z_m: EegEpoch, y1_m: EegEpoch, y2_m: EegEpoch, params: FusionParams = FusionParams()
) -> FeatureVector:
    """Merged correlation features of one subband against both split templates.

    Each comparison yields up to Nc coefficients (zero-padded when the
    effective rank falls short); the 2*Nc pool is sorted descending and the
    top Nc survive.
    """
    n_channels = z_m.n_channels
    merged = []
    for template in (y1_m, y2_m):
        rho = sscca_correlations(z_m, template, params.tau, params.ridge).correlations
        merged.extend(rho)
        merged.extend([0.0] * (n_channels - len(rho)))
    merged.sort(reverse=True)
    return FeatureVector(tuple(merged[:n_channels]))


def channel_fuse(feature: FeatureVector, params: FusionParams = FusionParams()) -> float:
    """Collapse a ranked feature vector with the channel-level weights."""
    weights = channel_weights(len(feature.values), params.a1, params.b1)
    return float(weights @ np.asarray(feature.values))


def band_fuse(deltas, params: FusionParams = FusionParams()) -> float:
    """Collapse per-band values with the band-level weights."""
    deltas = np.asarray(deltas, dtype=np.float64)
    if deltas.shape != (params.sn,):
        raise ValueError(f"expected {params.sn} band values, got shape {deltas.shape}")
    return float(band_weights(params.sn, params.a2, params.b2) @ deltas)


def recognize(
    z: EegEpoch,
    bank: TemplateBank,
    f0_hz: float,
    params: FusionParams = FusionParams(),
) -> DecisionScores:
    """Classify one epoch against a template bank with the fused pipeline.

    The epoch and every split template are decomposed into ``params.sn``
    subbands; per (frequency, band) the merged features collapse to one
    value, per frequency the band values collapse to the fused score psi.
    """
    n_freqs = bank.n_frequencies
    if n_freqs < 2:
        raise ValueError(f"need at least two candidate frequencies, got {n_freqs}")
    if bank.y1[0].data.shape != z.data.shape:
        raise ValueError(
            f"epoch shape {z.data.shape} does not match template shape {bank.y1[0].data.shape}"
        )
    z_bands = decompose(z, f0_hz, params.sn)
    psi = []
    for i in range(n_freqs):
        y1_bands = decompose(bank.y1[i], f0_hz, params.sn)
        y2_bands = decompose(bank.y2[i], f0_hz, params.sn)
        deltas = [
            channel_fuse(
                subband_feature(z_bands.bands[m], y1_bands.bands[m], y2_bands.bands[m], params),
                params,
            )
            for m in range(params.sn)
        ]
        psi.append(band_fuse(deltas, params))
    return DecisionScores(tuple(psi), int(np.argmax(psi)))


def _feature_tensor(dataset: SsvepDataset, window, base: FusionParams) -> np.ndarray:
    """Per-fold merged features for every (test record, candidate) pair.

    Shape (Nt folds, Nf true, Nf candidate, Sn, Nc).  The features do not
    depend on the fusion weights, so one tensor serves a whole grid search.
    """
    n_trials, n_freqs = dataset.n_trials, dataset.n_frequencies
    n_channels = dataset.n_channels
    f0 = dataset.stim_frequencies_hz[0]
    features = np.empty((n_trials, n_freqs, n_freqs, base.sn, n_channels))
    for test_trial, train in loocv_folds(n_trials).folds:
        bank = build_templates(dataset, train, window)
        y1_bands = [decompose(bank.y1[i], f0, base.sn) for i in range(n_freqs)]
        y2_bands = [decompose(bank.y2[i], f0, base.sn) for i in range(n_freqs)]
        for true in range(n_freqs):
            epoch = EegEpoch(
                dataset.data[:, window[0]:window[1], test_trial, true], dataset.sample_rate_hz
            )
            z_bands = decompose(epoch, f0, base.sn)
            for cand in range(n_freqs):
                for m in range(base.sn):
                    features[test_trial, true, cand, m] = subband_feature(
                        z_bands.bands[m],
                        y1_bands[cand].bands[m],
                        y2_bands[cand].bands[m],
                        base,
                    ).values
    return features


def grid_search(
    dataset: SsvepDataset,
    a1_grid=DEFAULT_GRID_A1,
    b1_grid=DEFAULT_GRID_B1,
    a2_grid=DEFAULT_GRID_A2,
    b2_grid=DEFAULT_GRID_B2,
    window_s: float = 1.0,
    start_s: float = None,
    base: FusionParams = FusionParams(),
) -> FusionParams:
    """Exhaustive search of the weighting parameters by LOOCV accuracy.

    Returns ``base`` with the winning (a1, b1, a2, b2); ties resolve to the
    first tuple in grid order.  Subband count, delay and ridge stay fixed
    during the search.
    """
    params, _, _ = grid_search_table(
        dataset, a1_grid, b1_grid, a2_grid, b2_grid, window_s, start_s, base
    )
    return params


def grid_search_table(
    dataset: SsvepDataset,
    a1_grid=DEFAULT_GRID_A1,
    b1_grid=DEFAULT_GRID_B1,
    a2_grid=DEFAULT_GRID_A2,
    b2_grid=DEFAULT_GRID_B2,
    window_s: float = 1.0,
    start_s: float = None,
    base: FusionParams = FusionParams(),
):
    """Like :func:`grid_search` but also returns the winning accuracy and the
    full (a1, b1, a2, b2, accuracy) table in grid order."""
    grids = [list(map(float, g)) for g in (a1_grid, b1_grid, a2_grid, b2_grid)]
    if any(not g for g in grids):
        raise ValueError("every parameter grid must be non-empty")
    if start_s is None:
        start_s = dataset.visual_latency_s
    window = window_bounds(dataset.sample_rate_hz, start_s, window_s)
    if window[1] > dataset.n_samples:
        raise ValueError(f"window {window} runs past the record of {dataset.n_samples} samples")

    features = _feature_tensor(dataset, window, base)
    truth = np.arange(dataset.n_frequencies)[None, :, None]

    table = []
    best = None
    for a1, b1, a2, b2 in itertools.product(*grids):
        deltas = features @ channel_weights(dataset.n_channels, a1, b1)
        psi = deltas @ band_weights(base.sn, a2, b2)
        accuracy = float(np.mean(np.argmax(psi, axis=2, keepdims=True) == truth))
        table.append((a1, b1, a2, b2, accuracy))
        if best is None or accuracy > best[4]:
            best = table[-1]
    params = replace(base, a1=best[0], b1=best[1], a2=best[2], b2=best[3])
    return params, best[4], table
