"""Per-frequency split templates from training trials and leave-one-out folds.

Templates replace the artificial sinusoid references of classic frequency
recognition: for each stimulus the training trials are averaged, both as a
whole (``overall``) and as two halves (``y1``/``y2``) so the fusion stage
can compare a test epoch against two independent estimates of the response.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import EegEpoch, SsvepDataset


@dataclass(frozen=True)
class TemplateBank:
    """Per-frequency template epochs: first-half mean, second-half mean, overall mean."""

    y1: tuple
    y2: tuple
    overall: tuple

    def __post_init__(self):
        y1, y2, overall = tuple(self.y1), tuple(self.y2), tuple(self.overall)
        if not (len(y1) == len(y2) == len(overall)) or not y1:
            raise ValueError("template lists must be equal-length and non-empty")
        shape = y1[0].data.shape
        for epoch in (*y1, *y2, *overall):
            if epoch.data.shape != shape:
                raise ValueError("all template epochs must share one shape")
        object.__setattr__(self, "y1", y1)
        object.__setattr__(self, "y2", y2)
        object.__setattr__(self, "overall", overall)

    @property
    def n_frequencies(self) -> int:
        return len(self.y1)


@dataclass(frozen=True)
class FoldPlan:
    """Leave-one-out folds: each trial is held out once, training order ascending."""

    folds: tuple


def loocv_folds(n_trials: int) -> FoldPlan:
    """Enumerate leave-one-out folds over ``n_trials`` trials (0-based)."""
    if n_trials < 2:
        raise ValueError(f"leave-one-out needs at least 2 trials, got {n_trials}")
    folds = tuple(
        (test, tuple(t for t in range(n_trials) if t != test))
        for test in range(n_trials)
    )
    return FoldPlan(folds)


def window_bounds(sample_rate_hz: float, start_s: float, duration_s: float):
    """Convert a (start, duration) in seconds to a half-open sample range."""
    if start_s < 0:
        raise ValueError(f"window start must be non-negative, got {start_s}")
    if not duration_s > 0:
        raise ValueError(f"window duration must be positive, got {duration_s}")
    first = round(start_s * sample_rate_hz)
    length = round(duration_s * sample_rate_hz)
    if length < 2:
        raise ValueError(f"window of {duration_s} s holds fewer than 2 samples")
    return first, first + length


def extract_window(
    dataset: SsvepDataset,
    trial: int,
    freq_index: int,
    start_s: float,
    duration_s: float,
) -> EegEpoch:
    """Slice one (trial, frequency) record to a window, as float64.

    ``start_s`` normally carries the visual latency so the window begins at
    the cortical response rather than the stimulus onset.
    """
    if not 0 <= trial < dataset.n_trials:
        raise ValueError(f"trial {trial} out of range [0, {dataset.n_trials})")
    if not 0 <= freq_index < dataset.n_frequencies:
        raise ValueError(f"frequency index {freq_index} out of range [0, {dataset.n_frequencies})")
    first, last = window_bounds(dataset.sample_rate_hz, start_s, duration_s)
    if last > dataset.n_samples:
        raise ValueError(
            f"window [{first}, {last}) runs past the record of {dataset.n_samples} samples"
        )
    return EegEpoch(dataset.data[:, first:last, trial, freq_index], dataset.sample_rate_hz)


def build_templates(dataset: SsvepDataset, train_trials, window) -> TemplateBank:
    """Average training trials into per-frequency templates over a sample window.

    The first ceil(T/2) trials (in the order given) form y1, the rest y2;
    with a single training trial all three templates are that trial.
    """
    train = [int(t) for t in train_trials]
    if not train:
        raise ValueError("no training trials given")
    if len(set(train)) != len(train):
        raise ValueError(f"duplicate training trials: {train}")
    if any(not 0 <= t < dataset.n_trials for t in train):
        raise ValueError(f"training trials {train} out of range [0, {dataset.n_trials})")
    first, last = int(window[0]), int(window[1])
    if not 0 <= first < last <= dataset.n_samples:
        raise ValueError(f"window [{first}, {last}) outside [0, {dataset.n_samples})")

    n_first = (len(train) + 1) // 2
    fs = dataset.sample_rate_hz
    y1, y2, overall = [], [], []
    for freq in range(dataset.n_frequencies):
        trials = dataset.data[:, first:last, train, freq].astype(np.float64)
        y1.append(EegEpoch(trials[:, :, :n_first].mean(axis=2), fs))
        if len(train) > 1:
            y2.append(EegEpoch(trials[:, :, n_first:].mean(axis=2), fs))
        else:
            y2.append(y1[-1])
        overall.append(EegEpoch(trials.mean(axis=2), fs))
    return TemplateBank(tuple(y1), tuple(y2), tuple(overall))
