"""Leave-one-out benchmarks, ITR, and baseline-vs-fusion comparisons.

Each fold holds out one trial: templates come from the remaining trials,
every held-out (trial, frequency) record is classified, and decisions
accumulate into a confusion matrix.  Two recognizers are benchmarked:

* ``baseline_sscca`` -- one wide band (f0 to 80 Hz), overall template,
  first canonical coefficient wins;
* ``proposed_fusion`` -- the filterbank + split-template + two-stage
  weighting pipeline.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .canonical import sscca_recognize_baseline
from .dataio import EvalRow, SsvepDataset
from .filterbank import _cached_design, filter_zero_phase
from .fusion import FusionParams, recognize
from .templates import build_templates, extract_window, loocv_folds, window_bounds


class Method(Enum):
    BASELINE_SSCCA = "baseline_sscca"
    PROPOSED_FUSION = "proposed_fusion"


@dataclass(frozen=True)
class EvalReport:
    """One benchmark outcome: result rows, confusion matrix and provenance."""

    rows: tuple
    confusion: np.ndarray
    method: Method
    params: FusionParams
    window_s: float

    def __post_init__(self):
        confusion = np.asarray(self.confusion, dtype=np.int64)
        if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
            raise ValueError(f"confusion matrix must be square, got {confusion.shape}")
        rows = tuple(self.rows)
        if int(confusion.sum()) != sum(r.n_total for r in rows):
            raise ValueError("confusion total disagrees with result rows")
        confusion.flags.writeable = False
        object.__setattr__(self, "confusion", confusion)
        object.__setattr__(self, "rows", rows)

    @property
    def accuracy(self) -> float:
        return self.rows[0].accuracy


def itr_bits_per_min(accuracy: float, n_classes: int, selection_time_s: float) -> float:
    """Information transfer rate of an N-class selector.

    Uses the standard Wolpaw formula; accuracies at or below chance clamp
    to zero, and the P = 1 endpoint takes its limit log2(N).
    """
    if n_classes < 2:
        raise ValueError(f"need at least 2 classes, got {n_classes}")
    if not 0 <= accuracy <= 1:
        raise ValueError(f"accuracy must lie in [0, 1], got {accuracy}")
    if not selection_time_s > 0:
        raise ValueError(f"selection time must be positive, got {selection_time_s}")
    if accuracy <= 1 / n_classes:
        return 0.0
    if accuracy == 1.0:
        bits = math.log2(n_classes)
    else:
        bits = (
            math.log2(n_classes)
            + accuracy * math.log2(accuracy)
            + (1 - accuracy) * math.log2((1 - accuracy) / (n_classes - 1))
        )
    return max(0.0, bits) * 60.0 / selection_time_s


def _classify_fold(dataset, fold, method, params, window, window_s, start_s):
    """Confusion contribution of one fold (rows: truth, cols: decision)."""
    test_trial, train = fold
    n_freqs = dataset.n_frequencies
    bank = build_templates(dataset, train, window)
    confusion = np.zeros((n_freqs, n_freqs), dtype=np.int64)
    if method is Method.BASELINE_SSCCA:
        band1 = _cached_design(
            dataset.stim_frequencies_hz[0], dataset.sample_rate_hz, 80.0, 12, 3.0
        )
        templates = [filter_zero_phase(t, band1) for t in bank.overall]
        for true in range(n_freqs):
            epoch = extract_window(dataset, test_trial, true, start_s, window_s)
            chosen, _ = sscca_recognize_baseline(
                filter_zero_phase(epoch, band1), templates, params.tau, params.ridge
            )
            confusion[true, chosen] += 1
    else:
        for true in range(n_freqs):
            epoch = extract_window(dataset, test_trial, true, start_s, window_s)
            decision = recognize(epoch, bank, dataset.stim_frequencies_hz[0], params)
            confusion[true, decision.chosen] += 1
    return confusion


def evaluate_loocv(
    dataset: SsvepDataset,
    method: Method = Method.PROPOSED_FUSION,
    params: FusionParams = FusionParams(),
    window_s: float = 1.0,
    start_s: float = None,
    subject_id: str = "dataset",
    threads: int = 1,
) -> EvalReport:
    """Run a leave-one-out benchmark of one method on one dataset.

    ``start_s`` defaults to the dataset's recorded visual latency.  Folds
    may run on a thread pool; the confusion sum is order-independent, so
    the report is identical regardless of schedule.
    """
    if start_s is None:
        start_s = dataset.visual_latency_s
    window = window_bounds(dataset.sample_rate_hz, start_s, window_s)
    if window[1] > dataset.n_samples:
        raise ValueError(
            f"window [{window[0]}, {window[1]}) runs past the record "
            f"of {dataset.n_samples} samples"
        )
    folds = loocv_folds(dataset.n_trials).folds

    if threads == 0:
        threads = None  # executor default: cpu count
    if threads == 1:
        parts = [
            _classify_fold(dataset, fold, method, params, window, window_s, start_s)
            for fold in folds
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda fold: _classify_fold(
                        dataset, fold, method, params, window, window_s, start_s
                    ),
                    folds,
                )
            )
    confusion = np.sum(parts, axis=0)

    n_total = int(confusion.sum())
    n_correct = int(np.trace(confusion))
    accuracy = n_correct / n_total
    row = EvalRow(
        subject_id=subject_id,
        window_s=window_s,
        accuracy=accuracy,
        itr_bits_per_min=itr_bits_per_min(accuracy, dataset.n_frequencies, window_s),
        n_correct=n_correct,
        n_total=n_total,
    )
    return EvalReport((row,), confusion, method, params, window_s)


def compare_methods(
    dataset: SsvepDataset,
    params: FusionParams = FusionParams(),
    windows_s=(0.25, 0.5, 0.75, 1.0),
    start_s: float = None,
    subject_id: str = "dataset",
    threads: int = 1,
):
    """Benchmark both recognizers over a list of windows.

    Returns one report per (window, method), ordered by window first and
    method second (baseline before proposed).
    """
    reports = []
    for window_s in windows_s:
        for method in (Method.BASELINE_SSCCA, Method.PROPOSED_FUSION):
            reports.append(
                evaluate_loocv(dataset, method, params, window_s, start_s, subject_id, threads)
            )
    return reports
