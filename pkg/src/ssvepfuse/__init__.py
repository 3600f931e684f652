"""SSVEP frequency recognition with spatio-spectral CCA and feature fusion.

A library + CLI that classifies short EEG epochs by stimulus frequency:
Chebyshev Type I filterbank subbands, delay-embedded canonical correlations
against split training templates, and two-stage non-linear weighting of the
coefficients.  Ships with a portable dataset format, a synthetic ground-truth
generator and a leave-one-out benchmark harness.
"""

from .canonical import (
    CcaResult,
    EmbeddedEpoch,
    canonical_correlations,
    embed_delay,
    sscca_correlations,
    sscca_recognize_baseline,
)
from .dataio import (
    EegEpoch,
    EvalRow,
    SsvepDataset,
    read_dataset,
    write_dataset,
    write_results_csv,
)
from .errors import (
    CorruptionError,
    FilterDesignError,
    FormatError,
    NumericalError,
    SsvepError,
    ValidationError,
)
from .evaluation import EvalReport, Method, compare_methods, evaluate_loocv, itr_bits_per_min
from .filterbank import (
    BandpassSpec,
    FilterCoefficients,
    SubbandSet,
    decompose,
    design_chebyshev1,
    filter_zero_phase,
)
from .fusion import (
    DecisionScores,
    FeatureVector,
    FusionParams,
    band_fuse,
    band_weights,
    channel_fuse,
    channel_weights,
    grid_search,
    grid_search_table,
    recognize,
    subband_feature,
)
from .synthetic import SynthSpec, generate_ssvep
from .templates import (
    FoldPlan,
    TemplateBank,
    build_templates,
    extract_window,
    loocv_folds,
    window_bounds,
)

__version__ = "0.1.0"
