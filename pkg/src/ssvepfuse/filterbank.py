"""Chebyshev Type I bandpass filterbank and harmonic subband decomposition.

The bank's m-th filter opens at ``m * f0`` (the m-th harmonic of the base
stimulus frequency) and shares one upper cutoff, 80 Hz by default.  Designs
are realized as cascaded second-order sections: a direct-form order-12 IIR
with these edge frequencies is numerically fragile, so the (b, a) transfer
function is kept only as the interchange representation.

Filtering is zero-phase (forward-backward) with odd-reflection edge padding
of three filter lengths; any net phase shift would corrupt the canonical
correlations downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import signal

from .dataio import EegEpoch
from .errors import FilterDesignError

DEFAULT_ORDER = 12
DEFAULT_RIPPLE_DB = 3.0
DEFAULT_HIGH_HZ = 80.0
DEFAULT_N_SUBBANDS = 5


@dataclass(frozen=True)
class BandpassSpec:
    """Design parameters for one bandpass filter.

    ``order`` is the order of the final bandpass (twice the lowpass
    prototype order), so it must be even.  ``ripple_db`` is the passband
    ripple of the Type I design.
    """

    low_hz: float
    sample_rate_hz: float
    high_hz: float = DEFAULT_HIGH_HZ
    order: int = DEFAULT_ORDER
    ripple_db: float = DEFAULT_RIPPLE_DB

    def __post_init__(self):
        if self.order < 2 or self.order % 2 != 0:
            raise ValueError(f"bandpass order must be a positive even integer, got {self.order}")
        if not self.ripple_db > 0:
            raise ValueError(f"ripple must be positive, got {self.ripple_db}")
        if not 0 < self.low_hz < self.high_hz:
            raise ValueError(f"need 0 < low < high, got ({self.low_hz}, {self.high_hz})")
        if not self.high_hz < self.sample_rate_hz / 2:
            raise ValueError(
                f"upper edge {self.high_hz} Hz must sit below Nyquist "
                f"({self.sample_rate_hz / 2} Hz)"
            )


@dataclass(frozen=True)
class FilterCoefficients:
    """Digital IIR filter as numerator/denominator polynomials in z^-1.

    ``sos`` carries the second-order-section cascade actually used to apply
    the filter; it is derived from the same pole/zero set as (b, a).
    """

    numerator: tuple
    denominator: tuple
    sos: np.ndarray = None

    def __post_init__(self):
        num = tuple(float(v) for v in self.numerator)
        den = tuple(float(v) for v in self.denominator)
        if not den or den[0] != 1.0:
            raise ValueError("denominator must be normalized (leading coefficient 1)")
        poles = np.roots(den) if len(den) > 1 else np.array([])
        if poles.size and np.abs(poles).max() >= 1.0:
            raise FilterDesignError(
                f"unstable filter: pole radius {np.abs(poles).max():.6f} >= 1"
            )
        sos = self.sos
        if sos is None:
            sos = signal.tf2sos(num, den)
        sos = np.asarray(sos, dtype=np.float64)
        sos.flags.writeable = False
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        object.__setattr__(self, "sos", sos)

    @property
    def pad_samples(self) -> int:
        """Edge padding used by zero-phase application: 3 filter lengths."""
        return 3 * max(len(self.numerator), len(self.denominator))


def design_chebyshev1(spec: BandpassSpec) -> FilterCoefficients:
    """Design a digital Chebyshev Type I bandpass filter.

    Uses the bilinear transform with frequency prewarping (scipy's IIR
    design path) on a lowpass prototype of order ``spec.order / 2``.
    """
    z, p, k = signal.cheby1(
        spec.order // 2,
        spec.ripple_db,
        [spec.low_hz, spec.high_hz],
        btype="bandpass",
        fs=spec.sample_rate_hz,
        output="zpk",
    )
    if np.abs(p).max() >= 1.0:
        raise FilterDesignError(
            f"design for ({spec.low_hz}, {spec.high_hz}) Hz at fs={spec.sample_rate_hz} "
            f"is unstable (pole radius {np.abs(p).max():.6f})"
        )
    b, a = signal.zpk2tf(z, p, k)
    sos = signal.zpk2sos(z, p, k)
    return FilterCoefficients(tuple(b), tuple(a / a[0]), sos)


@lru_cache(maxsize=128)
def _cached_design(low_hz, sample_rate_hz, high_hz, order, ripple_db) -> FilterCoefficients:
    return design_chebyshev1(BandpassSpec(low_hz, sample_rate_hz, high_hz, order, ripple_db))


def filter_zero_phase(epoch: EegEpoch, coeffs: FilterCoefficients) -> EegEpoch:
    """Filter each channel forward then backward (zero net phase shift).

    Edge transients are suppressed with odd-reflection padding of
    ``coeffs.pad_samples`` points, so the epoch must be longer than that.
    """
    padlen = coeffs.pad_samples
    if epoch.n_samples <= padlen:
        raise ValueError(
            f"epoch of {epoch.n_samples} samples is too short for zero-phase "
            f"filtering (needs > {padlen})"
        )
    # scipy's sosfilt kernel needs a writable section array
    filtered = signal.sosfiltfilt(
        coeffs.sos.copy(), epoch.data, axis=1, padtype="odd", padlen=padlen
    )
    return EegEpoch(filtered, epoch.sample_rate_hz)


@dataclass(frozen=True)
class SubbandSet:
    """An epoch decomposed into harmonic subbands, in ascending band order."""

    bands: tuple
    specs: tuple

    def __post_init__(self):
        bands = tuple(self.bands)
        specs = tuple(self.specs)
        if not bands or len(bands) != len(specs):
            raise ValueError("bands and specs must be equal-length and non-empty")
        shape = bands[0].data.shape
        if any(b.data.shape != shape for b in bands):
            raise ValueError("all subbands must share one shape")
        object.__setattr__(self, "bands", bands)
        object.__setattr__(self, "specs", specs)

    @property
    def n_bands(self) -> int:
        return len(self.bands)


def decompose(
    epoch: EegEpoch,
    f0_hz: float,
    sn: int = DEFAULT_N_SUBBANDS,
    ripple_db: float = DEFAULT_RIPPLE_DB,
    order: int = DEFAULT_ORDER,
    high_hz: float = DEFAULT_HIGH_HZ,
) -> SubbandSet:
    """Split an epoch into ``sn`` subbands; band m opens at ``m * f0_hz``.

    All bands share ``high_hz`` as the upper cutoff, so each band's passband
    is nested inside the previous one's.
    """
    if sn < 1:
        raise ValueError(f"need at least one subband, got sn={sn}")
    if not f0_hz > 0:
        raise ValueError(f"base frequency must be positive, got {f0_hz}")
    if not sn * f0_hz < high_hz:
        raise ValueError(
            f"highest lower cutoff {sn * f0_hz} Hz must stay below the shared "
            f"upper cutoff {high_hz} Hz"
        )
    bands = []
    specs = []
    for m in range(1, sn + 1):
        coeffs = _cached_design(m * f0_hz, epoch.sample_rate_hz, high_hz, order, ripple_db)
        bands.append(filter_zero_phase(epoch, coeffs))
        specs.append(BandpassSpec(m * f0_hz, epoch.sample_rate_hz, high_hz, order, ripple_db))
    return SubbandSet(tuple(bands), tuple(specs))
