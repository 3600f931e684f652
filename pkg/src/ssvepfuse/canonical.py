"""Canonical correlations between multichannel epochs, time-delay embedding,
and the plain spatio-spectral recognizer.

The solver whitens both sides with the (optionally ridge-regularized)
auto-covariances and takes the symmetric eigendecomposition of the whitened
cross-covariance product; correlations are the square roots of its
eigenvalues, clamped to [0, 1].  Rank deficiency is handled by restricting
the whitener to the effective row-rank of each input, measured on the
unregularized spectrum.

Time-delay embedding stacks a signal on top of its tau-sample-delayed copy,
which lets the spatial weights act as a short FIR filter per channel: the
correlation optimum then picks spatial and spectral structure jointly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import EegEpoch
from .errors import NumericalError

DEFAULT_RIDGE = 1e-8
DEFAULT_TAU = 1

# relative eigenvalue cutoff below which a covariance direction counts as absent
_RANK_RTOL = 1e-12


@dataclass(frozen=True)
class CcaResult:
    """Canonical correlation coefficients, sorted descending in [0, 1]."""

    correlations: tuple

    def __post_init__(self):
        rho = tuple(float(r) for r in self.correlations)
        if not rho:
            raise ValueError("a CCA result needs at least one coefficient")
        tol = 1e-9
        if any(r < -tol or r > 1 + tol for r in rho):
            raise ValueError(f"correlations outside [0, 1]: {rho}")
        if any(b > a + tol for a, b in zip(rho, rho[1:])):
            raise ValueError(f"correlations must be sorted descending: {rho}")
        object.__setattr__(self, "correlations", rho)

    @property
    def rank(self) -> int:
        return len(self.correlations)


@dataclass(frozen=True)
class EmbeddedEpoch:
    """A signal stacked with its tau-delayed copy: shape (2*Nc, Ns - tau)."""

    data: np.ndarray
    tau_samples: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)


def embed_delay(z: EegEpoch, tau: int) -> EmbeddedEpoch:
    """Stack ``z`` on top of its ``tau``-sample advanced copy.

    Row j (j < Nc) at column n holds source row j at sample n; row Nc+j
    holds source row j at sample n + tau.
    """
    tau = int(tau)
    if tau < 0:
        raise ValueError(f"delay must be non-negative, got {tau}")
    if tau >= z.n_samples:
        raise ValueError(f"delay {tau} leaves no samples from an epoch of {z.n_samples}")
    ns = z.n_samples - tau
    stacked = np.vstack([z.data[:, :ns], z.data[:, tau:]])
    return EmbeddedEpoch(stacked, tau)


def _whitener(cov: np.ndarray, ridge: float):
    """Return (W, r) with W'(C + alpha I)W = I on the effective rank-r subspace.

    ``alpha`` is ridge * trace(C) / Nc.  With ridge == 0, a rank-deficient
    covariance is an error rather than silently pseudo-inverted.
    """
    eigvals, eigvecs = np.linalg.eigh(cov)
    top = eigvals[-1]
    if not top > 0:
        raise NumericalError("zero-variance input; correlations are undefined")
    keep = eigvals > top * _RANK_RTOL
    rank = int(keep.sum())
    if rank < cov.shape[0] and ridge == 0:
        raise NumericalError(
            "covariance block is singular; set ridge > 0 to regularize"
        )
    alpha = ridge * float(np.trace(cov)) / cov.shape[0]
    return eigvecs[:, keep] / np.sqrt(eigvals[keep] + alpha), rank


def _correlations_from_rows(z_rows: np.ndarray, y_rows: np.ndarray, ridge: float) -> CcaResult:
    n = z_rows.shape[1]
    if n != y_rows.shape[1]:
        raise ValueError(f"sample counts differ: {n} vs {y_rows.shape[1]}")
    if n <= z_rows.shape[0] + y_rows.shape[0]:
        raise ValueError(
            f"{n} samples cannot support CCA on {z_rows.shape[0]} + {y_rows.shape[0]} channels"
        )
    if ridge < 0:
        raise ValueError(f"ridge must be non-negative, got {ridge}")

    zc = z_rows - z_rows.mean(axis=1, keepdims=True)
    yc = y_rows - y_rows.mean(axis=1, keepdims=True)
    czz = zc @ zc.T / (n - 1)
    cyy = yc @ yc.T / (n - 1)
    czy = zc @ yc.T / (n - 1)

    wz, rank_z = _whitener(czz, ridge)
    wy, rank_y = _whitener(cyy, ridge)
    coupled = wz.T @ czy @ wy
    # symmetric product: eigenvalues are squared canonical correlations
    eigvals = np.linalg.eigvalsh(coupled @ coupled.T)
    rank = min(rank_z, rank_y)
    rho = np.sqrt(np.clip(eigvals[::-1][:rank], 0.0, 1.0))
    return CcaResult(tuple(rho))


def canonical_correlations(z: EegEpoch, y: EegEpoch, ridge: float = DEFAULT_RIDGE) -> CcaResult:
    """All canonical correlations between the column-centered signals.

    The result holds min(effective rank of z, effective rank of y)
    coefficients.  ``ridge`` scales a trace-normalized identity added to
    each auto-covariance block.
    """
    return _correlations_from_rows(z.data, y.data, ridge)


def sscca_correlations(
    z: EegEpoch, y: EegEpoch, tau: int = DEFAULT_TAU, ridge: float = DEFAULT_RIDGE
) -> CcaResult:
    """Canonical correlations of the tau-embedded signal against a plain reference.

    Only ``z`` is embedded (the weight vector gets 2*Nc entries, the
    reference keeps Nc); ``y`` loses its last tau columns so the sample
    axes line up.
    """
    if z.n_samples != y.n_samples:
        raise ValueError(f"sample counts differ: {z.n_samples} vs {y.n_samples}")
    embedded = embed_delay(z, tau)
    y_trimmed = y.data[:, : y.n_samples - embedded.tau_samples]
    return _correlations_from_rows(embedded.data, y_trimmed, ridge)


def sscca_recognize_baseline(
    z: EegEpoch,
    templates,
    tau: int = DEFAULT_TAU,
    ridge: float = DEFAULT_RIDGE,
):
    """Pick the template with the largest first canonical correlation.

    Returns ``(index, scores)`` where scores[i] is rho_1 against template i.
    Ties resolve to the lowest index.
    """
    templates = list(templates)
    if len(templates) < 2:
        raise ValueError(f"need at least two candidate templates, got {len(templates)}")
    shape = templates[0].data.shape
    if any(t.data.shape != shape for t in templates):
        raise ValueError("all templates must share one shape")
    scores = [sscca_correlations(z, t, tau, ridge).correlations[0] for t in templates]
    return int(np.argmax(scores)), scores
