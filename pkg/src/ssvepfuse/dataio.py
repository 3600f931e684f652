"""Core recording types, the portable ``.ssvp`` dataset format and result emitters.

The portable format is a flat little-endian binary layout::

    bytes 0-3   magic ``SSVP``
    byte  4     version (currently 1)
    bytes 5-7   zero padding
    6 x u32     n_channels, n_samples, n_trials, n_frequencies,
                sample_rate_mhz (milli-hertz), visual_latency_ms
    Nf x f32    stimulus frequencies (Hz)
    Nf x f32    stimulus phases (radians)
    Nc x 8B     channel labels, ASCII, space-padded
    payload     float32 samples, frequency-major:
                index = ((f * Nt + t) * Nc + c) * Ns + s

Samples are stored as float32 (the source recordings are 24-bit ADC, so
single precision loses nothing meaningful); all downstream math promotes
to float64.  Stimulus metadata is carried at single precision by the
format, so the in-memory types normalize it through float32 at
construction time -- this makes write/read round trips bit-exact for any
constructible dataset.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptionError, FormatError, ValidationError

MAGIC = b"SSVP"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sB3x6I")
_LABEL_BYTES = 8


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, order="C")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class EegEpoch:
    """One multichannel EEG segment: a (n_channels, n_samples) real matrix.

    The unit all the math operates on.  Amplitudes are microvolts but the
    pipeline is scale-free.  Data is copied to float64 and frozen.
    """

    data: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        arr = _frozen_array(self.data, np.float64)
        if arr.ndim != 2:
            raise ValidationError(f"epoch data must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 2:
            raise ValidationError(f"epoch needs >=1 channel and >=2 samples, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValidationError("epoch contains non-finite samples")
        if not self.sample_rate_hz > 0:
            raise ValidationError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz


def _on_grid_milli(value: float) -> bool:
    """True when ``value`` survives a round trip through integer milli-units."""
    ticks = round(value * 1000)
    return 0 <= ticks <= 0xFFFFFFFF and ticks / 1000 == value


@dataclass(frozen=True)
class SsvepDataset:
    """A full recording: (n_channels, n_samples, n_trials, n_frequencies) array
    plus stimulus metadata.  The unit of ingestion and evaluation.

    Samples are float32 (matching the file format); stimulus frequencies and
    phases are normalized to float32-representable values.  The visual
    latency is stored as metadata only -- window extraction applies it, the
    raw samples stay pristine.
    """

    data: np.ndarray
    stim_frequencies_hz: tuple
    stim_phases_rad: tuple
    sample_rate_hz: float
    visual_latency_s: float
    channel_labels: tuple

    def __post_init__(self):
        arr = _frozen_array(self.data, np.float32)
        if arr.ndim != 4:
            raise ValidationError(f"dataset array must be 4-D, got shape {arr.shape}")
        nc, ns, nt, nf = arr.shape
        if nc < 1 or ns < 2:
            raise ValidationError(f"need >=1 channel and >=2 samples, got {arr.shape}")
        if nt < 2:
            raise ValidationError(f"need >=2 trials for leave-one-out evaluation, got {nt}")
        if not np.isfinite(arr).all():
            raise ValidationError("dataset contains non-finite samples")

        freqs = tuple(float(np.float32(f)) for f in self.stim_frequencies_hz)
        phases = tuple(float(np.float32(p)) for p in self.stim_phases_rad)
        if len(freqs) != nf:
            raise ValidationError(f"frequency list length {len(freqs)} != array Nf {nf}")
        if len(phases) != nf:
            raise ValidationError(f"phase list length {len(phases)} != Nf {nf}")
        if any(f <= 0 for f in freqs):
            raise ValidationError("stimulus frequencies must be positive")
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValidationError("stimulus frequencies must be strictly increasing")

        fs = float(self.sample_rate_hz)
        if not fs > 0:
            raise ValidationError(f"sample rate must be positive, got {fs}")
        if not _on_grid_milli(fs):
            raise ValidationError(f"sample rate {fs} Hz is not representable in milli-hertz")
        latency = float(self.visual_latency_s)
        if latency < 0:
            raise ValidationError(f"visual latency must be non-negative, got {latency}")
        if not _on_grid_milli(latency):
            raise ValidationError(f"visual latency {latency} s is not representable in milliseconds")

        labels = tuple(str(lbl) for lbl in self.channel_labels)
        if len(labels) != nc:
            raise ValidationError(f"{len(labels)} channel labels for {nc} channels")
        for lbl in labels:
            if not 1 <= len(lbl) <= _LABEL_BYTES or not lbl.isascii() or lbl != lbl.strip():
                raise ValidationError(f"channel label {lbl!r} must be 1-8 ASCII chars, no outer whitespace")

        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "stim_frequencies_hz", freqs)
        object.__setattr__(self, "stim_phases_rad", phases)
        object.__setattr__(self, "sample_rate_hz", fs)
        object.__setattr__(self, "visual_latency_s", latency)
        object.__setattr__(self, "channel_labels", labels)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def n_trials(self) -> int:
        return self.data.shape[2]

    @property
    def n_frequencies(self) -> int:
        return self.data.shape[3]


@dataclass(frozen=True)
class EvalRow:
    """One benchmark result line: accuracy and ITR for one subject/window."""

    subject_id: str
    window_s: float
    accuracy: float
    itr_bits_per_min: float
    n_correct: int
    n_total: int

    def __post_init__(self):
        if self.n_total <= 0 or not 0 <= self.n_correct <= self.n_total:
            raise ValidationError(f"bad counts {self.n_correct}/{self.n_total}")
        if self.accuracy != self.n_correct / self.n_total:
            raise ValidationError("accuracy must equal n_correct / n_total exactly")
        if self.itr_bits_per_min < 0:
            raise ValidationError("ITR must be non-negative")
        if not self.window_s > 0:
            raise ValidationError("window must be positive")


def write_dataset(dataset: SsvepDataset, path) -> None:
    """Serialize ``dataset`` to the portable format.

    The whole file is assembled in memory and written in one call, so an
    invalid dataset never leaves partial bytes on disk.
    """
    arr = dataset.data
    if not np.isfinite(arr).all():  # re-checked so a mutated buffer cannot reach disk
        raise ValidationError("dataset contains non-finite samples")
    nc, ns, nt, nf = arr.shape
    parts = [
        _HEADER.pack(
            MAGIC,
            FORMAT_VERSION,
            nc,
            ns,
            nt,
            nf,
            round(dataset.sample_rate_hz * 1000),
            round(dataset.visual_latency_s * 1000),
        ),
        np.asarray(dataset.stim_frequencies_hz, dtype="<f4").tobytes(),
        np.asarray(dataset.stim_phases_rad, dtype="<f4").tobytes(),
        b"".join(lbl.encode("ascii").ljust(_LABEL_BYTES) for lbl in dataset.channel_labels),
        # frequency-major linearization: ((f*Nt + t)*Nc + c)*Ns + s
        np.ascontiguousarray(arr.transpose(3, 2, 0, 1)).astype("<f4").tobytes(),
    ]
    Path(path).write_bytes(b"".join(parts))


def read_dataset(path) -> SsvepDataset:
    """Read a portable dataset file; the inverse of :func:`write_dataset`.

    Raises :class:`FormatError` on a bad magic/version, :class:`CorruptionError`
    when the byte count disagrees with the header, and :class:`ValidationError`
    when the decoded content violates dataset invariants.
    """
    blob = Path(path).read_bytes()
    if len(blob) < 5 or blob[:4] != MAGIC:
        raise FormatError(f"{path}: not a portable SSVEP dataset (bad magic)")
    if blob[4] != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {blob[4]}")
    if len(blob) < _HEADER.size:
        raise CorruptionError(f"{path}: truncated header")
    _, _, nc, ns, nt, nf, fs_mhz, latency_ms = _HEADER.unpack_from(blob, 0)

    expected = _HEADER.size + 4 * nf + 4 * nf + _LABEL_BYTES * nc + 4 * nc * ns * nt * nf
    if len(blob) != expected:
        raise CorruptionError(f"{path}: file is {len(blob)} bytes, header implies {expected}")

    off = _HEADER.size
    freqs = np.frombuffer(blob, dtype="<f4", count=nf, offset=off)
    off += 4 * nf
    phases = np.frombuffer(blob, dtype="<f4", count=nf, offset=off)
    off += 4 * nf
    labels = []
    for _ in range(nc):
        raw = blob[off:off + _LABEL_BYTES]
        off += _LABEL_BYTES
        try:
            labels.append(raw.decode("ascii").rstrip(" "))
        except UnicodeDecodeError as exc:
            raise ValidationError(f"{path}: channel label is not ASCII") from exc
    payload = np.frombuffer(blob, dtype="<f4", count=nc * ns * nt * nf, offset=off)
    data = payload.reshape(nf, nt, nc, ns).transpose(2, 3, 1, 0)

    return SsvepDataset(
        data=data,
        stim_frequencies_hz=tuple(float(f) for f in freqs),
        stim_phases_rad=tuple(float(p) for p in phases),
        sample_rate_hz=fs_mhz / 1000.0,
        visual_latency_s=latency_ms / 1000.0,
        channel_labels=tuple(labels),
    )


RESULTS_CSV_HEADER = ("subject", "window_s", "accuracy", "itr_bits_per_min", "n_correct", "n_total")


def write_results_csv(rows, path) -> None:
    """Write benchmark rows as CSV, one line per row, in input order.

    Floats are emitted at full round-trip precision (``str`` of a float is
    the shortest representation that parses back equal).
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no result rows to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_CSV_HEADER)
        for row in rows:
            writer.writerow(
                [row.subject_id, row.window_s, row.accuracy,
                 row.itr_bits_per_min, row.n_correct, row.n_total]
            )
