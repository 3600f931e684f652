"""Convert one UCSD 12-class SSVEP subject archive (MAT) to a portable .ssvp file.

The source files carry a single 4-D EEG array per subject.  Axis roles are
auto-detected by matching the known recording signature -- 8 channels,
15 trials, 12 stimuli, with the remaining axis taken as samples -- and an
ambiguous match aborts rather than guessing.  Samples pass through
unchanged (cast to float32, no rescaling, no filtering, no latency
cropping); all preprocessing belongs to the analysis pipeline.

The archive's target order interleaves the stimulus frequencies, while the
portable format requires them ascending, so the class axis is reordered and
the applied permutation is recorded in the JSON sidecar alongside a source
checksum and the dimension mapping.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from pathlib import Path

import numpy as np
from scipy.io import loadmat


class ConvertError(Exception):
    """Base class for converter failures."""


class SchemaError(ConvertError):
    """Source file does not look like a subject archive of this dataset."""


class ValidationError(ConvertError):
    """Source dimensions or stimulus tables contradict the known recording."""


# recording constants of the 12-class dataset
N_CHANNELS = 8
N_TRIALS = 15
N_STIMULI = 12
SAMPLE_RATE_HZ = 256.0
VISUAL_LATENCY_S = 0.135
CHANNEL_LABELS = ("PO7", "PO3", "POz", "PO4", "PO8", "O1", "Oz", "O2")

# published target table, in the archive's class order
ARCHIVE_FREQS_HZ = (
    9.25, 11.25, 13.25,
    9.75, 11.75, 13.75,
    10.25, 12.25, 14.25,
    10.75, 12.75, 14.75,
)
ARCHIVE_PHASES_RAD = tuple(
    (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)[i // 3] for i in range(12)
)

_SSVP_MAGIC = b"SSVP"
_SSVP_VERSION = 1
_HEADER = struct.Struct("<4sB3x6I")


def _find_eeg_array(source: dict, path) -> np.ndarray:
    candidates = {
        name: value
        for name, value in source.items()
        if not name.startswith("__") and isinstance(value, np.ndarray) and value.ndim == 4
    }
    if not candidates:
        raise SchemaError(f"{path}: no 4-D EEG array found")
    if len(candidates) > 1:
        raise SchemaError(f"{path}: multiple 4-D arrays found: {sorted(candidates)}")
    return next(iter(candidates.values()))


def _detect_axes(shape, path) -> dict:
    """Map axis roles by the (8, ., 15, 12) signature; samples is the leftover axis."""
    roles = {"channels": N_CHANNELS, "trials": N_TRIALS, "stimuli": N_STIMULI}
    mapping = {}
    for role, size in roles.items():
        axes = [i for i, dim in enumerate(shape) if dim == size]
        if not axes:
            raise ValidationError(
                f"{path}: expected an axis of {size} {role}, shape is {shape}"
            )
        if len(axes) > 1:
            raise SchemaError(
                f"{path}: shape {shape} has several axes of {size}; "
                f"cannot tell {role} from samples"
            )
        mapping[role] = axes[0]
    leftover = [i for i in range(4) if i not in mapping.values()]
    if len(leftover) != 1:
        raise SchemaError(f"{path}: ambiguous axis mapping for shape {shape}")
    mapping["samples"] = leftover[0]
    return mapping


def _validate_stimulus_table(source: dict, path) -> None:
    """If the archive carries a frequency table, it must match the known one."""
    for name, value in source.items():
        if name.startswith("__") or not isinstance(value, np.ndarray):
            continue
        flat = value.ravel()
        if flat.size == N_STIMULI and np.issubdtype(flat.dtype, np.floating):
            if sorted(np.round(flat.astype(float), 6)) == sorted(ARCHIVE_FREQS_HZ):
                continue
            raise ValidationError(
                f"{path}: stimulus table {name} disagrees with the known frequencies"
            )


def _write_ssvp(path, data: np.ndarray, freqs, phases) -> None:
    nc, ns, nt, nf = data.shape
    parts = [
        _HEADER.pack(
            _SSVP_MAGIC, _SSVP_VERSION, nc, ns, nt, nf,
            round(SAMPLE_RATE_HZ * 1000), round(VISUAL_LATENCY_S * 1000),
        ),
        np.asarray(freqs, dtype="<f4").tobytes(),
        np.asarray(phases, dtype="<f4").tobytes(),
        b"".join(lbl.encode("ascii").ljust(8) for lbl in CHANNEL_LABELS),
        np.ascontiguousarray(data.transpose(3, 2, 0, 1)).astype("<f4").tobytes(),
    ]
    Path(path).write_bytes(b"".join(parts))


def convert(source_path, output_path) -> dict:
    """Convert one subject MAT file; returns the sidecar summary record.

    Writes ``output_path`` plus ``<output_path>.meta.json``.
    """
    source_path = Path(source_path)
    output_path = Path(output_path)
    blob = source_path.read_bytes()
    try:
        source = loadmat(source_path)
    except Exception as exc:
        raise SchemaError(f"{source_path}: not a readable MAT file ({exc})") from exc

    eeg = _find_eeg_array(source, source_path)
    axes = _detect_axes(eeg.shape, source_path)
    _validate_stimulus_table(source, source_path)

    ordered = np.transpose(
        eeg, (axes["channels"], axes["samples"], axes["trials"], axes["stimuli"])
    ).astype(np.float32)
    if not np.isfinite(ordered).all():
        raise ValidationError(f"{source_path}: EEG array contains non-finite samples")

    # archive class order -> ascending frequency order
    class_order = np.argsort(ARCHIVE_FREQS_HZ, kind="stable")
    ordered = ordered[:, :, :, class_order]
    freqs = [ARCHIVE_FREQS_HZ[i] for i in class_order]
    phases = [ARCHIVE_PHASES_RAD[i] for i in class_order]

    _write_ssvp(output_path, ordered, freqs, phases)

    summary = {
        "subject": source_path.stem,
        "source_sha256": hashlib.sha256(blob).hexdigest(),
        "source_dims": list(eeg.shape),
        "output_dims": list(ordered.shape),
        "axis_roles": axes,
        "class_order": [int(i) for i in class_order],
        "sample_rate_hz": SAMPLE_RATE_HZ,
        "visual_latency_s": VISUAL_LATENCY_S,
    }
    sidecar = output_path.with_name(output_path.name + ".meta.json")
    sidecar.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary
