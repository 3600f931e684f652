"""One-shot converter from the UCSD 12-class SSVEP archive to .ssvp files."""

from .convert import (
    ARCHIVE_FREQS_HZ,
    ARCHIVE_PHASES_RAD,
    CHANNEL_LABELS,
    ConvertError,
    SchemaError,
    ValidationError,
    convert,
)

__version__ = "0.1.0"
