"""Snapshot codec, report emission and run manifests"""

from .files import atomic_write_bytes, atomic_write_text, sha256_of_file
from .manifest import (
    MANIFEST_NAME,
    ExperimentRecord,
    RunManifest,
    VerificationReport,
    inventory,
    read_manifest,
    verify_manifest,
    write_manifest,
)
from .reports import CSV_SCHEMA, format_csv, format_json, read_csv, write_csv, write_json
from .snapshots import (
    decode_snapshot,
    encode_snapshot,
    read_expansion,
    read_snapshot,
    read_trajectory,
    write_expansion,
    write_snapshot,
    write_trajectory,
)

__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
    "sha256_of_file",
    "MANIFEST_NAME",
    "ExperimentRecord",
    "RunManifest",
    "VerificationReport",
    "inventory",
    "read_manifest",
    "verify_manifest",
    "write_manifest",
    "CSV_SCHEMA",
    "format_csv",
    "format_json",
    "read_csv",
    "write_csv",
    "write_json",
    "decode_snapshot",
    "encode_snapshot",
    "read_expansion",
    "read_snapshot",
    "read_trajectory",
    "write_expansion",
    "write_snapshot",
    "write_trajectory",
]
