"""
RWV1 binary snapshots of spectral fields.

Layout: 16-byte header {magic b"RWV1", version u32, M u32, R u32}, all
little-endian, followed by M^3 complex values as little-endian float64
(real, imag) pairs in row-major DFT order with axes (x, y, z).

Trajectories are stored as one snapshot per time node under
``order_<n>/snap_<mmmm>.rwv``; an expansion directory adds expansion.json.
"""

import json
import logging
import re
import struct
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .files import PathLike, atomic_write_bytes, atomic_write_text
from ..expansion.towers import ExpansionSet
from ..spectral.grid import FieldTrajectory, GridSpec, SpectralField, TimeGrid
from ..utils.errors import SnapshotFormatError

logger = logging.getLogger(__name__)

MAGIC = b"RWV1"
VERSION = 1
HEADER = struct.Struct("<4sIII")
WIRE_DTYPE = np.dtype("<c16")
EXPANSION_MANIFEST = "expansion.json"

_SNAPSHOT_NAME = re.compile(r"^snap_(\d{4,})\.rwv$")


def encode_snapshot(f: SpectralField) -> bytes:
    header = HEADER.pack(MAGIC, VERSION, f.grid.M, f.grid.R)
    return header + np.ascontiguousarray(f.coefficients, dtype=WIRE_DTYPE).tobytes()


def decode_snapshot(payload: bytes, dealias_fraction: float = 2.0 / 3.0) -> SpectralField:
    """
    Parse an RWV1 snapshot

    Raises:
        SnapshotFormatError: on a short buffer, a foreign magic, an unknown
            version or a payload length that does not match M
    """
    if len(payload) < HEADER.size:
        raise SnapshotFormatError(f"snapshot of {len(payload)} bytes is shorter than its header")
    magic, version, M, R = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    expected = HEADER.size + M ** 3 * WIRE_DTYPE.itemsize
    if len(payload) != expected:
        raise SnapshotFormatError(f"snapshot holds {len(payload)} bytes, header implies {expected}")
    grid = GridSpec(int(M), int(R), dealias_fraction)
    values = np.frombuffer(payload, dtype=WIRE_DTYPE, offset=HEADER.size).reshape(grid.shape)
    return SpectralField(grid, values.astype(np.complex128))


def write_snapshot(path: PathLike, f: SpectralField) -> Path:
    return atomic_write_bytes(path, encode_snapshot(f))


def read_snapshot(path: PathLike, dealias_fraction: float = 2.0 / 3.0) -> SpectralField:
    return decode_snapshot(Path(path).read_bytes(), dealias_fraction)


def order_directory(root: PathLike, order: int) -> Path:
    return Path(root) / f"order_{order}"


def write_trajectory(root: PathLike, order: int, traj: FieldTrajectory) -> List[Path]:
    """One snapshot per node under root/order_<n>/"""
    directory = order_directory(root, order)
    return [
        write_snapshot(directory / f"snap_{m:04d}.rwv", traj.snapshot(m))
        for m in range(len(traj))
    ]


def read_trajectory(root: PathLike, order: int, time_grid: TimeGrid, dealias_fraction: float = 2.0 / 3.0) -> FieldTrajectory:
    """
    Load order_<n>/ back onto ``time_grid``

    Raises:
        SnapshotFormatError: if the snapshot count differs from the node count
    """
    directory = order_directory(root, order)
    files = sorted(p for p in directory.iterdir() if _SNAPSHOT_NAME.match(p.name))
    if len(files) != time_grid.nodes:
        raise SnapshotFormatError(f"{directory} holds {len(files)} snapshots for {time_grid.nodes} nodes")
    return FieldTrajectory.from_snapshots([read_snapshot(p, dealias_fraction) for p in files], time_grid)


def write_expansion(root: PathLike, expansion: ExpansionSet, extra: Optional[Dict] = None) -> List[Path]:
    """Every term of the set plus expansion.json naming orders, seeds and quadrature"""
    written: List[Path] = []
    for order, traj in expansion.as_dict().items():
        written.extend(write_trajectory(root, order, traj))
    manifest = dict(expansion.to_manifest())
    manifest.update(extra or {})
    written.append(atomic_write_text(Path(root) / EXPANSION_MANIFEST, json.dumps(manifest, sort_keys=True, indent=2) + "\n"))
    logger.info(f"Wrote {len(expansion.orders)} expansion orders to {root}")
    return written


def read_expansion(root: PathLike) -> ExpansionSet:
    meta = json.loads((Path(root) / EXPANSION_MANIFEST).read_text(encoding="utf-8"))
    time_grid = TimeGrid(float(meta["time_grid"]["T"]), int(meta["time_grid"]["M_t"]))
    dealias = float(meta["grid"].get("dealias_fraction", 2.0 / 3.0))
    terms = [read_trajectory(root, order, time_grid, dealias) for order in meta["orders"]]
    metadata = {k: v for k, v in meta.items() if k not in ("variant", "orders", "grid", "time_grid")}
    return ExpansionSet(meta["variant"], terms, metadata)
