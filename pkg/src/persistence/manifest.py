"""Run manifests: config echo, experiment outcomes and a hashed file inventory"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .files import PathLike, atomic_write_text, sha256_of_file

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
ARTIFACT_VERSION = "1"


class ExperimentRecord(BaseModel):
    """Outcome of one experiment; failed tolerances are not errors"""
    status: str = Field(..., pattern="^(passed|failed|completed|error)$")
    error: Optional[str] = None
    files: List[str] = Field(default_factory=list)


class RunManifest(BaseModel):
    config: Dict[str, Any]
    artifact_version: str = ARTIFACT_VERSION
    started_at: str
    finished_at: str
    wall_clock_seconds: float
    experiments: Dict[str, ExperimentRecord] = Field(default_factory=dict)
    files: Dict[str, str] = Field(default_factory=dict)

    @property
    def has_errors(self) -> bool:
        return any(r.status == "error" for r in self.experiments.values())


class VerificationReport(BaseModel):
    missing: List[str] = Field(default_factory=list)
    changed: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.changed)


def inventory(out_dir: PathLike) -> Dict[str, str]:
    """sha256 of every file under out_dir except the manifest and temporaries, sorted by path"""
    root = Path(out_dir)
    hashes = {}
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        rel = path.relative_to(root).as_posix()
        if rel == MANIFEST_NAME or path.name.startswith("."):
            continue
        hashes[rel] = sha256_of_file(path)
    return hashes


def write_manifest(out_dir: PathLike, manifest: RunManifest) -> Path:
    """Written last and atomically; a crashed run leaves no manifest"""
    path = atomic_write_text(Path(out_dir) / MANIFEST_NAME, manifest.model_dump_json(indent=2) + "\n")
    logger.info(f"Manifest with {len(manifest.files)} files written to {path}")
    return path


def read_manifest(out_dir: PathLike) -> RunManifest:
    return RunManifest.model_validate_json((Path(out_dir) / MANIFEST_NAME).read_text(encoding="utf-8"))


def verify_manifest(out_dir: PathLike) -> VerificationReport:
    """Re-hash every listed file"""
    root = Path(out_dir)
    manifest = read_manifest(root)
    report = VerificationReport()
    for rel, digest in manifest.files.items():
        path = root / rel
        if not path.is_file():
            report.missing.append(rel)
        elif sha256_of_file(path) != digest:
            report.changed.append(rel)
    if not report.ok:
        logger.warning(f"Manifest check failed: {len(report.missing)} missing, {len(report.changed)} changed")
    return report
