"""
Run manifests: what produced an artifact, with content digests.

Every artifact gets `<artifact>.manifest.json` recording the tool version,
the command, the seed, the canonical resolved configuration, sha256
digests of the inputs and of the artifact itself, and a UTC timestamp.
"""

import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from . import __version__

logger = logging.getLogger(__name__)

SUPPORTED_ALGORITHMS = ("sha256", "sha384", "sha512")
HashAlgorithm = Literal["sha256", "sha384", "sha512"]
MANIFEST_SUFFIX = ".manifest.json"


def canonical_json(payload: Any) -> str:
    """Sorted keys, no whitespace, ASCII only."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def compute_digest(payload: Any, algorithm: HashAlgorithm = "sha256") -> str:
    """
    Hash of the canonical JSON of a payload.

    Args:
        payload: JSON-serializable value
        algorithm: Hash algorithm to use (sha256, sha384, sha512)

    Returns:
        Hex-encoded digest
    """
    if algorithm not in SUPPORTED_ALGORITHMS:
        raise ValueError(f"Unsupported algorithm: {algorithm}")
    hasher = hashlib.new(algorithm)
    hasher.update(canonical_json(payload).encode("utf-8"))
    return hasher.hexdigest()


def file_digest(path: Union[str, Path], algorithm: HashAlgorithm = "sha256") -> str:
    """Hash of a file's bytes."""
    hasher = hashlib.new(algorithm)
    hasher.update(Path(path).read_bytes())
    return hasher.hexdigest()


class RunManifest(BaseModel):
    """Provenance record written next to an artifact."""

    model_config = ConfigDict(frozen=True)

    tool_version: str = Field(default=__version__, description="cosetsle version")
    command: str = Field(..., description="CLI command that produced the artifact")
    seed: Optional[int] = Field(default=None, description="Simulation seed, when one was used")
    config: Dict[str, Any] = Field(default_factory=dict, description="Resolved configuration")
    config_digest: str = Field(..., description="sha256 of the canonical configuration")
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input path -> sha256")
    artifact: str = Field(..., description="Artifact file name")
    artifact_digest: str = Field(..., description="sha256 of the artifact bytes")
    alg: HashAlgorithm = "sha256"
    created_at: datetime = Field(
        default_factory=lambda: datetime.now(timezone.utc),
        description="UTC time the manifest was built; not part of any digest",
    )

    @field_validator("config_digest", "artifact_digest")
    @classmethod
    def validate_hex(cls, v: str) -> str:
        """Digests are lowercase hexadecimal."""
        v = v.lower()
        if not all(c in "0123456789abcdef" for c in v):
            raise ValueError("Digest must be hexadecimal")
        return v


def manifest_path(artifact: Union[str, Path]) -> Path:
    """`<artifact>.manifest.json`."""
    artifact = Path(artifact)
    return artifact.with_name(artifact.name + MANIFEST_SUFFIX)


def build_manifest(
    command: str,
    artifact: Union[str, Path],
    config: Dict[str, Any],
    inputs: Sequence[Union[str, Path]] = (),
    seed: Optional[int] = None,
) -> RunManifest:
    """Digest the configuration, the inputs and an already written artifact."""
    artifact = Path(artifact)
    return RunManifest(
        command=command,
        seed=seed,
        config=config,
        config_digest=compute_digest(config),
        inputs={str(p): file_digest(p) for p in inputs},
        artifact=artifact.name,
        artifact_digest=file_digest(artifact),
        created_at=datetime.now(timezone.utc),
    )


def write_manifest(manifest: RunManifest, artifact: Union[str, Path]) -> Path:
    """Write the manifest next to its artifact."""
    target = manifest_path(artifact)
    target.write_text(json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n")
    logger.debug(f"Wrote manifest {target}")
    return target


def verify_manifest(manifest: RunManifest, artifact: Union[str, Path]) -> bool:
    """True when the artifact bytes still match the recorded digest."""
    return file_digest(artifact, manifest.alg) == manifest.artifact_digest
