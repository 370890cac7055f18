"""
Audit the closed-form rows against the engine.

Discrepancies are reported, never patched: the engine-derived rows are the
reference, and the audit says which transcription (if any) agrees with them.
"""

import logging
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..algebra.coset import SU2_U1, EmbeddingSpec, coset_central_charge, enumerate_fields, zero_mode_state
from ..errors import UnsupportedModelError
from .candidates import build_null_candidate
from .constraints import CONVENTIONS, TRANSCRIPTIONS, closed_form_constraints, derive_constraints
from .models import ConstraintRow, exact_str

logger = logging.getLogger(__name__)

AUDITED_TAGS = ("L2", "L1^2", "Jt1_1 L1")


class AuditEntry(BaseModel):
    """Engine row against each transcription for one (field, tag)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    field: str
    tag: str
    engine: Optional[ConstraintRow] = Field(default=None, description="None when the row vanishes")
    transcriptions: Dict[str, Optional[ConstraintRow]] = Field(default_factory=dict)
    matches: Dict[str, bool] = Field(default_factory=dict, description="Agreement up to rescaling")


class AuditReport(BaseModel):
    """Result of audit_model."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: str
    level: int
    central_charge: str
    entries: List[AuditEntry] = Field(default_factory=list)
    consistent_conventions: List[str] = Field(
        default_factory=list, description="Central-term conventions agreeing with the engine on every field"
    )
    tag_agreement: Dict[str, Dict[str, bool]] = Field(default_factory=dict)

    @property
    def mismatches(self) -> List[AuditEntry]:
        """Entries where neither the literal nor the sign-corrected row agrees with the engine."""
        return [e for e in self.entries if not any(e.matches.get(conv, False) for conv in CONVENTIONS)]


def _agree(engine: Optional[ConstraintRow], other: Optional[ConstraintRow]) -> bool:
    if engine is None or other is None:
        return engine is None and other is None
    return engine.proportional_to(other)


def audit_model(embedding: EmbeddingSpec, k: int) -> AuditReport:
    """
    Compare engine-derived subset rows with every closed-form transcription on every realizable field.

    The L2 row decides the central-term sign among the literal and
    sign-corrected conventions; L1^2 and Jt1_1 L1 agreement is reported per
    transcription. The normalized transcription restates the rows in the
    engine normalization (parent-form u(1) Casimir, h^v in the Jt1_1 L1 row),
    so it is expected to agree on every tag.

    Models without closed-form rows (the trivial coset) give an empty report.
    """
    entries: List[AuditEntry] = []
    if embedding.family != SU2_U1:
        logger.info(f"{embedding.family} has no closed-form rows; nothing to audit")
        return AuditReport(
            model=embedding.family or "",
            level=k,
            central_charge=exact_str(coset_central_charge(embedding, k)),
        )
    for orbit in enumerate_fields(embedding, k):
        for field in orbit.members:
            try:
                zero_mode_state(field, embedding)
            except UnsupportedModelError:
                logger.debug(f"Audit skips {field}: no grade-zero realization")
                continue
            engine = derive_constraints(
                build_null_candidate(field, embedding), groups=("subset",), dedupe=False
            )
            closed = {
                conv: closed_form_constraints(field, embedding, conv, dedupe=False) for conv in TRANSCRIPTIONS
            }
            for tag in AUDITED_TAGS:
                engine_row = engine.row(tag)
                rows = {conv: system.row(tag) for conv, system in closed.items()}
                matches = {conv: _agree(engine_row, row) for conv, row in rows.items()}
                if not any(matches[conv] for conv in CONVENTIONS):
                    logger.warning(f"{field} {tag}: neither closed-form convention matches the engine row")
                entries.append(
                    AuditEntry(field=str(field), tag=tag, engine=engine_row, transcriptions=rows, matches=matches)
                )

    agreement = {
        tag: {conv: all(e.matches[conv] for e in entries if e.tag == tag) for conv in TRANSCRIPTIONS}
        for tag in AUDITED_TAGS
    }
    consistent = [conv for conv in CONVENTIONS if agreement["L2"][conv]]
    logger.info(f"{embedding.family} k={k}: consistent central-term conventions {consistent}")
    return AuditReport(
        model=embedding.family or "",
        level=k,
        central_charge=exact_str(coset_central_charge(embedding, k)),
        entries=entries,
        consistent_conventions=consistent,
        tag_agreement=agreement,
    )
