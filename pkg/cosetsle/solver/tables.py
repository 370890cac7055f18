"""
JSON and aligned-text renderings of solver results.
"""

import json
from typing import Any, List, Optional, Sequence

from .audit import AuditReport
from .classify import ClassificationReport
from .models import AdmissibilityResult, ConstraintSystem, exact_str


def to_json(report: Any) -> str:
    """Canonical JSON (sorted keys, exact rationals as strings)."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2)


def format_result(result: Optional[AdmissibilityResult]) -> str:
    """Short status, with the solution when there is one."""
    if result is None:
        return "-"
    if result.status == "unique":
        kappa, tau = result.point()  # type: ignore[misc]
        return f"unique kappa={exact_str(kappa)} tau={exact_str(tau)}"
    if result.status == "one-parameter family":
        pinned = "tau" if result.free_variable == "kappa" else "kappa"
        return f"family {pinned}={exact_str(result.solution[pinned])}"
    return result.status


def aligned(headers: Sequence[str], rows: List[Sequence[str]]) -> str:
    """Left-aligned columns separated by two spaces."""
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)
    return "\n".join(lines)


def classification_table(report: ClassificationReport) -> str:
    """One line per orbit member."""
    rows: List[Sequence[str]] = []
    for orbit in report.orbits:
        for member in orbit.members:
            rows.append(
                (
                    orbit.canonical,
                    member.label,
                    member.h,
                    format_result(member.literal),
                    format_result(member.sign_corrected),
                    format_result(member.engine),
                    format_result(member.closure),
                )
            )
    header = (
        f"{report.model} k={report.level} c={report.central_charge} "
        f"(mode={report.mode}, normalization={report.normalization})"
    )
    table = aligned(("class", "member", "h", "literal", "sign-corrected", "engine", "closure"), rows)
    return f"{header}\n{table}"


def system_table(system: ConstraintSystem) -> str:
    """Rows of a constraint system with their provenance."""
    rows = [(row.group, row.key, row.render()) for row in system.rows]
    body = aligned(("group", "row", "equation"), rows)
    if system.trivial:
        body += f"\nvanishing identically: {', '.join(system.trivial)}"
    return body


def audit_table(report: AuditReport) -> str:
    """Per-field agreement of each closed form with the engine."""
    rows = [
        (
            e.field,
            e.tag,
            e.engine.render() if e.engine else "0 = 0",
            "yes" if e.matches.get("literal") else "no",
            "yes" if e.matches.get("sign-corrected") else "no",
            "yes" if e.matches.get("normalized") else "no",
        )
        for e in report.entries
    ]
    table = aligned(("field", "row", "engine", "literal", "sign-corrected", "normalized"), rows)
    consistent = ", ".join(report.consistent_conventions) or "none"
    return (
        f"{report.model} k={report.level} c={report.central_charge}\n{table}\n"
        f"consistent central-term conventions: {consistent}"
    )
