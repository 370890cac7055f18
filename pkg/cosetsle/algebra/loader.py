"""
Algebra document loading.

Documents are YAML with keys name, dim, rank, f, form, h_dual and an
optional weyl_quadratic. Structure constants are listed 1-based as
[a, b, c, "p/q"]. Rationals must be ints or "p/q" strings.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError

from ..errors import AlgebraParseError
from .specs import BUILTIN_NAMES, AlgebraSpec, builtin_algebra, to_rational
from .validation import require_valid

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("name", "dim", "f", "form", "h_dual")


def _key_lines(source: str) -> Dict[str, int]:
    """Map top-level keys to 1-based source lines."""
    try:
        root = yaml.compose(source)
    except yaml.YAMLError:
        return {}
    lines: Dict[str, int] = {}
    if isinstance(root, yaml.MappingNode):
        for key_node, _ in root.value:
            lines[str(key_node.value)] = key_node.start_mark.line + 1
    return lines


def _item_lines(source: str, key: str) -> Dict[int, int]:
    """Map item positions of a top-level sequence to 1-based source lines."""
    root = yaml.compose(source)
    if isinstance(root, yaml.MappingNode):
        for key_node, value_node in root.value:
            if key_node.value == key and isinstance(value_node, yaml.SequenceNode):
                return {i: item.start_mark.line + 1 for i, item in enumerate(value_node.value)}
    return {}


def parse_algebra_document(source: str) -> AlgebraSpec:
    """
    Parse and validate an algebra document.

    Args:
        source: YAML text

    Returns:
        Validated AlgebraSpec

    Raises:
        AlgebraParseError: On malformed YAML or fields (including an abelian
            algebra with nonzero h_dual), with field and line
        StructureError: If an algebra identity fails
    """
    try:
        data = yaml.safe_load(source)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise AlgebraParseError(f"Invalid YAML: {e}", line=mark.line + 1 if mark else None)

    if not isinstance(data, dict):
        raise AlgebraParseError("Document must be a mapping")

    lines = _key_lines(source)
    for key in REQUIRED_KEYS:
        if key not in data:
            raise AlgebraParseError("Missing required key", field=key)

    dim = data["dim"]
    if not isinstance(dim, int) or dim <= 0:
        raise AlgebraParseError("dim must be a positive integer", field="dim", line=lines.get("dim"))
    rank = data.get("rank", 0)

    f_lines = _item_lines(source, "f")
    structure: Dict[tuple, Any] = {}
    for pos, entry in enumerate(data["f"] or []):
        line = f_lines.get(pos, lines.get("f"))
        if not isinstance(entry, (list, tuple)) or len(entry) != 4:
            raise AlgebraParseError("f entries must be [a, b, c, value]", field="f", line=line)
        a, b, c, value = entry
        if not all(isinstance(i, int) and 1 <= i <= dim for i in (a, b, c)):
            raise AlgebraParseError(f"f index out of range 1..{dim}", field="f", line=line)
        try:
            structure[(a - 1, b - 1, c - 1)] = to_rational(value)
        except ValueError as e:
            raise AlgebraParseError(str(e), field="f", line=line) from e

    payload: Dict[str, Any] = {
        "name": data["name"],
        "dim": dim,
        "rank": rank,
        "structure_constants": structure,
        "form": data["form"],
        "dual_coxeter": data["h_dual"],
        "weyl_quadratic": data.get("weyl_quadratic") or [[1]],
    }
    try:
        spec = AlgebraSpec(**payload)
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else None
        doc_field = {"dual_coxeter": "h_dual", "structure_constants": "f"}.get(field or "", field)
        raise AlgebraParseError(first["msg"], field=doc_field, line=lines.get(doc_field or ""))

    if spec.is_abelian and spec.dual_coxeter != 0:
        raise AlgebraParseError("abelian algebra must have h_dual = 0", field="h_dual", line=lines.get("h_dual"))

    require_valid(spec)
    logger.info(f"Loaded algebra {spec.name} (dim {spec.dim}, rank {spec.rank})")
    return spec


def load_algebra_spec(source: Union[str, Path], text: Optional[bool] = None) -> AlgebraSpec:
    """
    Load an algebra from a built-in name, a file path or document text.

    Args:
        source: Built-in name ("su2", "su3", "u1"), path to a YAML file, or YAML text
        text: Force interpretation of a str as document text

    Returns:
        Validated AlgebraSpec
    """
    if isinstance(source, str) and not text and source in BUILTIN_NAMES:
        return builtin_algebra(source)
    if isinstance(source, Path):
        return parse_algebra_document(source.read_text())
    if not text and "\n" not in source and Path(source).is_file():
        return parse_algebra_document(Path(source).read_text())
    return parse_algebra_document(str(source))
