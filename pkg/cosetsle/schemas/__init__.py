"""
JSON schemas for the documents cosetsle writes.

One schema per artifact kind: the classify, solve and audit reports, the
Monte Carlo martingale report and the run manifest. They ship as package
data and describe the `model_dump(mode="json")` shape of the records.
"""

import json
import logging
from functools import lru_cache
from importlib import resources
from typing import Any, Dict

from jsonschema import Draft202012Validator, FormatChecker
from jsonschema.exceptions import best_match

from ..errors import SchemaValidationError

logger = logging.getLogger(__name__)

SCHEMA_NAMES = ("classification", "solve", "audit", "martingale_report", "run_manifest")


@lru_cache(maxsize=None)
def _schema_text(name: str) -> str:
    if name not in SCHEMA_NAMES:
        raise ValueError(f"unknown schema {name!r}; expected one of {', '.join(SCHEMA_NAMES)}")
    return resources.files(__name__).joinpath(f"{name}.schema.json").read_text(encoding="utf-8")


def load_schema(name: str) -> Dict[str, Any]:
    """Parsed schema document; a fresh copy on every call."""
    return json.loads(_schema_text(name))


def validate_payload(name: str, payload: Any) -> None:
    """
    Check a decoded JSON document against a shipped schema.

    Raises:
        SchemaValidationError: on the most relevant violation
    """
    validator = Draft202012Validator(load_schema(name), format_checker=FormatChecker())
    error = best_match(validator.iter_errors(payload))
    if error is not None:
        logger.debug("%s schema rejected a document: %s", name, error.message)
        raise SchemaValidationError(name, error.absolute_path, error.message)


__all__ = ["SCHEMA_NAMES", "load_schema", "validate_payload"]
