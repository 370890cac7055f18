"""
Trace CSV and martingale report JSON.
"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import BaseModel

from .models import TracePath

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def write_trace_csv(path: TracePath, target: PathLike) -> Path:
    """Write columns t,re,im, one row per sampled tip."""
    target = Path(target)
    data = np.column_stack([path.t, path.tips.real, path.tips.imag])
    np.savetxt(target, data, delimiter=",", header="t,re,im", comments="", fmt="%.17g")
    logger.info(f"Wrote {len(path.t)} trace points to {target}")
    return target


def read_trace_csv(source: PathLike) -> TracePath:
    """Read a t,re,im CSV; the driving column is left at zero."""
    data = np.loadtxt(Path(source), delimiter=",", skiprows=1, ndmin=2)
    return TracePath(t=data[:, 0], driving=np.zeros(len(data)), tips=data[:, 1] + 1j * data[:, 2])


def dump_json(record: BaseModel) -> str:
    """Sorted, indented JSON of a pydantic record."""
    return json.dumps(record.model_dump(mode="json"), sort_keys=True, indent=2)


def write_json(record: BaseModel, target: PathLike) -> Path:
    """Write a record as JSON."""
    target = Path(target)
    target.write_text(dump_json(record) + "\n")
    logger.info(f"Wrote {target}")
    return target
