"""
Numerical chordal SLE with coset group factors and Monte Carlo martingale tests.
"""

from .group_walk import (
    GroupAction,
    GroupWalkEstimate,
    complement_action,
    full_action,
    group_factor_step,
    group_walk_oracle,
)
from .harness import (
    coset_onepoint_martingale_mc,
    group_walk_expectation,
    mc_harness,
    power_martingale_mc,
    run_streams,
)
from .io import dump_json, read_trace_csv, write_json, write_trace_csv
from .loewner import (
    advance,
    driving_recovery,
    loewner_step,
    swallow_radius,
    trace_from_driving,
    trace_generate,
)
from .models import Checkpoint, LoewnerState, MartingaleReport, SimConfig, TracePath
from .observables import (
    CosetOnePointObservable,
    GroupWalkObservable,
    MartingaleObservable,
    PowerObservable,
    indicial_exponents,
    indicial_residual,
)
from .rng import stream_generator

__all__ = [
    "Checkpoint",
    "CosetOnePointObservable",
    "GroupAction",
    "GroupWalkEstimate",
    "GroupWalkObservable",
    "LoewnerState",
    "MartingaleObservable",
    "MartingaleReport",
    "PowerObservable",
    "SimConfig",
    "TracePath",
    "advance",
    "complement_action",
    "coset_onepoint_martingale_mc",
    "driving_recovery",
    "dump_json",
    "full_action",
    "group_factor_step",
    "group_walk_expectation",
    "group_walk_oracle",
    "indicial_exponents",
    "indicial_residual",
    "loewner_step",
    "mc_harness",
    "power_martingale_mc",
    "read_trace_csv",
    "run_streams",
    "stream_generator",
    "swallow_radius",
    "trace_from_driving",
    "trace_generate",
    "write_json",
    "write_trace_csv",
]
