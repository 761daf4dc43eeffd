"""Interference nulling with a reconfigurable reflector rim.

Modules: ``geometry`` (dish and rim layout), ``fields`` (physical-optics
fields and the nulling system), ``solvers`` (weight solvers), ``analysis``
(correlation and feasibility theory), ``evaluation`` (patterns and reports)
and ``cli``.
"""

import os as _os

__version__ = "0.1.0"

# thread-count override for BLAS/OpenMP pools; only effective before NumPy
# is first imported
if _os.environ.get("RISNULL_NUM_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ[_var] = _os.environ["RISNULL_NUM_THREADS"]

from .geometry import DishGeometry, RimLayout, build_rim_layout, ConfigurationError
from .fields import FarFieldTarget, FieldScale, NullingSystem, assemble_system
from .solvers import (
    WeightSolution,
    PenaltySchedule,
    SingularSystemError,
    solve_pseudoinverse,
    solve_gp,
    solve_ap,
    pair_merge_closed_form,
    solve_expp,
    solve_sa_baseline,
)
from .kernels import BACKEND

__all__ = [
    "DishGeometry", "RimLayout", "build_rim_layout", "ConfigurationError",
    "FarFieldTarget", "FieldScale", "NullingSystem", "assemble_system",
    "WeightSolution", "PenaltySchedule", "SingularSystemError",
    "solve_pseudoinverse", "solve_gp", "solve_ap", "pair_merge_closed_form",
    "solve_expp", "solve_sa_baseline", "BACKEND",
]
