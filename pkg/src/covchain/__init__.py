"""Exact backward coverability for vector addition systems and affine nets,
with monitors for control, monotonicity and thinness of the computed chains."""

from .bounds import BoundTable, Control, build_bound_table, is_nearly_thin, is_thin
from .engine import (
    ChainRecord,
    MonitorReport,
    ResourceLimitExceeded,
    Verdict,
    backward_classical,
    backward_dual,
    run_monitors,
)
from .ideals import OMEGA, DownSet, UpSet, ideal
from .models import AffineNet, AffineTransition, Vas, classify

__all__ = [
    "OMEGA",
    "AffineNet",
    "AffineTransition",
    "BoundTable",
    "ChainRecord",
    "Control",
    "DownSet",
    "MonitorReport",
    "ResourceLimitExceeded",
    "UpSet",
    "Vas",
    "Verdict",
    "backward_classical",
    "backward_dual",
    "build_bound_table",
    "classify",
    "ideal",
    "is_nearly_thin",
    "is_thin",
    "run_monitors",
]
