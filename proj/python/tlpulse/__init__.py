"""Reverse-engineered drive synthesis for a dissipative two-level system.

The compiled core exposes the model right-hand sides, the control-profile
solver, pulse synthesis, the fixed-step integrator, and the feasibility
sweeps. All quantities are in atomic units.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
