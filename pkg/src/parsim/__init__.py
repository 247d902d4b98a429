"""parsim: a deterministic agent-based simulation engine with live
inspection, multiple points of view, and time travel."""

from . import models  # noqa: F401  (registers the reference models)
from .kernel import init_simulation, run, step

__version__ = "0.1.0"
__all__ = ["init_simulation", "step", "run", "__version__"]
