"""Engine, strategies and verification harness for the biased
oriented-cycle orientation game."""

from .board import Arc, ForfeitError, LoopError, OrientationBoard, Signal
from .engine import GameConfig, SolveResult, Transcript, play, referee_check, solve_exact

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ForfeitError",
    "GameConfig",
    "LoopError",
    "OrientationBoard",
    "Signal",
    "SolveResult",
    "Transcript",
    "play",
    "referee_check",
    "solve_exact",
    "__version__",
]
