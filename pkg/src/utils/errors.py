"""Exception hierarchy for randwave"""

from typing import List, Optional


class RandwaveError(Exception):
    """Base class for all randwave errors"""


class GridError(RandwaveError, ValueError):
    """Invalid grid parameters (M not a power of two, R < 1, bad dealias fraction)"""


class GridMismatchError(RandwaveError, ValueError):
    """Fields or trajectories that must share a grid or time grid do not"""


class TruncationError(RandwaveError, ValueError):
    """A transform would move spectral support off the representable lattice"""


class InvalidQuadrupleError(RandwaveError, ValueError):
    """Frequencies violate the convolution constraint xi = xi1 - xi2 + xi3"""


class HorizonError(RandwaveError, ValueError):
    """A time horizon exceeds the trajectory's time grid"""


class BlowUpError(RandwaveError, RuntimeError):
    """The reference solver detected runaway norm growth"""

    def __init__(self, message: str, step: int, growth: float):
        super().__init__(message)
        self.step = step
        self.growth = growth


class ExpansionError(RandwaveError, ValueError):
    """Invalid expansion request (depth cap, unsupported variant)"""


class FitError(RandwaveError, ValueError):
    """Not enough usable data to fit a rate"""


class CounterexampleError(RandwaveError, ValueError):
    """Counterexample geometry or phase-smallness check failed"""


class ConfigError(RandwaveError, ValueError):
    """Run configuration text is invalid"""

    def __init__(self, message: str, lines: Optional[List[int]] = None):
        self.lines = lines or []
        if self.lines:
            where = ", ".join(str(n) for n in self.lines)
            message = f"line {where}: {message}"
        super().__init__(message)


class SnapshotFormatError(RandwaveError, ValueError):
    """A snapshot file is truncated, has a foreign header or an unsupported version"""
