"""Exact enumeration of branched covers with two free profiles, loop equations
and spectral curve of the associated four-matrix chain, and topological recursion."""
from .partitions import Partition, partitions_of, z_factor, class_size, hooks_and_contents
from .characters import character, dimension
from .series import FormalSeries

__all__ = [
    "Partition", "partitions_of", "z_factor", "class_size", "hooks_and_contents",
    "character", "dimension", "FormalSeries",
]
__version__ = "0.1.0"
