"""Bond percolation and epidemics on one-dimensional small-world graphs."""

from ._core import *  # noqa: F401,F403
from ._core import InputError, SizeError

__all__ = [name for name in dir() if not name.startswith("_")]
