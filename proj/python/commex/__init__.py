"""Community extraction on networks: tabu search, spectral modularity splits,
block-model simulation and scoring."""

from ._commex import *  # noqa: F401,F403
from ._commex import __doc__  # noqa: F401

__version__ = "0.1.0"
