"""Central-symmetry analysis of continuous-time Markov chains.

Thin wrapper around the compiled extension; everything lives in
``symchain._symchain``.
"""

from ._symchain import *  # noqa: F401,F403
from ._symchain import __version__  # noqa: F401
