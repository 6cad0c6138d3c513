"""Option-price dataset cleaning.

Three stages: no-arbitrage bound filtering, per-maturity regression outlier
removal with a simultaneous confidence band, and duplicate resolution.
"""

from ._optclean import *  # noqa: F401,F403
from ._optclean import __version__, synthgen  # noqa: F401
