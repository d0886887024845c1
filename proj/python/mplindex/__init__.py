"""Multi-period / multilateral price index estimation."""

from ._mplindex import *  # noqa: F401,F403
from ._mplindex import __version__  # noqa: F401
