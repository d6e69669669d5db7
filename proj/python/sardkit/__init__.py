"""Martinet surfaces, characteristic flows and blow-up checks (C++ core)."""

from ._sardkit import *  # noqa: F401,F403
from ._sardkit import __doc__  # noqa: F401
