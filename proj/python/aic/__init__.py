"""Interaction control for a fully actuated aerial vehicle.

Thin package wrapper around the native module; see the class and function
docstrings there for the API.
"""

from ._aic import *  # noqa: F401,F403
from ._aic import __version__  # noqa: F401
