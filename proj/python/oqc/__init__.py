"""Overhead quality contour for inter-cell signaling in K-tier networks."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
