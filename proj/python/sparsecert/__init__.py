"""Certified error bounds for sparse solutions of underdetermined systems."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
