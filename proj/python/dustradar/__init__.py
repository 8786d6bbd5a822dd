"""Python bindings for the dustradar 4D radar perception library."""

from ._dustradar import *  # noqa: F401,F403
from ._dustradar import __version__  # noqa: F401
