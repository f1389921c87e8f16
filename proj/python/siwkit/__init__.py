"""SIW cavity resonator and coupled-cavity filter design toolkit.

All quantities are SI (Hz, m) unless a function name says otherwise.
"""

from ._core import *  # noqa: F401,F403
from ._core import SiwkitError, __doc__  # noqa: F401

__version__ = "0.1.0"
