"""Exact numerical laboratory for Bose-Hubbard quench thermalization.

The heavy lifting lives in the compiled extension ``quenchlab._core``; this
package re-exports its public surface.
"""

from quenchlab._core import *  # noqa: F401,F403
from quenchlab._core import __version__  # noqa: F401
