"""Single-photon pulses scattering off waveguide-coupled emitters, and the
heralded atom-photon entangling gates built on that interaction.

The compiled core carries the numerics; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
