"""Quantum walks with position-dependent coins: simulation, generating
functions, CMV spectral theory and limit laws."""
from .errors import *  # noqa: F401,F403
from .coins import *  # noqa: F401,F403
from .walk import *  # noqa: F401,F403
from .series import *  # noqa: F401,F403
from .genfun import *  # noqa: F401,F403
from .cmv import *  # noqa: F401,F403
from .spectral import *  # noqa: F401,F403
from .limits import *  # noqa: F401,F403
from .experiments import *  # noqa: F401,F403

__version__ = "0.1.0"
