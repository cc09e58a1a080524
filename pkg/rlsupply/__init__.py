name = "rlsupply"
__version__ = "0.1.0"

from rlsupply.envs import make
