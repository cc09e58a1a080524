from rlsupply.utils.logger import Logger, TrajectoryWriter, TRAJECTORY_FIELDS
from rlsupply.utils import seeding
from rlsupply.utils.utils import *
