from rlsupply.agents.sac_agent import SACAgent
from rlsupply.agents.prioritized_memory import PrioritizedMemory, SumTree
from rlsupply.agents.random_agent import RandomAgent
