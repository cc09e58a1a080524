''' Register new environments
'''
from rlsupply.envs.env import Env
from rlsupply.envs.registration import register, make

register(
    env_id='supply-chain',
    entry_point='rlsupply.envs.supplychain:SupplyChainEnv',
)
