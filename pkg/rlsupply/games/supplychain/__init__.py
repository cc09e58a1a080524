from rlsupply.games.supplychain.supply_chain_error import SupplyChainError
from rlsupply.games.supplychain.params import EnvParams
from rlsupply.games.supplychain.node import SupplyChainNode as Node
from rlsupply.games.supplychain.demand import DemandModel
from rlsupply.games.supplychain.communication import CommKind, CommScenario
from rlsupply.games.supplychain.judger import SupplyChainJudger as Judger, RewardScheme
from rlsupply.games.supplychain.game import SupplyChainGame as Game, ActionPair, StepRecord, EnvState
