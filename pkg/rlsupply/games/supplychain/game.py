'''
    File name: supplychain/game.py

    The two-echelon supply chain. One step is one simulated day in which,
    in order:
        1. the factory receives its order in full from the supplier
        2. the factory ships min(retailer order, factory stock) to the retailer
        3. the customer demand arrives and the retailer sells what it can
        4. unmet demand is lost (inventories never go below zero)
        5. backlogs are recomputed as stock above capacity
        6. stockout events are counted
        7. the day advances and termination is checked
'''

from dataclasses import dataclass, replace, fields
from enum import Enum

import numpy as np

from rlsupply.games.supplychain.communication import (
    CommKind,
    communicate,
    build_retailer_observation,
    build_factory_observation,
)
from rlsupply.games.supplychain.demand import CONSTANT_DEMAND_LEVEL, DemandModel
from rlsupply.games.supplychain.judger import SupplyChainJudger, RewardScheme
from rlsupply.games.supplychain.node import SupplyChainNode
from rlsupply.games.supplychain.params import DEFAULT_PARAMS
from rlsupply.games.supplychain.supply_chain_error import ActionError, ProtocolError
from rlsupply.utils.seeding import np_random, derive_seed

RETAILER = 0
FACTORY = 1


class TerminationCause(str, Enum):
    NONE = 'none'
    DAYS_EXHAUSTED = 'days_exhausted'
    RETAILER_STOCKOUTS = 'retailer_stockouts'
    FACTORY_STOCKOUTS = 'factory_stockouts'


@dataclass(frozen=True)
class ActionPair:
    ''' The joint action of one day. comm_kind is the fixed kind the factory
    uses today (already resolved from its action head in the Mixed scenario).
    '''
    retailer_order: int
    factory_order: int
    comm_kind: CommKind = CommKind.NO_COMMS


@dataclass
class EnvState:
    retailer: SupplyChainNode
    factory: SupplyChainNode
    day: int = 0
    last_retailer_order: int = 0
    last_customer_demand: int = 0
    communicated_inventory: int = 0
    terminated: bool = False
    termination_cause: TerminationCause = TerminationCause.NONE

    def copy(self):
        return replace(self, retailer=self.retailer.copy(), factory=self.factory.copy())


@dataclass(frozen=True)
class StepRecord:
    ''' Everything that happened on one simulated day
    '''
    day: int
    retailer_order: int
    factory_order: int
    omega_scenario_chosen: str
    communicated_inventory: int
    customer_demand: int
    shipped_to_retailer: int
    retailer_stockout_qty: int
    factory_stockout_qty: int
    retailer_backlog_qty: int
    factory_backlog_qty: int
    retailer_inventory: int
    factory_inventory: int
    reward_retailer_base: float
    reward_factory_base: float
    reward_retailer_shaped: float
    reward_factory_shaped: float
    reward_retailer_adjusted: float
    reward_factory_adjusted: float
    terminated: bool
    termination_cause: str

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def reset(params=DEFAULT_PARAMS):
    ''' The state at the start of an episode

    Args:
        params (EnvParams): validated on entry

    Returns:
        (EnvState): both inventories at the initial level, everything else zero
    '''
    params.validate()
    retailer = SupplyChainNode(inventory=params.initial_inventory)
    factory = SupplyChainNode(inventory=params.initial_inventory)
    retailer.backlog = max(retailer.inventory - params.capacity_retailer, 0)
    factory.backlog = max(factory.inventory - params.capacity_factory, 0)
    return EnvState(retailer=retailer, factory=factory)


def _check_order(name, order, params):
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise ActionError('{}: orders are integers, got {!r}'.format(name, order))
    if not 0 <= order <= params.order_max:
        raise ActionError('{}: {} outside [0, {}]'.format(name, order, params.order_max))
    return int(order)


def step(state, actions, demand, params=DEFAULT_PARAMS, judger=None, comm_rng=None):
    ''' Advance one day

    Args:
        state (EnvState): the state before the day; it is not modified
        actions (ActionPair): both agents' orders and the factory's comm kind
        demand (int): customer demand of the day
        params (EnvParams): environment constants
        judger (SupplyChainJudger): reward computation, baseline scheme by default
        comm_rng (numpy.random.RandomState): stream for the lying factor

    Returns:
        (tuple): Tuple containing:

            (EnvState): the state after the day
            (StepRecord): what happened during the day
    '''
    if state.terminated:
        raise ProtocolError('step called on a terminated episode ({})'.format(state.termination_cause.value))
    q1 = _check_order('retailer_order', actions.retailer_order, params)
    q2 = _check_order('factory_order', actions.factory_order, params)
    demand = int(demand)
    if demand < 0:
        raise ProtocolError('demand must be nonnegative, got {}'.format(demand))
    if judger is None:
        judger = SupplyChainJudger(params, RewardScheme())

    nxt = state.copy()
    retailer, factory = nxt.retailer, nxt.factory

    factory_available = factory.inventory + q2
    shipped = min(q1, factory_available)
    factory_stockout = q1 - shipped
    factory.inventory = factory_available - shipped

    retailer_available = retailer.inventory + shipped
    sold = min(demand, retailer_available)
    retailer_stockout = demand - sold
    retailer.inventory = retailer_available - sold

    retailer.backlog = max(retailer.inventory - params.capacity_retailer, 0)
    factory.backlog = max(factory.inventory - params.capacity_factory, 0)

    retailer.stockout_level = retailer_stockout
    factory.stockout_level = factory_stockout
    if retailer_stockout > 0:
        retailer.stockout_event_count += 1
    if factory_stockout > 0:
        factory.stockout_event_count += 1

    retailer.last_demand = demand
    factory.last_demand = q1

    rewards = judger.judge_day({
        'prev_demand': state.last_customer_demand,
        'prev_retailer_order': state.last_retailer_order,
        'retailer_inventory': retailer.inventory,
        'factory_inventory': factory.inventory,
        'retailer_available': retailer_available,
        'factory_available': factory_available,
        'retailer_order': q1,
        'factory_order': q2,
        'demand': demand,
    })

    kind = CommKind(actions.comm_kind)
    nxt.communicated_inventory = communicate(kind, factory.inventory, params.capacity_factory, comm_rng)
    nxt.last_customer_demand = demand
    nxt.last_retailer_order = q1
    nxt.day = state.day + 1

    if retailer.stockout_event_count > params.max_stockout_events:
        nxt.termination_cause = TerminationCause.RETAILER_STOCKOUTS
    elif factory.stockout_event_count > params.max_stockout_events:
        nxt.termination_cause = TerminationCause.FACTORY_STOCKOUTS
    elif nxt.day >= params.episode_length:
        nxt.termination_cause = TerminationCause.DAYS_EXHAUSTED
    nxt.terminated = nxt.termination_cause != TerminationCause.NONE

    record = StepRecord(
        day=state.day,
        retailer_order=q1,
        factory_order=q2,
        omega_scenario_chosen=kind.value,
        communicated_inventory=nxt.communicated_inventory,
        customer_demand=demand,
        shipped_to_retailer=shipped,
        retailer_stockout_qty=retailer_stockout,
        factory_stockout_qty=factory_stockout,
        retailer_backlog_qty=retailer.backlog,
        factory_backlog_qty=factory.backlog,
        retailer_inventory=retailer.inventory,
        factory_inventory=factory.inventory,
        reward_retailer_base=float(rewards['retailer_base']),
        reward_factory_base=float(rewards['factory_base']),
        reward_retailer_shaped=float(rewards['retailer_shaped']),
        reward_factory_shaped=float(rewards['factory_shaped']),
        reward_retailer_adjusted=float(rewards['retailer_adjusted']),
        reward_factory_adjusted=float(rewards['factory_adjusted']),
        terminated=nxt.terminated,
        termination_cause=nxt.termination_cause.value,
    )
    return nxt, record


class SupplyChainGame:
    ''' Game class. This class will interact with outer environment.
    '''

    def __init__(self, params=DEFAULT_PARAMS, demand='high', scenario=CommKind.NO_COMMS,
                 scheme=None, demand_level=CONSTANT_DEMAND_LEVEL):
        ''' Initialize the game

        Args:
            params (EnvParams): environment constants
            demand (str): demand regime, 'high', 'low' or 'constant'
            scenario (CommKind): data-sharing scenario
            scheme (RewardScheme): reward scheme, baseline by default
            demand_level (int): daily demand of the constant regime
        '''
        self.params = params.validate()
        self.scenario = CommKind(scenario)
        self.judger = SupplyChainJudger(params, scheme if scheme is not None else RewardScheme())
        self.demand_model = DemandModel(demand, level=demand_level)
        self.np_random = np.random.RandomState()
        self.comm_random = np.random.RandomState()
        self.state = None
        self.payoffs = [0.0, 0.0]

    @property
    def scheme(self):
        return self.judger.scheme

    def seed(self, seed=None):
        ''' Seed the demand and communication streams from one seed
        '''
        self.np_random, seed = np_random(seed)
        self.demand_model.seed(derive_seed(seed, 'demand'))
        self.comm_random, _ = np_random(derive_seed(seed, 'communication'))
        return seed

    def init_game(self, seed=None):
        ''' Start a new episode. The random streams continue from where the
        last episode stopped unless a seed is given.

        Args:
            seed (int): reseed the demand and communication streams first

        Returns:
            (tuple): Tuple containing:

                (list): the observations of the retailer and the factory
                (list): the ids of the players acting next, always both
        '''
        if seed is not None:
            self.seed(seed)
        self.state = reset(self.params)
        if self.scenario.is_fixed:
            self.state.communicated_inventory = communicate(
                self.scenario, self.state.factory.inventory, self.params.capacity_factory, self.comm_random)
        self.payoffs = [0.0, 0.0]
        return self.get_observations(), [RETAILER, FACTORY]

    def step(self, actions, demand=None):
        ''' Play one day

        Args:
            actions (ActionPair): the joint action
            demand (int): customer demand; drawn from the demand model if None

        Returns:
            (tuple): Tuple containing:

                (list): the next observations
                (StepRecord): the record of the day
        '''
        if self.state is None:
            raise ProtocolError('init_game must be called before step')
        if self.scenario.is_fixed and CommKind(actions.comm_kind) != self.scenario:
            actions = replace(actions, comm_kind=self.scenario)
        if demand is None:
            demand = self.demand_model.sample()
        self.state, record = step(self.state, actions, demand, self.params, self.judger, self.comm_random)
        if self.scheme.is_collaborative:
            self.payoffs[RETAILER] += record.reward_retailer_shaped
            self.payoffs[FACTORY] += record.reward_factory_shaped
        else:
            self.payoffs[RETAILER] += record.reward_retailer_base
            self.payoffs[FACTORY] += record.reward_factory_base
        return self.get_observations(), record

    def get_observations(self):
        return [self.get_state(RETAILER), self.get_state(FACTORY)]

    def get_state(self, player_id):
        ''' Observation vector of one agent
        '''
        if player_id == RETAILER:
            return build_retailer_observation(self.state.retailer, self.state.communicated_inventory,
                                              self.state.day)
        return build_factory_observation(self.state.factory, self.state.day)

    @staticmethod
    def get_num_players():
        return 2

    def is_over(self):
        return self.state is not None and self.state.terminated

    def get_payoffs(self):
        return list(self.payoffs)
