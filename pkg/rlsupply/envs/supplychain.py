import math

import numpy as np

from rlsupply.envs import Env
from rlsupply.games.supplychain import Game, ActionPair, EnvParams, RewardScheme
from rlsupply.games.supplychain.communication import CommKind, kind_from_raw
from rlsupply.games.supplychain.game import RETAILER, FACTORY
from rlsupply.games.supplychain.params import DEFAULT_PARAMS
from rlsupply.games.supplychain.supply_chain_error import ActionError, ConfigurationError

DEFAULT_GAME_CONFIG = {
        'game_demand': 'high',
        'game_demand_level': 10,
        'game_scenario': 'no_comms',
        'game_reward_scheme': 'baseline',
        'game_params': None,
        }

AGENT_NAMES = ('retailer', 'factory')

RETAILER_SLOTS = ('inventory', 'backlog', 'stockout', 'last_demand', 'factory_inventory', 'day')
FACTORY_SLOTS = ('inventory', 'backlog', 'stockout', 'last_demand', 'day')


def decode_action(raw, agent, scenario, order_max=DEFAULT_PARAMS.order_max):
    ''' Turn a raw policy output in [0, 1]^d into an order and a comm kind

    Args:
        raw (array-like): 1 value for the retailer, 2 for the factory
        agent (int or str): RETAILER/FACTORY or their names
        scenario (CommKind): the data-sharing scenario of the run
        order_max (int): largest order

    Returns:
        (tuple): (order in 0..order_max, CommKind or None for the retailer)
    '''
    if isinstance(agent, str):
        agent = AGENT_NAMES.index(agent)
    raw = np.asarray(raw, dtype=np.float64).reshape(-1)
    width = 1 if agent == RETAILER else 2
    if raw.shape[0] != width:
        raise ActionError('{}: expected {} raw values, got {}'.format(AGENT_NAMES[agent], width, raw.shape[0]))
    if not np.all(np.isfinite(raw)):
        raise ActionError('{}: raw action is not finite: {}'.format(AGENT_NAMES[agent], raw))
    raw = np.clip(raw, 0.0, 1.0)

    # round half up so 0.5 * 20 lands on 10 and 1.0 on order_max
    order = min(max(int(math.floor(raw[0] * order_max + 0.5)), 0), order_max)
    if agent == RETAILER:
        return order, None
    scenario = CommKind(scenario)
    if scenario.is_fixed:
        return order, scenario
    return order, kind_from_raw(raw[1])


class SupplyChainEnv(Env):
    ''' Two-echelon supply chain environment: agent 0 is the retailer,
    agent 1 the factory. Both act every day.
    '''

    def __init__(self, config=None):
        self.name = 'supply-chain'
        self.default_game_config = DEFAULT_GAME_CONFIG
        if config is None:
            config = {}
        game_config = self.merge_config(config)

        params = game_config['game_params']
        if params is None:
            params = DEFAULT_PARAMS
        elif isinstance(params, dict):
            params = EnvParams.from_dict(params)
        elif not isinstance(params, EnvParams):
            raise ConfigurationError('game_params: expected EnvParams or dict, got {!r}'.format(type(params)))
        scheme = game_config['game_reward_scheme']
        if not isinstance(scheme, RewardScheme):
            scheme = RewardScheme.from_name(scheme)
        try:
            scenario = CommKind(game_config['game_scenario'])
        except ValueError:
            raise ConfigurationError('game_scenario: unknown scenario {!r}'.format(game_config['game_scenario']))

        self.game = Game(params=params, demand=game_config['game_demand'], scenario=scenario, scheme=scheme,
                         demand_level=game_config['game_demand_level'])
        super().__init__(config)

        self.state_shape = [[6], [5]]
        self.action_shape = [[1], [2]]

    @property
    def params(self):
        return self.game.params

    @property
    def scenario(self):
        return self.game.scenario

    @property
    def scheme(self):
        return self.game.scheme

    def _extract_state(self, obs, player_id):
        slots = RETAILER_SLOTS if player_id == RETAILER else FACTORY_SLOTS
        return {
            'obs': obs,
            'raw_obs': {name: int(value) for name, value in zip(slots, obs)},
            'player_id': player_id,
        }

    def _decode_action(self, actions):
        retailer_order, _ = decode_action(actions[RETAILER], RETAILER, self.scenario, self.params.order_max)
        factory_order, kind = decode_action(actions[FACTORY], FACTORY, self.scenario, self.params.order_max)
        return ActionPair(retailer_order, factory_order, kind)

    def get_step_rewards(self, record):
        ''' Rewards the agents learn from: shaped under the collaborative scheme, base otherwise
        '''
        if self.scheme.is_collaborative:
            return [record.reward_retailer_shaped, record.reward_factory_shaped]
        return [record.reward_retailer_base, record.reward_factory_base]

    def get_payoffs(self):
        ''' Episode returns of both agents under the env's reward scheme

        Returns:
            (numpy.array): [retailer, factory]
        '''
        return np.array(self.game.get_payoffs())

    def get_perfect_information(self):
        ''' Get the perfect information of the current state

        Returns:
            (dict): A dictionary of all the perfect information of the current state
        '''
        state = self.game.state
        return {
            'day': state.day,
            'retailer': vars(state.retailer).copy(),
            'factory': vars(state.factory).copy(),
            'communicated_inventory': state.communicated_inventory,
            'last_retailer_order': state.last_retailer_order,
            'last_customer_demand': state.last_customer_demand,
            'scenario': self.scenario.value,
            'reward_scheme': self.scheme.kind.value,
            'terminated': state.terminated,
            'termination_cause': state.termination_cause.value,
        }
