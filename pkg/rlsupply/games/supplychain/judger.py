'''
    File name: supplychain/judger.py

    Rewards of the two agents. All functions are pure and compute in exact
    rational currency (Fraction of the decimal parameter values), so shaping
    and the comparability adjustment cancel exactly.
'''

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from rlsupply.games.supplychain.params import DEFAULT_PARAMS
from rlsupply.games.supplychain.supply_chain_error import ConfigurationError, UsageError


class RewardKind(str, Enum):
    BASELINE = 'baseline'
    COLLABORATIVE = 'collaborative'


def money(x):
    ''' Exact decimal value of a price, cost or reward
    '''
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class RewardScheme:
    ''' Baseline or collaborative rewards. Under the collaborative scheme the
    retailer pays shaping_coeff_retailer per unit of factory stockout and the
    factory pays shaping_coeff_factory per unit of retailer stockout.
    '''
    kind: RewardKind = RewardKind.BASELINE
    shaping_coeff_retailer: float = 10.0
    shaping_coeff_factory: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', RewardKind(self.kind))
        if self.shaping_coeff_retailer < 0 or self.shaping_coeff_factory < 0:
            raise ConfigurationError('reward scheme: shaping coefficients must be >= 0')

    @classmethod
    def from_name(cls, name):
        try:
            return cls(RewardKind(name))
        except ValueError:
            raise ConfigurationError('reward_scheme: unknown scheme {!r}'.format(name))

    @property
    def is_collaborative(self):
        return self.kind == RewardKind.COLLABORATIVE


@lru_cache(maxsize=32)
def _rates(params):
    return {k: money(v) for k, v in params.to_dict().items()}


def retailer_reward_base(prev_demand, inventory, order, demand, params=DEFAULT_PARAMS, available=None):
    ''' Retailer reward of one day

    Args:
        prev_demand (int): customer demand of the previous day (revenue lag)
        inventory (int): end-of-day inventory, charged for holding and backlog
        order (int): units ordered from the factory
        demand (int): customer demand of the day
        params (EnvParams): prices and costs
        available (int): stock available to serve the demand; defaults to inventory

    Returns:
        (Fraction): the reward
    '''
    if available is None:
        available = inventory
    r = _rates(params)
    return (r['sale_price_retailer'] * prev_demand
            - r['holding_cost'] * inventory
            - r['order_cost_retailer'] * order
            - r['stockout_cost_retailer'] * max(demand - available, 0)
            - r['backlog_cost'] * max(inventory - params.backlog_penalty_threshold_retailer, 0))


def factory_reward_base(prev_order, inventory, order, retailer_order, params=DEFAULT_PARAMS, available=None):
    ''' Factory reward of one day; prev_order is the retailer's order of the
    previous day (revenue lag), retailer_order today's demand on the factory.
    '''
    if available is None:
        available = inventory
    r = _rates(params)
    return (r['sale_price_factory'] * prev_order
            - r['holding_cost'] * inventory
            - r['order_cost_factory'] * order
            - r['stockout_cost_factory'] * max(retailer_order - available, 0)
            - r['backlog_cost'] * max(inventory - params.backlog_penalty_threshold_factory, 0))


def cross_penalties(retailer_order, factory_available, demand, retailer_available, scheme):
    ''' Penalties each agent pays for the other node's stockout

    Returns:
        (tuple): (retailer penalty, factory penalty), both >= 0
    '''
    return (money(scheme.shaping_coeff_retailer) * max(retailer_order - factory_available, 0),
            money(scheme.shaping_coeff_factory) * max(demand - retailer_available, 0))


def shaped_rewards(base_retailer, base_factory, retailer_order, factory_available,
                   demand, retailer_available, scheme):
    ''' Collaborative rewards: each base reward minus the other node's stockout penalty

    Args:
        base_retailer, base_factory: baseline rewards of the day
        retailer_order (int): Q1, the demand on the factory
        factory_available (int): stock the factory could ship
        demand (int): customer demand
        retailer_available (int): stock the retailer could sell
        scheme (RewardScheme): must be collaborative

    Returns:
        (tuple): (retailer shaped, factory shaped), never above the base rewards
    '''
    if not scheme.is_collaborative:
        raise UsageError('shaped rewards require the collaborative scheme')
    penalty_r, penalty_f = cross_penalties(retailer_order, factory_available, demand,
                                           retailer_available, scheme)
    return money(base_retailer) - penalty_r, money(base_factory) - penalty_f


def comparability_adjust(shaped_reward, opposite_stockout_penalty, scheme):
    ''' Add the cross-node stockout penalty back to a collaborative reward so
    it can be compared with baseline rewards.
    '''
    if not scheme.is_collaborative:
        raise UsageError('comparability adjustment only applies to collaborative rewards')
    return money(shaped_reward) + money(opposite_stockout_penalty)


class SupplyChainJudger:
    ''' Computes per-agent rewards from the quantities of one day
    '''

    def __init__(self, params=DEFAULT_PARAMS, scheme=None):
        self.params = params
        self.scheme = scheme if scheme is not None else RewardScheme()

    def judge_day(self, day):
        ''' Rewards of one day

        Args:
            day (dict): quantities of the day with keys prev_demand, prev_retailer_order,
                retailer_inventory, factory_inventory, retailer_available, factory_available,
                retailer_order, factory_order, demand

        Returns:
            (dict): base, shaped, adjusted rewards and cross penalties of both agents
        '''
        base_r = retailer_reward_base(day['prev_demand'], day['retailer_inventory'],
                                      day['retailer_order'], day['demand'], self.params,
                                      available=day['retailer_available'])
        base_f = factory_reward_base(day['prev_retailer_order'], day['factory_inventory'],
                                     day['factory_order'], day['retailer_order'], self.params,
                                     available=day['factory_available'])
        if not self.scheme.is_collaborative:
            return {'retailer_base': base_r, 'factory_base': base_f,
                    'retailer_shaped': base_r, 'factory_shaped': base_f,
                    'retailer_adjusted': base_r, 'factory_adjusted': base_f,
                    'retailer_cross_penalty': Fraction(0), 'factory_cross_penalty': Fraction(0)}

        penalty_r, penalty_f = cross_penalties(day['retailer_order'], day['factory_available'],
                                               day['demand'], day['retailer_available'], self.scheme)
        shaped_r, shaped_f = shaped_rewards(base_r, base_f, day['retailer_order'],
                                            day['factory_available'], day['demand'],
                                            day['retailer_available'], self.scheme)
        return {
            'retailer_base': base_r,
            'factory_base': base_f,
            'retailer_shaped': shaped_r,
            'factory_shaped': shaped_f,
            'retailer_adjusted': comparability_adjust(shaped_r, penalty_r, self.scheme),
            'factory_adjusted': comparability_adjust(shaped_f, penalty_f, self.scheme),
            'retailer_cross_penalty': penalty_r,
            'factory_cross_penalty': penalty_f,
        }
