'''
    File name: supplychain/demand.py

    Customer demand generators. A DemandModel owns the random stream that
    drives the customer side of the game.
'''

import math
from enum import Enum

import numpy as np

from rlsupply.games.supplychain.supply_chain_error import ConfigurationError
from rlsupply.utils.seeding import np_random


class DemandRegime(str, Enum):
    HIGH = 'high'
    LOW = 'low'
    CONSTANT = 'constant'


# Poisson(10) for high demand, Normal(2, 1) for low demand
HIGH_DEMAND_MEAN = 10.0
LOW_DEMAND_MEAN = 2.0
LOW_DEMAND_STD = 1.0
CONSTANT_DEMAND_LEVEL = 10


def round_half_away_from_zero(x):
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


class DemandModel:
    ''' A seeded stream of nonnegative integer customer demands
    '''

    def __init__(self, regime='high', seed=None, level=CONSTANT_DEMAND_LEVEL):
        ''' Initialize the demand stream

        Args:
            regime (str or DemandRegime): 'high' (Poisson), 'low' (rounded, clamped Normal)
                or 'constant' (the same demand every day)
            seed (int): seed of the stream; the same seed gives the same sequence
            level (int): the daily demand of the constant regime
        '''
        try:
            self.regime = DemandRegime(regime)
        except ValueError:
            raise ConfigurationError('demand: unknown regime {!r}, expected one of {}'.format(
                regime, [r.value for r in DemandRegime]))
        if isinstance(level, bool) or not isinstance(level, (int, np.integer)) or level < 0:
            raise ConfigurationError('demand_level: must be a nonnegative integer, got {!r}'.format(level))
        self.level = int(level)
        self.seed(seed)

    def seed(self, seed=None):
        self.np_random, self._seed = np_random(seed)
        return self._seed

    def sample(self):
        ''' Draw the demand of one day and advance the stream

        Returns:
            (int): demand in units, >= 0
        '''
        if self.regime == DemandRegime.CONSTANT:
            return self.level
        if self.regime == DemandRegime.HIGH:
            return self._sample_poisson(HIGH_DEMAND_MEAN)
        raw = self.np_random.normal(LOW_DEMAND_MEAN, LOW_DEMAND_STD)
        return self.discretize_normal(raw)

    @staticmethod
    def discretize_normal(raw):
        ''' Round half away from zero, then clamp at zero
        '''
        return max(round_half_away_from_zero(raw), 0)

    def _sample_poisson(self, mean):
        # Knuth's product method: uses only uniform draws from the seeded stream
        limit = math.exp(-mean)
        k = 0
        product = self.np_random.random_sample()
        while product > limit:
            k += 1
            product *= self.np_random.random_sample()
        return k

    def sample_many(self, n):
        return np.array([self.sample() for _ in range(n)], dtype=np.int64)


def expected_low_demand(tolerance=1e-12):
    ''' Mean of the discretized low-demand law, E[max(round(N(2,1)), 0)]

    Summed exactly over integer outcomes using the normal CDF.
    '''
    def cdf(x):
        return 0.5 * (1.0 + math.erf((x - LOW_DEMAND_MEAN) / (LOW_DEMAND_STD * math.sqrt(2.0))))

    total = 0.0
    k = 1
    while True:
        mass = cdf(k + 0.5) - cdf(k - 0.5)
        total += k * mass
        if k > LOW_DEMAND_MEAN and mass < tolerance:
            return total
        k += 1
