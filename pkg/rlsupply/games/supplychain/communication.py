'''
    File name: supplychain/communication.py

    Data-sharing protocols between the factory and the retailer.
'''

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class CommKind(str, Enum):
    NO_COMMS = 'no_comms'
    LYING = 'lying'
    TRUTH = 'truth'
    MIXED = 'mixed'

    @property
    def is_fixed(self):
        return self != CommKind.MIXED


# The kinds a Mixed factory can pick from, in binning order
MIXED_CHOICES = (CommKind.NO_COMMS, CommKind.LYING, CommKind.TRUTH)

RETAILER_OBS_WIDTH = 6
FACTORY_OBS_WIDTH = 5


@dataclass(frozen=True)
class CommScenario:
    ''' A data-sharing scenario. omega is 0 for NoComms, 1 for Truth and
    resampled from U[0,1) every step for Lying.
    '''
    kind: CommKind

    @classmethod
    def from_name(cls, name):
        return cls(CommKind(name))

    @property
    def name(self):
        return self.kind.value


def draw_omega(rng):
    ''' Fresh lying factor, uniform on [0, 1)
    '''
    return rng.random_sample()


def communicate(kind, true_inventory, capacity, rng):
    ''' Map the factory's true inventory to what the retailer is told

    Args:
        kind (CommKind): a fixed kind (NoComms, Lying or Truth)
        true_inventory (int): the factory's inventory I2 >= 0
        capacity (int): the factory capacity C2
        rng (numpy.random.RandomState): stream used for the lying factor

    Returns:
        (int): the communicated inventory
    '''
    kind = CommKind(kind)
    if kind == CommKind.NO_COMMS:
        return 0
    if kind == CommKind.TRUTH:
        return int(true_inventory)
    if kind == CommKind.LYING:
        return int(math.floor(draw_omega(rng) * capacity))
    raise ValueError('Mixed is resolved to a fixed kind by the factory action')


def build_retailer_observation(retailer, communicated_inventory, day):
    ''' [I1, B1, S1, D1, I_F, p_t]; the fifth slot is 0 when nothing is shared
    '''
    return np.array([retailer.inventory, retailer.backlog, retailer.stockout_level,
                     retailer.last_demand, communicated_inventory, day], dtype=np.float32)


def build_factory_observation(factory, day):
    ''' [I2, B2, S2, D2, p_t]; the factory never sees the retailer's inventory
    '''
    return np.array([factory.inventory, factory.backlog, factory.stockout_level,
                     factory.last_demand, day], dtype=np.float32)


def kind_from_raw(raw):
    ''' Pick a Mixed-scenario kind by splitting [0, 1] into thirds
    '''
    if raw < 1.0 / 3.0:
        return CommKind.NO_COMMS
    if raw < 2.0 / 3.0:
        return CommKind.LYING
    return CommKind.TRUTH
