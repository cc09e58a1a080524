'''
    File name: supplychain/params.py
'''

from dataclasses import dataclass, asdict, fields, replace
from typing import Any, Dict

from rlsupply.games.supplychain.supply_chain_error import ConfigurationError


@dataclass(frozen=True)
class EnvParams:
    ''' Constants of the two-echelon supply chain.

    Index 1 is the retailer, index 2 the factory. The backlog state uses the
    inventory capacities while the backlog reward penalty uses the separate
    thresholds, so both can be set independently.
    '''
    sale_price_retailer: float = 6.0
    sale_price_factory: float = 6.0
    order_cost_retailer: float = 6.0
    order_cost_factory: float = 0.2
    holding_cost: float = 0.2
    stockout_cost_retailer: float = 140.0
    stockout_cost_factory: float = 70.0
    backlog_cost: float = 1.0
    capacity_retailer: int = 19
    capacity_factory: int = 59
    backlog_penalty_threshold_retailer: int = 20
    backlog_penalty_threshold_factory: int = 60
    initial_inventory: int = 10
    order_max: int = 20
    episode_length: int = 30
    max_stockout_events: int = 6

    def validate(self):
        ''' Check the invariants of the parameters

        Returns:
            (EnvParams): self, so the call can be chained

        Raises:
            ConfigurationError: naming the first offending field
        '''
        money = ['sale_price_retailer', 'sale_price_factory', 'order_cost_retailer',
                 'order_cost_factory', 'holding_cost', 'stockout_cost_retailer',
                 'stockout_cost_factory', 'backlog_cost']
        for name in money:
            if getattr(self, name) < 0:
                raise ConfigurationError('{}: must be >= 0, got {}'.format(name, getattr(self, name)))
        for name in ['capacity_retailer', 'capacity_factory', 'order_max', 'episode_length']:
            if getattr(self, name) <= 0:
                raise ConfigurationError('{}: must be > 0, got {}'.format(name, getattr(self, name)))
        for name in ['backlog_penalty_threshold_retailer', 'backlog_penalty_threshold_factory',
                     'initial_inventory', 'max_stockout_events']:
            if getattr(self, name) < 0:
                raise ConfigurationError('{}: must be >= 0, got {}'.format(name, getattr(self, name)))
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> 'EnvParams':
        ''' Build parameters from a (partial) dictionary, coercing types

        Args:
            values (dict): field name -> value; missing fields keep their defaults
        '''
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in values.items():
            if key not in known:
                raise ConfigurationError('{}: unknown environment parameter'.format(key))
            caster = int if known[key] in (int, 'int') else float
            try:
                kwargs[key] = caster(value)
            except (TypeError, ValueError):
                raise ConfigurationError('{}: cannot parse {!r}'.format(key, value))
        return replace(cls(), **kwargs).validate()


DEFAULT_PARAMS = EnvParams()
