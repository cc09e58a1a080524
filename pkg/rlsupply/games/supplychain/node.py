'''
    File name: supplychain/node.py
'''

from dataclasses import dataclass


@dataclass
class SupplyChainNode:
    ''' The state of one echelon (retailer or factory)

    Attributes:
        inventory (int): on-hand stock at the end of the last day
        backlog (int): stock held above capacity, max(inventory - capacity, 0)
        stockout_level (int): units of demand that could not be served on the last day
        last_demand (int): demand seen on the last day (customer demand for the
            retailer, the retailer's order for the factory)
        stockout_event_count (int): days with a stockout in the current episode
    '''
    inventory: int = 0
    backlog: int = 0
    stockout_level: int = 0
    last_demand: int = 0
    stockout_event_count: int = 0

    def copy(self):
        return SupplyChainNode(self.inventory, self.backlog, self.stockout_level,
                               self.last_demand, self.stockout_event_count)
