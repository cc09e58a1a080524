''' Supply chain rule models
'''
from rlsupply.games.supplychain.communication import CommKind, MIXED_CHOICES
from rlsupply.games.supplychain.game import RETAILER
from rlsupply.games.supplychain.params import DEFAULT_PARAMS
from rlsupply.models.model import Model

AGENT_IDS = {'retailer': 0, 'factory': 1}


def comm_raw(kind):
    ''' Raw value in the middle of the third that decodes to `kind`
    '''
    return (MIXED_CHOICES.index(CommKind(kind)) + 0.5) / len(MIXED_CHOICES)


class ConstantOrderAgent(object):
    ''' Orders the same quantity every day
    '''
    def __init__(self, order, agent='retailer', order_max=DEFAULT_PARAMS.order_max, comm_kind=CommKind.NO_COMMS):
        self.use_raw = False
        self.agent = AGENT_IDS.get(agent, agent)
        self.order_max = order_max
        self.order = order
        self.comm_kind = CommKind(comm_kind)

    def raw_action(self, order):
        raw = [order / self.order_max]
        if self.agent != RETAILER:
            raw.append(comm_raw(self.comm_kind))
        return raw

    def step(self, state):
        return self.raw_action(self.order)

    def eval_step(self, state):
        ''' Step for evaluation. The same to step
        '''
        return self.step(state), {}


class BaseStockAgent(ConstantOrderAgent):
    ''' Orders up to a target inventory level, capped at order_max
    '''
    def __init__(self, target_level, agent='retailer', order_max=DEFAULT_PARAMS.order_max,
                 comm_kind=CommKind.NO_COMMS):
        super().__init__(0, agent, order_max, comm_kind)
        self.target_level = target_level

    def step(self, state):
        inventory = state['raw_obs']['inventory']
        order = min(max(self.target_level - inventory, 0), self.order_max)
        return self.raw_action(order)


class SupplyChainBaseStockModel(Model):
    ''' Base-stock policies for both echelons
    '''

    def __init__(self, retailer_target=14, factory_target=20, comm_kind=CommKind.NO_COMMS):
        ''' Targets are inventory levels after ordering
        '''
        self.rule_agents = [BaseStockAgent(retailer_target, 'retailer'),
                            BaseStockAgent(factory_target, 'factory', comm_kind=comm_kind)]

    @property
    def agents(self):
        ''' Retailer and factory agents
        '''
        return self.rule_agents


class SupplyChainConstantOrderModel(Model):
    ''' Both echelons order a fixed quantity every day
    '''

    def __init__(self, retailer_order=10, factory_order=10, comm_kind=CommKind.NO_COMMS):
        self.rule_agents = [ConstantOrderAgent(retailer_order, 'retailer'),
                            ConstantOrderAgent(factory_order, 'factory', comm_kind=comm_kind)]

    @property
    def agents(self):
        return self.rule_agents
