from rlsupply.utils.seeding import np_random


class RandomAgent(object):
    ''' Uniform raw actions from the agent's own seeded stream. Used as a
    sanity baseline and to drive episodes in tests.
    '''

    def __init__(self, action_dim, seed=None):
        '''
        Args:
            action_dim (int): width of the raw action, 1 for the retailer and 2 for the factory
            seed (int): seed of the agent's stream
        '''
        self.use_raw = False
        self.action_dim = action_dim
        self.np_random, _ = np_random(seed)

    def step(self, state):
        ''' A raw action drawn uniformly from [0, 1)^d; the state is ignored
        '''
        return self.np_random.random_sample(self.action_dim)

    def eval_step(self, state):
        return self.step(state), {}
