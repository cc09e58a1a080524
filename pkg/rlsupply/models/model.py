class Model(object):
    ''' A ready-made pair of agents, retailer first
    '''

    agent_ids = ('retailer', 'factory')

    @property
    def agents(self):
        raise NotImplementedError

    def agent(self, agent_id):
        ''' The agent of one echelon, by name
        '''
        return self.agents[self.agent_ids.index(agent_id)]
