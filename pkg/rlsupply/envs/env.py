from rlsupply.games.supplychain.supply_chain_error import ConfigurationError, ProtocolError
from rlsupply.utils import seeding


class Env(object):
    '''
    The base Env class. Every environment in rlsupply is a simultaneous-move
    game: on each day all players observe the same pre-step state, act, and
    then the game advances once.
    '''
    def __init__(self, config):
        ''' Initialize the environment

        Args:
            config (dict): A config dictionary. All the fields are
                optional. Currently, the dictionary includes:
                'seed' (int) - A environment local random seed.
                Game specific configurations start with 'game_', e.g.
                'game_demand'. Their defaults live in the child class as
                `default_game_config`. Unknown keys are rejected.
        '''
        self.game_config = self.merge_config(config)

        self.num_players = self.game.get_num_players()
        self.agents = None

        # A counter for the simulated days
        self.timestep = 0

        self.seed(config.get('seed'))

    def merge_config(self, config):
        ''' Game config with the given keys over the defaults

        Raises:
            ConfigurationError: for keys neither 'seed' nor in `default_game_config`
        '''
        unknown = [key for key in config if key != 'seed' and key not in self.default_game_config]
        if unknown:
            raise ConfigurationError('{}: unknown config keys {}'.format(self.name, sorted(unknown)))
        game_config = self.default_game_config.copy()
        for key in config:
            if key in game_config:
                game_config[key] = config[key]
        return game_config

    def reset(self):
        ''' Start a new episode

        Returns:
            (tuple): Tuple containing:

                (list): The begining state of every player
                (list): The ids of the players acting next
        '''
        observations, player_ids = self.game.init_game()
        return [self._extract_state(obs, i) for i, obs in enumerate(observations)], player_ids

    def step(self, actions, raw_action=False):
        ''' Step forward one day

        Args:
            actions (list): One action per player
            raw_action (boolean): True if the actions are already game actions

        Returns:
            (tuple): Tuple containing:

                (list): The next state of every player
                (object): The record of the day
        '''
        if self.game.is_over():
            raise ProtocolError('{}: step after the episode is over, call reset'.format(self.name))
        if not raw_action:
            actions = self._decode_action(actions)
        self.timestep += 1
        observations, record = self.game.step(actions)
        return [self._extract_state(obs, i) for i, obs in enumerate(observations)], record

    def set_agents(self, agents):
        '''
        Set the agents that will interact with the environment.
        This function must be called before `run`.

        Args:
            agents (list): List of Agent classes, one per player
        '''
        self.agents = agents

    def run(self, is_training=False, max_days=None):
        '''
        Run one episode, either for evaluation or for training the agents.

        Args:
            is_training (boolean): True if for training purpose. Each agent is
                fed its transition after every day.
            max_days (int): Stop early after this many days even if the episode
                is not over. The last transition is then not terminal.

        Returns:
            (tuple) Tuple containing:

                (list): The records of the simulated days
                (list): The payoffs of the players
        '''
        if self.agents is None:
            raise ProtocolError('set_agents must be called before run')
        records = []
        states, _ = self.reset()
        while not self.is_over():
            if max_days is not None and len(records) >= max_days:
                break
            if is_training:
                actions = [agent.step(state) for agent, state in zip(self.agents, states)]
            else:
                actions = [agent.eval_step(state)[0] for agent, state in zip(self.agents, states)]

            next_states, record = self.step(actions)
            records.append(record)

            if is_training:
                rewards = self.get_step_rewards(record)
                for i, agent in enumerate(self.agents):
                    if hasattr(agent, 'feed'):
                        agent.feed((states[i], actions[i], rewards[i], next_states[i], record.terminated))
            states = next_states

        return records, self.get_payoffs()

    def is_over(self):
        ''' Check whether the curent episode is over

        Returns:
            (boolean): True if current episode is over
        '''
        return self.game.is_over()

    def get_state(self, player_id):
        ''' Get the state given player id

        Args:
            player_id (int): The player id

        Returns:
            (dict): The observed state of the player
        '''
        return self._extract_state(self.game.get_state(player_id), player_id)

    def get_payoffs(self):
        ''' Get the payoffs of players. Must be implemented in the child class.
        '''
        raise NotImplementedError

    def get_step_rewards(self, record):
        ''' The reward each player learns from for one day. Must be implemented in the child class.
        '''
        raise NotImplementedError

    def get_perfect_information(self):
        ''' Get the perfect information of the current state

        Returns:
            (dict): A dictionary of all the perfect information of the current state
        '''
        raise NotImplementedError

    def seed(self, seed=None):
        self.np_random, seed = seeding.np_random(seed)
        self.game.seed(seed)
        return seed

    def _extract_state(self, obs, player_id):
        ''' Extract useful information from state for RL. Must be implemented in the child class.
        '''
        raise NotImplementedError

    def _decode_action(self, actions):
        ''' Decode the agents' outputs into a game action. Must be implemented in the child class.
        '''
        raise NotImplementedError
