from rlsupply.envs.registration import load_entry_point
from rlsupply.games.supplychain.supply_chain_error import ConfigurationError

NUM_AGENTS = 2


class ModelSpec(object):
    ''' A model id, where its class lives and the keyword defaults it is
    built with
    '''

    def __init__(self, model_id, entry_point, defaults=None):
        self.model_id = model_id
        self.entry_point = entry_point
        self.defaults = dict(defaults or {})

    def load(self, **kwargs):
        ''' Build the model and check that it brings one agent per echelon

        Returns:
            (Model): an instance of the model
        '''
        options = dict(self.defaults)
        options.update(kwargs)
        try:
            model = load_entry_point(self.entry_point)(**options)
        except TypeError as e:
            raise ConfigurationError('{}: {}'.format(self.model_id, e))
        if len(model.agents) != NUM_AGENTS:
            raise ConfigurationError('{}: expected {} agents, got {}'.format(
                self.model_id, NUM_AGENTS, len(model.agents)))
        return model


model_registry = {}


def register(model_id, entry_point, **defaults):
    ''' Register a model

    Args:
        model_id (string): the name passed to load
        entry_point (string): 'module:ClassName' of the Model subclass
        defaults: keyword arguments used unless load overrides them
    '''
    if model_id in model_registry:
        raise ConfigurationError('model id {!r} is already registered'.format(model_id))
    model_registry[model_id] = ModelSpec(model_id, entry_point, defaults)


def load(model_id, **kwargs):
    ''' Create a model instance

    Args:
        model_id (string): the name of the model
        kwargs: passed to the model class

    Raises:
        ConfigurationError: unknown id, bad keyword or wrong number of agents
    '''
    if model_id not in model_registry:
        raise ConfigurationError('unknown model id {!r}, registered: {}'.format(
            model_id, ', '.join(sorted(model_registry))))
    return model_registry[model_id].load(**kwargs)
