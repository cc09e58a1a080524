import importlib

from rlsupply.games.supplychain.supply_chain_error import ConfigurationError

# Keys every environment accepts on top of its own game_ keys
DEFAULT_CONFIG = {
        'seed': None,
        }


def load_entry_point(entry_point):
    ''' Resolve 'package.module:ClassName' to the class
    '''
    try:
        mod_name, attr = entry_point.split(':')
    except (AttributeError, ValueError):
        raise ConfigurationError('entry point must look like module:attr, got {!r}'.format(entry_point))
    try:
        return getattr(importlib.import_module(mod_name), attr)
    except (ImportError, AttributeError) as e:
        raise ConfigurationError('cannot load entry point {}: {}'.format(entry_point, e))


class EnvSpec(object):
    ''' An environment id and where its class lives. The class is imported
    on first use, so registering does not pull in torch or the game code.
    '''

    def __init__(self, env_id, entry_point):
        self.env_id = env_id
        self.entry_point = entry_point
        self._env_class = None

    @property
    def env_class(self):
        if self._env_class is None:
            self._env_class = load_entry_point(self.entry_point)
        return self._env_class

    def make(self, config):
        return self.env_class(config)


class EnvRegistry(object):
    ''' Environment ids to specs
    '''

    def __init__(self):
        self.env_specs = {}

    def register(self, env_id, entry_point):
        if env_id in self.env_specs:
            raise ConfigurationError('env id {!r} is already registered'.format(env_id))
        self.env_specs[env_id] = EnvSpec(env_id, entry_point)

    def make(self, env_id, config):
        if env_id not in self.env_specs:
            raise ConfigurationError('unknown env id {!r}, registered: {}'.format(
                env_id, ', '.join(sorted(self.env_specs))))
        return self.env_specs[env_id].make(config)

    def ids(self):
        return sorted(self.env_specs)


registry = EnvRegistry()


def register(env_id, entry_point):
    ''' Register an environment

    Args:
        env_id (string): the name passed to make
        entry_point (string): 'module:ClassName' of the Env subclass
    '''
    return registry.register(env_id, entry_point)


def make(env_id, config=None):
    ''' Create an environment instance

    Args:
        env_id (string): The name of the environment
        config (dict): The environment settings, merged over DEFAULT_CONFIG.
            Keys the environment does not know raise ConfigurationError.

    Returns:
        (Env): a new environment, not yet reset
    '''
    merged = dict(DEFAULT_CONFIG)
    merged.update(config or {})
    return registry.make(env_id, merged)
