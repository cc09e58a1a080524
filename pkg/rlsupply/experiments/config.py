''' Experiment configuration

An experiment is described by an INI file with three sections:

    [experiment]  what to run: demand, scenario, reward scheme, budget, replicates, seeds
    [env]         EnvParams overrides
    [sac]         SacHyperparams overrides

Every key is optional; unknown sections and keys are errors. See
docs/configuration.md for the full schema.
'''

import hashlib
import json
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass, field, fields, asdict, replace
from typing import Optional, Tuple

from rlsupply.games.supplychain.communication import CommKind
from rlsupply.games.supplychain.demand import DemandRegime
from rlsupply.games.supplychain.judger import RewardKind, RewardScheme
from rlsupply.games.supplychain.params import EnvParams
from rlsupply.games.supplychain.supply_chain_error import ConfigurationError
from rlsupply.utils.seeding import derive_seed

# Keys that do not change what is computed and are left out of the config hash
UNHASHED_KEYS = ('output_dir', 'workers')


@dataclass(frozen=True)
class SacHyperparams:
    mlp_layers: Tuple[int, ...] = (256, 256)
    discount_factor: float = 0.99
    actor_learning_rate: float = 3e-4
    critic_learning_rate: float = 3e-4
    alpha_learning_rate: float = 1e-3
    batch_size: int = 256
    initial_alpha: float = 1.0
    tau: float = 0.005
    target_entropy: Optional[float] = None
    replay_memory_size: int = 100000
    replay_memory_init_size: int = 1000
    train_every: int = 1
    prioritized_replay_alpha: float = 0.6
    prioritized_replay_beta: float = 0.4
    prioritized_replay_eps: float = 1e-6

    def validate(self):
        if not 0.0 < self.discount_factor < 1.0:
            raise ConfigurationError('sac.discount_factor: must be in (0, 1), got {}'.format(self.discount_factor))
        if not 0.0 < self.tau <= 1.0:
            raise ConfigurationError('sac.tau: must be in (0, 1], got {}'.format(self.tau))
        if self.batch_size < 1:
            raise ConfigurationError('sac.batch_size: must be >= 1, got {}'.format(self.batch_size))
        if self.initial_alpha <= 0.0:
            raise ConfigurationError('sac.initial_alpha: must be > 0, got {}'.format(self.initial_alpha))
        if self.replay_memory_size < self.batch_size:
            raise ConfigurationError('sac.replay_memory_size: must be >= batch_size')
        if self.train_every < 1:
            raise ConfigurationError('sac.train_every: must be >= 1, got {}'.format(self.train_every))
        if not self.mlp_layers or min(self.mlp_layers) < 1:
            raise ConfigurationError('sac.mlp_layers: needs at least one positive width')
        for name in ('actor_learning_rate', 'critic_learning_rate', 'alpha_learning_rate',
                     'prioritized_replay_eps'):
            if getattr(self, name) <= 0.0:
                raise ConfigurationError('sac.{}: must be > 0'.format(name))
        return self

    def agent_kwargs(self):
        ''' Keyword arguments of SACAgent
        '''
        kwargs = asdict(self)
        kwargs['mlp_layers'] = list(self.mlp_layers)
        return kwargs


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = 'experiment'
    demand: str = 'high'
    demand_level: int = 10
    scenario: str = 'no_comms'
    reward_scheme: str = 'baseline'
    shaping_coeff_retailer: float = 10.0
    shaping_coeff_factory: float = 20.0
    total_days: int = 60000
    replicates: int = 10
    seed_base: int = 0
    seeds: Optional[Tuple[int, ...]] = None
    eval_episodes: int = 30
    checkpoint_every_days: int = 10000
    workers: int = 1
    output_dir: str = 'results'
    env: EnvParams = field(default_factory=EnvParams)
    sac: SacHyperparams = field(default_factory=SacHyperparams)

    def validate(self):
        ''' Check every field, naming the first bad one

        Returns:
            (ExperimentConfig): self
        '''
        try:
            DemandRegime(self.demand)
        except ValueError:
            raise ConfigurationError('experiment.demand: expected one of {}, got {!r}'.format(
                [r.value for r in DemandRegime], self.demand))
        if self.demand_level < 0:
            raise ConfigurationError('experiment.demand_level: must be >= 0, got {}'.format(self.demand_level))
        try:
            CommKind(self.scenario)
        except ValueError:
            raise ConfigurationError('experiment.scenario: expected one of {}, got {!r}'.format(
                [k.value for k in CommKind], self.scenario))
        try:
            RewardKind(self.reward_scheme)
        except ValueError:
            raise ConfigurationError('experiment.reward_scheme: expected baseline or collaborative, got {!r}'.format(
                self.reward_scheme))
        self.env.validate()
        self.sac.validate()
        if self.total_days < self.env.episode_length:
            raise ConfigurationError('experiment.total_days: must be >= env.episode_length ({})'.format(
                self.env.episode_length))
        if self.replicates < 1:
            raise ConfigurationError('experiment.replicates: must be >= 1, got {}'.format(self.replicates))
        if self.seeds is not None:
            if len(self.seeds) != self.replicates:
                raise ConfigurationError('experiment.seeds: {} seeds for {} replicates'.format(
                    len(self.seeds), self.replicates))
            if len(set(self.seeds)) != len(self.seeds):
                raise ConfigurationError('experiment.seeds: seeds must be distinct')
            if min(self.seeds) < 0:
                raise ConfigurationError('experiment.seeds: seeds must be >= 0')
        if self.seed_base < 0:
            raise ConfigurationError('experiment.seed_base: must be >= 0')
        if self.eval_episodes < 0:
            raise ConfigurationError('experiment.eval_episodes: must be >= 0')
        if self.checkpoint_every_days < 1:
            raise ConfigurationError('experiment.checkpoint_every_days: must be >= 1')
        if self.workers < 1:
            raise ConfigurationError('experiment.workers: must be >= 1')
        self.scheme()
        return self

    def scheme(self):
        return RewardScheme(self.reward_scheme, self.shaping_coeff_retailer, self.shaping_coeff_factory)

    def replicate_seeds(self):
        ''' One seed per replicate, derived from seed_base unless listed explicitly
        '''
        if self.seeds is not None:
            return list(self.seeds)
        return [derive_seed(self.seed_base, 'replicate', i) for i in range(self.replicates)]

    def env_config(self, seed):
        ''' The config dict of rlsupply.make('supply-chain', ...)
        '''
        return {
            'seed': seed,
            'game_demand': self.demand,
            'game_demand_level': self.demand_level,
            'game_scenario': self.scenario,
            'game_reward_scheme': self.scheme(),
            'game_params': self.env,
        }

    def with_overrides(self, replicates=None, seed_base=None, output_dir=None, total_days=None, workers=None):
        ''' Copy with the command-line overrides applied, then validated
        '''
        changes = {}
        if replicates is not None:
            changes['replicates'] = replicates
            if self.seeds is not None and len(self.seeds) != replicates:
                changes['seeds'] = None
        if seed_base is not None:
            changes['seed_base'] = seed_base
            changes['seeds'] = None
        if output_dir is not None:
            changes['output_dir'] = output_dir
        if total_days is not None:
            changes['total_days'] = total_days
        if workers is not None:
            changes['workers'] = workers
        return replace(self, **changes).validate()

    def to_dict(self):
        values = asdict(self)
        values['seeds'] = None if self.seeds is None else list(self.seeds)
        values['sac']['mlp_layers'] = list(self.sac.mlp_layers)
        return values


def config_hash(config):
    ''' SHA-256 of the canonical JSON of the resolved config
    '''
    values = config.to_dict()
    for key in UNHASHED_KEYS:
        values.pop(key, None)
    text = json.dumps(values, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf8')).hexdigest()


def _parse_int_tuple(text):
    return tuple(int(v) for v in str(text).replace(' ', '').split(',') if v)


def _cast(section, key, value, default):
    ''' Parse an INI string to the type of the field default
    '''
    try:
        if key in ('mlp_layers', 'seeds'):
            if str(value).strip().lower() in ('', 'none'):
                return None if key == 'seeds' else default
            return _parse_int_tuple(value)
        if key == 'target_entropy':
            return None if str(value).strip().lower() in ('', 'none') else float(value)
        if isinstance(default, bool):
            return str(value).strip().lower() in ('1', 'true', 'yes', 'on')
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        return str(value).strip()
    except (TypeError, ValueError):
        raise ConfigurationError('{}.{}: cannot parse {!r}'.format(section, key, value))


def _section_values(parser, section, cls):
    known = {f.name: f for f in fields(cls)}
    defaults = cls() if cls is not ExperimentConfig else ExperimentConfig()
    values = {}
    if not parser.has_section(section):
        return values
    for key, value in parser.items(section):
        if key not in known or key in ('env', 'sac'):
            raise ConfigurationError('{}.{}: unknown key'.format(section, key))
        values[key] = _cast(section, key, value, getattr(defaults, key))
    return values


def config_from_parser(parser):
    for section in parser.sections():
        if section not in ('experiment', 'env', 'sac'):
            raise ConfigurationError('{}: unknown section'.format(section))
    env = replace(EnvParams(), **_section_values(parser, 'env', EnvParams))
    sac = replace(SacHyperparams(), **_section_values(parser, 'sac', SacHyperparams))
    experiment = _section_values(parser, 'experiment', ExperimentConfig)
    return ExperimentConfig(env=env, sac=sac, **experiment).validate()


def load_config(path):
    ''' Read and validate an experiment INI file

    Raises:
        FileNotFoundError: when the file does not exist
        ConfigurationError: with a <section>.<key> message for any bad entry
    '''
    parser = ConfigParser()
    try:
        with open(path) as f:
            parser.read_file(f)
    except ConfigParserError as e:
        raise ConfigurationError('{}: {}'.format(path, e))
    return config_from_parser(parser)


def loads_config(text):
    parser = ConfigParser()
    try:
        parser.read_string(text)
    except ConfigParserError as e:
        raise ConfigurationError(str(e))
    return config_from_parser(parser)


def save_config(config, path):
    ''' Write the resolved config; loading it again gives the same config hash
    '''
    values = config.to_dict()
    parser = ConfigParser()
    sections = {'experiment': {k: v for k, v in values.items() if k not in ('env', 'sac')},
                'env': values['env'], 'sac': values['sac']}
    for section, items in sections.items():
        parser.add_section(section)
        for key, value in items.items():
            if value is None:
                text = 'none'
            elif isinstance(value, (list, tuple)):
                text = ','.join(str(v) for v in value)
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            parser.set(section, key, text)
    with open(path, 'w') as f:
        parser.write(f)
