''' Training and evaluation of replicates

Layout of an experiment output directory:

    config.ini                       the resolved config
    manifest.json                    RunManifest
    metrics_summary.json             evaluation summary over replicates
    replicate_<i>/trajectory.csv     training days, stochastic actions
    replicate_<i>/eval_trajectory.csv
    replicate_<i>/log.txt, performance.csv, performance.svg
    replicate_<i>/checkpoints/day_<n>/{retailer,factory}.pt
    replicate_<i>/checkpoints/final/{retailer,factory}.pt
'''

import datetime
import json
import logging
import os
from contextlib import nullcontext
from dataclasses import dataclass, field, asdict
from typing import List, Optional

import torch
from torch import multiprocessing as mp

import rlsupply
from rlsupply import models
from rlsupply.agents import SACAgent
from rlsupply.experiments.config import config_hash, load_config, save_config
from rlsupply.experiments.metrics import record_row, replicate_metrics, summarize
from rlsupply.games.supplychain.communication import CommKind
from rlsupply.games.supplychain.supply_chain_error import ConfigurationError
from rlsupply.utils import Logger, TrajectoryWriter, get_device, plot_curve, set_seed, tournament
from rlsupply.utils.seeding import derive_seed

log = logging.getLogger(__name__)

AGENT_IDS = ('retailer', 'factory')
RULE_POLICIES = {'base-stock': 'supplychain-base-stock', 'constant-order': 'supplychain-constant-order'}
CONFIG_FILE = 'config.ini'
MANIFEST_FILE = 'manifest.json'
SUMMARY_FILE = 'metrics_summary.json'
TRAJECTORY_FILE = 'trajectory.csv'
EVAL_TRAJECTORY_FILE = 'eval_trajectory.csv'


def code_version():
    ''' Git commit of the working tree when available, else the package version
    '''
    try:
        import git
        repo = git.Repo(search_parent_directories=True)
        sha = repo.commit().hexsha
        return '{}{}'.format(sha, '-dirty' if repo.is_dirty() else '')
    except Exception:
        return 'rlsupply-{}'.format(rlsupply.__version__)


def _now():
    return datetime.datetime.now().strftime('%Y-%m-%d %H:%M:%S.%f')


@dataclass
class ReplicateRecord:
    index: int
    seed: int
    directory: str
    trajectory: str
    eval_trajectory: str
    performance: str
    checkpoints: List[str] = field(default_factory=list)
    episodes: int = 0
    days: int = 0


@dataclass
class RunManifest:
    config_hash: str
    config_path: str
    code_version: str
    started_at: str
    finished_at: Optional[str] = None
    summary_path: Optional[str] = None
    config: dict = field(default_factory=dict)
    replicates: List[ReplicateRecord] = field(default_factory=list)

    def files(self):
        ''' Every file the manifest refers to
        '''
        paths = [self.config_path]
        if self.summary_path:
            paths.append(self.summary_path)
        for rep in self.replicates:
            paths += [rep.trajectory, rep.eval_trajectory, rep.performance]
            for directory in rep.checkpoints:
                paths += [os.path.join(directory, '{}.pt'.format(a)) for a in AGENT_IDS]
        return paths

    def to_dict(self):
        return asdict(self)

    def save(self, path):
        with open(path, 'w') as jsonfile:
            json.dump(self.to_dict(), jsonfile, indent=4, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path) as jsonfile:
            values = json.load(jsonfile)
        values['replicates'] = [ReplicateRecord(**rep) for rep in values.get('replicates', [])]
        return cls(**values)


def make_env(config, seed):
    return rlsupply.make('supply-chain', config.env_config(seed))


def build_agents(config, env, seed):
    ''' Fresh retailer and factory learners with independent seeds
    '''
    return [SACAgent(agent_id=AGENT_IDS[i],
                     state_shape=env.state_shape[i],
                     action_dim=env.action_shape[i][0],
                     seed=derive_seed(seed, AGENT_IDS[i]),
                     device=get_device(),
                     **config.sac.agent_kwargs())
            for i in range(env.num_players)]


def save_agents(agents, directory):
    for agent in agents:
        agent.save_checkpoint(directory)
    return directory


def load_agents(directory, env=None):
    ''' Load retailer.pt and factory.pt, checking shapes against the env when given
    '''
    agents = []
    for i, agent_id in enumerate(AGENT_IDS):
        path = os.path.join(directory, '{}.pt'.format(agent_id))
        if env is None:
            agents.append(SACAgent.load_checkpoint(path))
        else:
            agents.append(SACAgent.load_checkpoint(path, env.state_shape[i], env.action_shape[i][0]))
    return agents


def evaluate_agents(agents, config, seed, episodes, trajectory_path=None):
    ''' Run deterministic episodes on a fresh demand stream

    Returns:
        (ReplicateMetrics): metrics of the evaluation episodes
    '''
    env = make_env(config, derive_seed(seed, 'eval'))
    env.set_agents(agents)
    _, played = tournament(env, episodes)
    rows = []
    with (TrajectoryWriter(trajectory_path) if trajectory_path else nullcontext()) as writer:
        for episode, records in enumerate(played):
            if writer is not None:
                writer.write_episode(episode, records)
            rows += [record_row(episode, record) for record in records]
    return replicate_metrics(rows, collaborative=config.scheme().is_collaborative,
                             mixed=config.scenario == CommKind.MIXED.value)


def train_replicate(config, index, seed):
    ''' Train one replicate end to end, then evaluate it

    Returns:
        (tuple): (ReplicateRecord, ReplicateMetrics of the evaluation)
    '''
    set_seed(seed)
    rep_dir = os.path.join(config.output_dir, 'replicate_{:02d}'.format(index))
    env = make_env(config, derive_seed(seed, 'train'))
    agents = build_agents(config, env, seed)
    env.set_agents(agents)

    record = ReplicateRecord(index=index, seed=seed, directory=rep_dir,
                             trajectory=os.path.join(rep_dir, TRAJECTORY_FILE),
                             eval_trajectory=os.path.join(rep_dir, EVAL_TRAJECTORY_FILE),
                             performance=os.path.join(rep_dir, 'performance.csv'))
    checkpoint_dir = os.path.join(rep_dir, 'checkpoints')
    next_checkpoint = config.checkpoint_every_days

    with Logger(rep_dir) as logger, TrajectoryWriter(record.trajectory) as writer:
        logger.log('replicate {} seed {} config {}'.format(index, seed, config_hash(config)))
        while record.days < config.total_days:
            # the last episode is cut short when the day budget runs out
            records, payoffs = env.run(is_training=True, max_days=config.total_days - record.days)
            writer.write_episode(record.episodes, records)
            record.days += len(records)
            logger.log_performance(record.episodes, record.days, payoffs[0], payoffs[1])
            record.episodes += 1
            while next_checkpoint < config.total_days and record.days >= next_checkpoint:
                directory = os.path.join(checkpoint_dir, 'day_{}'.format(next_checkpoint))
                record.checkpoints.append(save_agents(agents, directory))
                logger.log('checkpoint saved in {}'.format(directory))
                next_checkpoint += config.checkpoint_every_days
        record.checkpoints.append(save_agents(agents, os.path.join(checkpoint_dir, 'final')))
        logger.log('replicate {} finished: {} episodes, {} days, {} updates'.format(
            index, record.episodes, record.days, agents[0].train_t))
    plot_curve(record.performance, os.path.join(rep_dir, 'performance.svg'), config.name)

    metrics = evaluate_agents(agents, config, seed, config.eval_episodes, record.eval_trajectory)
    return record, metrics


def _train_replicate_worker(args):
    torch.set_num_threads(1)
    return train_replicate(*args)


def run_experiment(config, config_path=None):
    ''' Train every replicate of the config and write the manifest

    Args:
        config (ExperimentConfig): a validated config
        config_path (str): the file the config came from, for the log only

    Returns:
        (RunManifest): the manifest, also saved as manifest.json
    '''
    config.validate()
    os.makedirs(config.output_dir, exist_ok=True)
    resolved_path = os.path.join(config.output_dir, CONFIG_FILE)
    save_config(config, resolved_path)
    manifest = RunManifest(config_hash=config_hash(config), config_path=resolved_path,
                           code_version=code_version(), started_at=_now(), config=config.to_dict())
    log.info('running %s (%s) from %s into %s', config.name, manifest.config_hash,
             config_path or 'defaults', config.output_dir)

    jobs = [(config, i, seed) for i, seed in enumerate(config.replicate_seeds())]
    if config.workers > 1 and len(jobs) > 1:
        ctx = mp.get_context('spawn')
        with ctx.Pool(processes=min(config.workers, len(jobs))) as pool:
            results = pool.map(_train_replicate_worker, jobs)
    else:
        results = [train_replicate(*job) for job in jobs]

    manifest.replicates = [record for record, _ in results]
    summary = summarize([metrics for _, metrics in results], config.demand, config.reward_scheme, config.scenario)
    manifest.summary_path = os.path.join(config.output_dir, SUMMARY_FILE)
    with open(manifest.summary_path, 'w') as jsonfile:
        json.dump(summary.to_dict(), jsonfile, indent=4, sort_keys=True)
    manifest.finished_at = _now()
    manifest.save(os.path.join(config.output_dir, MANIFEST_FILE))
    log.info('finished %s: global evaluation reward %s', config.name, summary.reward_mean.get('global'))
    return manifest


def find_config(checkpoint_dir, levels=4):
    ''' The config.ini of the experiment a checkpoint directory belongs to
    '''
    directory = os.path.abspath(checkpoint_dir)
    for _ in range(levels):
        candidate = os.path.join(directory, CONFIG_FILE)
        if os.path.exists(candidate):
            return candidate
        directory = os.path.dirname(directory)
    raise ConfigurationError('{}: no {} found above the checkpoint directory, pass --config'.format(
        checkpoint_dir, CONFIG_FILE))


def evaluate(checkpoint_dir, config=None, eval_episodes=None, seed=None, trajectory_path=None, policy='sac'):
    ''' Evaluate a checkpoint set with deterministic actions

    Args:
        checkpoint_dir (str): directory holding retailer.pt and factory.pt; may be None
            for a rule policy when a config is given
        config (ExperimentConfig): defaults to the config.ini of the experiment
        eval_episodes (int): defaults to config.eval_episodes
        seed (int): evaluation seed, defaults to config.seed_base
        trajectory_path (str): write the evaluation days here when given
        policy (str): 'sac' for the checkpoints, or 'base-stock' or 'constant-order' for a rule model

    Returns:
        (MetricsSummary): summary over the single checkpoint set

    Raises:
        CheckpointError: if the checkpoints do not fit the config's env
    '''
    if policy != 'sac' and policy not in RULE_POLICIES:
        raise ConfigurationError('policy: expected sac or one of {}, got {!r}'.format(sorted(RULE_POLICIES), policy))
    if checkpoint_dir is None and (config is None or policy == 'sac'):
        raise ConfigurationError('evaluate: a checkpoint directory is needed for {}'.format(
            'the sac policy' if policy == 'sac' else 'finding the config'))
    if config is None:
        config = load_config(find_config(checkpoint_dir))
    episodes = config.eval_episodes if eval_episodes is None else eval_episodes
    seed = config.seed_base if seed is None else seed
    env = make_env(config, derive_seed(seed, 'shape'))
    if policy in RULE_POLICIES:
        agents = models.load(RULE_POLICIES[policy]).agents
    else:
        agents = load_agents(checkpoint_dir, env)
    metrics = evaluate_agents(agents, config, seed, episodes, trajectory_path)
    return summarize([metrics], config.demand, config.reward_scheme, config.scenario)
