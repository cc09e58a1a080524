''' Per-replicate metrics and their aggregation over replicates

Rewards are reported two ways: per episode (mean of episode sums) and per
day (total reward over total days). Under the collaborative scheme the
headline reward is the comparability-adjusted one; the raw shaped reward
is kept alongside.
'''

import math
from collections import OrderedDict
from dataclasses import dataclass, field, asdict
from typing import Dict, List

from rlsupply.games.supplychain.communication import MIXED_CHOICES
from rlsupply.games.supplychain.supply_chain_error import SchemaError

AGENTS = ('retailer', 'factory')
REWARD_ROWS = ('factory', 'retailer', 'global')
GLOBAL_TOLERANCE = 1e-9

INT_FIELDS = ('episode', 'day', 'retailer_order', 'factory_order', 'communicated_inventory',
              'customer_demand', 'shipped_to_retailer', 'retailer_stockout_qty', 'factory_stockout_qty',
              'retailer_backlog_qty', 'factory_backlog_qty', 'retailer_inventory', 'factory_inventory')
FLOAT_FIELDS = ('reward_retailer_base', 'reward_factory_base', 'reward_retailer_shaped',
                'reward_factory_shaped', 'reward_retailer_adjusted', 'reward_factory_adjusted')


def record_row(episode, record):
    ''' A StepRecord as a trajectory row
    '''
    row = asdict(record)
    row['episode'] = episode
    return row


def parse_row(row):
    ''' Convert the strings of a CSV row to typed values
    '''
    parsed = dict(row)
    for name in INT_FIELDS:
        parsed[name] = int(row[name])
    for name in FLOAT_FIELDS:
        parsed[name] = float(row[name])
    parsed['terminated'] = row['terminated'] in ('1', 'True', 'true', True, 1)
    return parsed


def _mean(values):
    values = list(values)
    return math.fsum(values) / len(values) if values else 0.0


def _std(values):
    values = list(values)
    if len(values) < 2:
        return 0.0
    m = _mean(values)
    return math.sqrt(math.fsum((v - m) ** 2 for v in values) / (len(values) - 1))


def _with_global(per_agent):
    out = OrderedDict(per_agent)
    out['global'] = per_agent['retailer'] + per_agent['factory']
    return out


@dataclass
class ReplicateMetrics:
    ''' Metrics of one replicate over a set of episodes
    '''
    episodes: int = 0
    days: int = 0
    reward: Dict[str, float] = field(default_factory=dict)
    reward_shaped: Dict[str, float] = field(default_factory=dict)
    reward_per_day: Dict[str, float] = field(default_factory=dict)
    mean_inventory: Dict[str, float] = field(default_factory=dict)
    stockout_rate: Dict[str, float] = field(default_factory=dict)
    backlog_rate: Dict[str, float] = field(default_factory=dict)
    kind_counts: Dict[str, int] = field(default_factory=dict)

    @property
    def is_empty(self):
        return self.episodes == 0

    def kind_frequencies(self):
        total = sum(self.kind_counts.values())
        if total == 0:
            return {}
        return {kind: count / total for kind, count in sorted(self.kind_counts.items())}

    def to_dict(self):
        return asdict(self)


def replicate_metrics(rows, collaborative=False, mixed=False):
    ''' Metrics of one replicate

    Args:
        rows (iterable): typed trajectory rows (dicts), in file order
        collaborative (boolean): headline reward is the adjusted one when True
        mixed (boolean): count the communication kinds

    Returns:
        (ReplicateMetrics): empty when there are no rows
    '''
    episodes = OrderedDict()
    for row in rows:
        episodes.setdefault(row['episode'], []).append(row)
    metrics = ReplicateMetrics(episodes=len(episodes))
    if not episodes:
        return metrics

    all_rows = [row for ep in episodes.values() for row in ep]
    metrics.days = len(all_rows)
    headline = 'adjusted' if collaborative else 'base'
    for name, kind in (('reward', headline), ('reward_shaped', 'shaped')):
        per_agent = OrderedDict()
        for agent in AGENTS:
            column = 'reward_{}_{}'.format(agent, kind)
            per_agent[agent] = _mean(math.fsum(r[column] for r in ep) for ep in episodes.values())
        setattr(metrics, name, _with_global(per_agent))
    per_day = OrderedDict()
    for agent in AGENTS:
        column = 'reward_{}_{}'.format(agent, headline)
        per_day[agent] = math.fsum(r[column] for r in all_rows) / metrics.days
    metrics.reward_per_day = _with_global(per_day)

    for agent in AGENTS:
        metrics.mean_inventory[agent] = _mean(r['{}_inventory'.format(agent)] for r in all_rows)
        metrics.stockout_rate[agent] = sum(1 for r in all_rows if r['{}_stockout_qty'.format(agent)] > 0) / metrics.days
        metrics.backlog_rate[agent] = sum(1 for r in all_rows if r['{}_backlog_qty'.format(agent)] > 0) / metrics.days

    if mixed:
        counts = {kind.value: 0 for kind in MIXED_CHOICES}
        for r in all_rows:
            if r['omega_scenario_chosen'] not in counts:
                raise SchemaError('mixed run logged kind {!r}'.format(r['omega_scenario_chosen']))
            counts[r['omega_scenario_chosen']] += 1
        metrics.kind_counts = counts
    return metrics


@dataclass
class MetricsSummary:
    ''' Replicate-level metrics of one (demand, scheme, scenario) cell, averaged over replicates
    '''
    demand: str
    reward_scheme: str
    scenario: str
    replicates: int = 0
    reward_mean: Dict[str, float] = field(default_factory=dict)
    reward_std: Dict[str, float] = field(default_factory=dict)
    reward_shaped_mean: Dict[str, float] = field(default_factory=dict)
    reward_per_day_mean: Dict[str, float] = field(default_factory=dict)
    mean_inventory: Dict[str, float] = field(default_factory=dict)
    stockout_rate: Dict[str, float] = field(default_factory=dict)
    backlog_rate: Dict[str, float] = field(default_factory=dict)
    kind_percentages: Dict[str, float] = field(default_factory=dict)
    per_replicate: List[dict] = field(default_factory=list)

    @property
    def key(self):
        return (self.demand, self.reward_scheme, self.scenario)

    @property
    def is_empty(self):
        return self.replicates == 0

    def to_dict(self):
        return asdict(self)


def summarize(metrics, demand, reward_scheme, scenario):
    ''' Average replicate metrics. Empty replicates are left out.

    Raises:
        SchemaError: if global != retailer + factory for a replicate
    '''
    metrics = [m for m in metrics if not m.is_empty]
    summary = MetricsSummary(demand, reward_scheme, scenario, replicates=len(metrics))
    summary.per_replicate = [m.to_dict() for m in metrics]
    if not metrics:
        return summary

    for m in metrics:
        for rewards in (m.reward, m.reward_shaped, m.reward_per_day):
            if abs(rewards['global'] - (rewards['retailer'] + rewards['factory'])) > GLOBAL_TOLERANCE:
                raise SchemaError('global reward is not retailer + factory')

    def average(attr, keys):
        return OrderedDict((k, _mean(getattr(m, attr)[k] for m in metrics)) for k in keys)

    summary.reward_mean = average('reward', REWARD_ROWS)
    summary.reward_std = OrderedDict((k, _std(m.reward[k] for m in metrics)) for k in REWARD_ROWS)
    summary.reward_shaped_mean = average('reward_shaped', REWARD_ROWS)
    summary.reward_per_day_mean = average('reward_per_day', REWARD_ROWS)
    summary.mean_inventory = average('mean_inventory', AGENTS)
    summary.stockout_rate = average('stockout_rate', AGENTS)
    summary.backlog_rate = average('backlog_rate', AGENTS)

    counts = {}
    for m in metrics:
        for kind, count in m.kind_counts.items():
            counts[kind] = counts.get(kind, 0) + count
    total = sum(counts.values())
    if total:
        summary.kind_percentages = OrderedDict(
            (kind.value, 100.0 * counts.get(kind.value, 0) / total) for kind in MIXED_CHOICES)
    return summary
