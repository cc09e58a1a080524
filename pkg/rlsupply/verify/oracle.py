''' Brute-force oracle for the supply chain dynamics and rewards

The day logic here is written separately from rlsupply.games.supplychain and
shares none of its code: quantities are plain integers, currency is Decimal.
Every joint action sequence of a tiny instance is enumerated and replayed
through the game's step function, and the two are compared field by field.
'''

import itertools
import json
import logging
from dataclasses import dataclass, field, asdict
from decimal import Decimal
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from rlsupply.games.supplychain import game as env_core
from rlsupply.games.supplychain.communication import CommKind
from rlsupply.games.supplychain.judger import RewardScheme, SupplyChainJudger
from rlsupply.games.supplychain.params import EnvParams
from rlsupply.games.supplychain.supply_chain_error import SizeError

log = logging.getLogger(__name__)

MAX_SEQUENCES = 10 ** 6
CURRENCY_TOLERANCE = 1e-9
FIXED_SCENARIOS = (CommKind.NO_COMMS, CommKind.TRUTH, CommKind.LYING)


def _dec(x):
    return Decimal(repr(float(x))) if not isinstance(x, int) else Decimal(x)


@dataclass(frozen=True)
class TinyInstance:
    ''' An instance small enough to enumerate

    Attributes:
        name (str): label in reports
        horizon (int): days per sequence, 1 to 3
        retailer_orders (tuple): the retailer's choices each day
        factory_orders (tuple): the factory's choices each day
        demands (tuple): customer demand of each day
        params (EnvParams): environment constants
        shaping_coeffs (tuple): retailer and factory cross-penalty coefficients
    '''
    name: str
    horizon: int
    retailer_orders: Tuple[int, ...]
    factory_orders: Tuple[int, ...]
    demands: Tuple[int, ...]
    params: EnvParams = field(default_factory=EnvParams)
    shaping_coeffs: Tuple[float, float] = (10.0, 20.0)

    @property
    def num_sequences(self):
        return (len(self.retailer_orders) * len(self.factory_orders)) ** self.horizon

    def sequences(self):
        if self.horizon < 1 or len(self.demands) < self.horizon:
            raise SizeError('{}: needs horizon >= 1 and one demand per day'.format(self.name))
        if self.num_sequences > MAX_SEQUENCES:
            raise SizeError('{}: {} joint action sequences exceed {}'.format(
                self.name, self.num_sequences, MAX_SEQUENCES))
        day_actions = list(itertools.product(self.retailer_orders, self.factory_orders))
        return itertools.product(day_actions, repeat=self.horizon)


@dataclass
class OracleDay:
    shipped: int
    retailer_inventory: int
    factory_inventory: int
    retailer_backlog: int
    factory_backlog: int
    retailer_stockout: int
    factory_stockout: int
    retailer_base: Decimal
    factory_base: Decimal
    retailer_shaped: Decimal
    factory_shaped: Decimal
    terminated: bool


@dataclass
class OracleTrace:
    sequence: tuple
    days: List[OracleDay]

    def returns(self, shaped=False):
        if shaped:
            return (sum((d.retailer_shaped for d in self.days), Decimal(0)),
                    sum((d.factory_shaped for d in self.days), Decimal(0)))
        return (sum((d.retailer_base for d in self.days), Decimal(0)),
                sum((d.factory_base for d in self.days), Decimal(0)))


def simulate(instance, sequence):
    ''' Play one joint action sequence by hand

    Returns:
        (OracleTrace): one OracleDay per simulated day; stops at termination
    '''
    p = instance.params
    price_r, price_f = _dec(p.sale_price_retailer), _dec(p.sale_price_factory)
    buy_r, buy_f = _dec(p.order_cost_retailer), _dec(p.order_cost_factory)
    hold = _dec(p.holding_cost)
    short_r, short_f = _dec(p.stockout_cost_retailer), _dec(p.stockout_cost_factory)
    over = _dec(p.backlog_cost)
    k_r, k_f = _dec(instance.shaping_coeffs[0]), _dec(instance.shaping_coeffs[1])

    inv_r = inv_f = p.initial_inventory
    events_r = events_f = 0
    yesterday_demand = yesterday_order = 0
    days = []
    for t, (q1, q2) in enumerate(sequence):
        d = instance.demands[t]

        # factory: receive, then ship what it can
        on_hand_f = inv_f + q2
        shipped = q1 if q1 <= on_hand_f else on_hand_f
        unmet_f = q1 - shipped
        inv_f = on_hand_f - shipped

        # retailer: receive, then sell what it can; the rest is lost
        on_hand_r = inv_r + shipped
        sold = d if d <= on_hand_r else on_hand_r
        unmet_r = d - sold
        inv_r = on_hand_r - sold

        over_cap_r = inv_r - p.capacity_retailer if inv_r > p.capacity_retailer else 0
        over_cap_f = inv_f - p.capacity_factory if inv_f > p.capacity_factory else 0
        over_thr_r = inv_r - p.backlog_penalty_threshold_retailer if inv_r > p.backlog_penalty_threshold_retailer else 0
        over_thr_f = inv_f - p.backlog_penalty_threshold_factory if inv_f > p.backlog_penalty_threshold_factory else 0

        base_r = price_r * yesterday_demand - hold * inv_r - buy_r * q1 - short_r * unmet_r - over * over_thr_r
        base_f = price_f * yesterday_order - hold * inv_f - buy_f * q2 - short_f * unmet_f - over * over_thr_f

        events_r += 1 if unmet_r else 0
        events_f += 1 if unmet_f else 0
        done = (events_r > p.max_stockout_events or events_f > p.max_stockout_events
                or t + 1 >= p.episode_length)

        days.append(OracleDay(shipped, inv_r, inv_f, over_cap_r, over_cap_f, unmet_r, unmet_f,
                              base_r, base_f, base_r - k_r * unmet_f, base_f - k_f * unmet_r, done))
        yesterday_demand, yesterday_order = d, q1
        if done:
            break
    return OracleTrace(tuple(sequence), days)


def enumerate_returns(instance):
    ''' Undiscounted returns of every joint action sequence

    Returns:
        (dict): sequence -> {'base': (retailer, factory), 'shaped': (retailer, factory)} in Decimal

    Raises:
        SizeError: when the instance has more than 10**6 sequences
    '''
    table = {}
    for sequence in instance.sequences():
        trace = simulate(instance, sequence)
        table[trace.sequence] = {'base': trace.returns(), 'shaped': trace.returns(shaped=True)}
    return table


@dataclass
class CrossCheckReport:
    name: str
    scheme: str
    scenario: str
    sequences: int = 0
    mismatches: List[dict] = field(default_factory=list)

    @property
    def passed(self):
        return not self.mismatches

    def to_dict(self):
        values = asdict(self)
        values['passed'] = self.passed
        return values


INTEGER_FIELDS = (
    ('shipped_to_retailer', 'shipped'),
    ('retailer_inventory', 'retailer_inventory'),
    ('factory_inventory', 'factory_inventory'),
    ('retailer_backlog_qty', 'retailer_backlog'),
    ('factory_backlog_qty', 'factory_backlog'),
    ('retailer_stockout_qty', 'retailer_stockout'),
    ('factory_stockout_qty', 'factory_stockout'),
    ('terminated', 'terminated'),
)


def _currency_fields(scheme):
    fields = [('reward_retailer_base', 'retailer_base'), ('reward_factory_base', 'factory_base')]
    if scheme.is_collaborative:
        fields += [('reward_retailer_shaped', 'retailer_shaped'), ('reward_factory_shaped', 'factory_shaped'),
                   ('reward_retailer_adjusted', 'retailer_base'), ('reward_factory_adjusted', 'factory_base')]
    return fields


def replay(instance, sequence, scheme, scenario, env_params=None, comm_seed=0):
    ''' Play a sequence through the game's step function

    Returns:
        (list): StepRecords
    '''
    params = instance.params if env_params is None else env_params
    judger = SupplyChainJudger(params, scheme)
    comm_rng = np.random.RandomState(comm_seed)
    state = env_core.reset(params)
    records = []
    for t, (q1, q2) in enumerate(sequence):
        state, record = env_core.step(state, env_core.ActionPair(q1, q2, scenario), instance.demands[t],
                                      params, judger, comm_rng)
        records.append(record)
        if state.terminated:
            break
    return records


def cross_check(instance, scheme='baseline', scenario=CommKind.NO_COMMS, env_params=None, max_mismatches=50):
    ''' Compare the game with the oracle on every sequence of the instance

    Args:
        instance (TinyInstance): the instance
        scheme (str or RewardScheme): reward scheme of the game
        scenario (CommKind): a fixed communication scenario
        env_params (EnvParams): parameters given to the game instead of the
            instance's, to check that the harness notices a difference
        max_mismatches (int): stop collecting after this many

    Returns:
        (CrossCheckReport)
    '''
    if not isinstance(scheme, RewardScheme):
        scheme = RewardScheme(scheme, *instance.shaping_coeffs)
    scenario = CommKind(scenario)
    report = CrossCheckReport(instance.name, scheme.kind.value, scenario.value)
    currency = _currency_fields(scheme)
    for sequence in instance.sequences():
        report.sequences += 1
        trace = simulate(instance, sequence)
        records = replay(instance, sequence, scheme, scenario, env_params)
        if len(records) != len(trace.days):
            report.mismatches.append({'sequence': list(sequence), 'day': min(len(records), len(trace.days)),
                                      'field': 'episode_length', 'env': len(records), 'oracle': len(trace.days)})
        for day, (record, expected) in enumerate(zip(records, trace.days)):
            diffs = []
            for env_name, oracle_name in INTEGER_FIELDS:
                if getattr(record, env_name) != getattr(expected, oracle_name):
                    diffs.append((env_name, getattr(record, env_name), getattr(expected, oracle_name)))
            for env_name, oracle_name in currency:
                want = float(Fraction(getattr(expected, oracle_name)))
                if abs(getattr(record, env_name) - want) > CURRENCY_TOLERANCE:
                    diffs.append((env_name, getattr(record, env_name), want))
            for name, got, want in diffs:
                report.mismatches.append({'sequence': [list(a) for a in sequence], 'day': day, 'field': name,
                                          'env': got, 'oracle': want, 'record': asdict(record)})
            if diffs:
                break
        if len(report.mismatches) >= max_mismatches:
            break
    log.info('%s/%s/%s: %d sequences, %d mismatches', report.name, report.scheme, report.scenario,
             report.sequences, len(report.mismatches))
    return report


def communication_neutrality(instance, scheme='baseline'):
    ''' Rewards and quantities of the game must not depend on the fixed scenario

    Returns:
        (list): sequences whose records differ between scenarios, ignoring the communicated slot
    '''
    if not isinstance(scheme, RewardScheme):
        scheme = RewardScheme(scheme, *instance.shaping_coeffs)
    ignored = {'omega_scenario_chosen', 'communicated_inventory'}
    differing = []
    for sequence in instance.sequences():
        runs = []
        for scenario in FIXED_SCENARIOS:
            records = replay(instance, sequence, scheme, scenario)
            runs.append([{k: v for k, v in asdict(r).items() if k not in ignored} for r in records])
        if any(run != runs[0] for run in runs[1:]):
            differing.append([list(a) for a in sequence])
    return differing


def canonical_suite():
    ''' The tiny instances every build must pass
    '''
    return [
        TinyInstance('single_day', 1, (0, 5, 10), (0, 5, 10), (0,)),
        TinyInstance('steady_two_days', 2, (0, 10), (0, 10), (10, 10)),
        TinyInstance('three_days_mixed_demand', 3, (0, 5, 10), (0, 10, 20), (3, 12, 7)),
        TinyInstance('early_termination', 3, (0, 20), (0, 20), (15, 15, 15),
                     params=EnvParams(initial_inventory=2, max_stockout_events=1)),
    ]


def run_suite(instances=None, schemes=('baseline', 'collaborative'), scenarios=FIXED_SCENARIOS):
    ''' Cross-check every instance under every scheme and fixed scenario

    Returns:
        (dict): {'instances': [...], 'neutrality': [...], 'passed': bool}
    '''
    instances = canonical_suite() if instances is None else instances
    results = []
    neutrality = []
    for instance in instances:
        for scheme in schemes:
            for scenario in scenarios:
                results.append(cross_check(instance, scheme, scenario).to_dict())
            differing = communication_neutrality(instance, scheme)
            neutrality.append({'name': instance.name, 'scheme': scheme, 'differing_sequences': differing[:20],
                               'passed': not differing})
    passed = all(r['passed'] for r in results) and all(n['passed'] for n in neutrality)
    return {'instances': results, 'neutrality': neutrality, 'passed': passed}


def write_report(report, path):
    with open(path, 'w') as jsonfile:
        json.dump(report, jsonfile, indent=4, sort_keys=True)
    return path
