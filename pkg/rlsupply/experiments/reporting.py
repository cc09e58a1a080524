''' Tables and figures over a set of experiment directories

Each experiment directory (one grid cell: demand x scheme x scenario) is
found through its manifest.json. Tables have the rows Factory, Retailer,
Global and one column per requested communication scenario; cells without
data are written as MISSING.
'''

import csv
import json
import logging
import os
from collections import OrderedDict

from rlsupply.experiments.metrics import REWARD_ROWS, parse_row, replicate_metrics, summarize
from rlsupply.experiments.runner import MANIFEST_FILE, RunManifest
from rlsupply.games.supplychain.communication import CommKind, MIXED_CHOICES
from rlsupply.games.supplychain.demand import DemandRegime
from rlsupply.games.supplychain.supply_chain_error import SchemaError
from rlsupply.utils.logger import TRAJECTORY_FIELDS

log = logging.getLogger(__name__)

MISSING = 'n/a'
DEMANDS = ('high', 'low')
KNOWN_DEMANDS = tuple(r.value for r in DemandRegime)
SCHEMES = ('baseline', 'collaborative')
SCENARIOS = (CommKind.NO_COMMS.value, CommKind.TRUTH.value, CommKind.LYING.value, CommKind.MIXED.value)
SCENARIO_LABELS = {'no_comms': 'NoComms', 'truth': 'Truth', 'lying': 'Lying', 'mixed': 'Mixed'}
ROW_LABELS = {'factory': 'Factory', 'retailer': 'Retailer', 'global': 'Global'}
SERVICE_RATES = ('stockout_rate', 'backlog_rate')


def read_trajectory(path):
    ''' Typed rows of a trajectory file

    Raises:
        FileNotFoundError: naming the file
        SchemaError: on a foreign header or a corrupt row
    '''
    with open(path, newline='') as csvfile:
        reader = csv.reader(csvfile)
        header = next(reader, None)
        if header != TRAJECTORY_FIELDS:
            raise SchemaError('{}: unexpected trajectory header {}'.format(path, header))
        rows = []
        for line, values in enumerate(reader, start=2):
            if len(values) != len(TRAJECTORY_FIELDS):
                raise SchemaError('{}:{}: expected {} columns, got {}'.format(
                    path, line, len(TRAJECTORY_FIELDS), len(values)))
            try:
                rows.append(parse_row(dict(zip(TRAJECTORY_FIELDS, values))))
            except ValueError as e:
                raise SchemaError('{}:{}: {}'.format(path, line, e))
    return rows


def last_episodes(rows, n):
    ''' Rows of the last n episodes only
    '''
    if n is None:
        return rows
    episodes = sorted({row['episode'] for row in rows})
    keep = set(episodes[-n:]) if n > 0 else set()
    return [row for row in rows if row['episode'] in keep]


def discover(in_dir, phase='eval'):
    ''' Trajectory files under in_dir grouped by grid cell

    Returns:
        (dict): (demand, scheme, scenario) -> sorted list of trajectory paths
    '''
    groups = {}
    for root, dirs, files in sorted(os.walk(in_dir)):
        dirs.sort()
        if MANIFEST_FILE not in files:
            continue
        manifest = RunManifest.load(os.path.join(root, MANIFEST_FILE))
        config = manifest.config
        key = (config['demand'], config['reward_scheme'], config['scenario'])
        for rep in manifest.replicates:
            name = os.path.basename(rep.eval_trajectory if phase == 'eval' else rep.trajectory)
            # the manifest may have been moved with its directory
            path = os.path.join(root, os.path.basename(rep.directory), name)
            groups.setdefault(key, []).append(path)
    return {key: sorted(paths) for key, paths in groups.items()}


def aggregate(groups, last_n=None):
    ''' One MetricsSummary per grid cell

    Args:
        groups (dict): (demand, scheme, scenario) -> trajectory paths, one per replicate
        last_n (int): only use the last n episodes of each file

    Returns:
        (dict): (demand, scheme, scenario) -> MetricsSummary
    '''
    summaries = {}
    for key in sorted(groups):
        demand, scheme, scenario = key
        if not groups[key]:
            raise SchemaError('{}: no trajectory files'.format('/'.join(key)))
        metrics = []
        for path in sorted(groups[key]):
            rows = last_episodes(read_trajectory(path), last_n)
            metrics.append(replicate_metrics(rows, collaborative=scheme == 'collaborative',
                                             mixed=scenario == CommKind.MIXED.value))
        summaries[key] = summarize(metrics, demand, scheme, scenario)
    return summaries


def _fmt(value):
    return '{:.2f}'.format(value)


def _write_table(path_base, header, rows, formats):
    ''' Write rows as CSV and as an aligned text table
    '''
    paths = []
    if 'csv' in formats:
        with open(path_base + '.csv', 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
        paths.append(path_base + '.csv')
    if 'txt' in formats:
        widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
        with open(path_base + '.txt', 'w') as f:
            for r in [header] + rows:
                f.write('  '.join(str(v).rjust(w) for v, w in zip(r, widths)).rstrip() + '\n')
        paths.append(path_base + '.txt')
    return paths


def _present(summary):
    return summary is not None and not summary.is_empty


def _compared(scenarios):
    return [s for s in scenarios if s != CommKind.NO_COMMS.value]


def reward_table(summaries, demand, scheme, attr='reward_mean', scenarios=SCENARIOS):
    ''' Rows Factory/Retailer/Global, columns scenarios, 'mean +/- std' cells

    Returns:
        (tuple): header, rows, and whether every cell was present
    '''
    header = ['agent'] + [SCENARIO_LABELS[s] for s in scenarios]
    complete = True
    rows = []
    for agent in REWARD_ROWS:
        row = [ROW_LABELS[agent]]
        for scenario in scenarios:
            summary = summaries.get((demand, scheme, scenario))
            if not _present(summary):
                row.append(MISSING)
                complete = False
            elif attr == 'reward_mean':
                row.append('{} +/- {}'.format(_fmt(summary.reward_mean[agent]), _fmt(summary.reward_std[agent])))
            else:
                row.append(_fmt(getattr(summary, attr)[agent]))
        rows.append(row)
    return header, rows, complete


def deltas(summaries, demand, scheme, scenarios=SCENARIOS, percent=False):
    ''' Numeric deltas vs NoComms: scenario -> agent -> delta, None where missing

    With percent the delta is divided by |NoComms| and given in percent; it
    is None where the NoComms reward is zero.
    '''
    base = summaries.get((demand, scheme, CommKind.NO_COMMS.value))
    out = OrderedDict()
    for scenario in _compared(scenarios):
        summary = summaries.get((demand, scheme, scenario))
        out[scenario] = OrderedDict()
        for agent in REWARD_ROWS:
            value = None
            if _present(base) and _present(summary):
                value = summary.reward_mean[agent] - base.reward_mean[agent]
                if percent:
                    reference = abs(base.reward_mean[agent])
                    value = 100.0 * value / reference if reference else None
            out[scenario][agent] = value
    return out


def delta_table(summaries, demand, scheme, scenarios=SCENARIOS, percent=False):
    ''' Each scenario minus NoComms, per agent
    '''
    d = deltas(summaries, demand, scheme, scenarios, percent)
    header = ['agent'] + ['{}-NoComms{}'.format(SCENARIO_LABELS[s], ' %' if percent else '') for s in d]
    base = summaries.get((demand, scheme, CommKind.NO_COMMS.value))
    complete = all(_present(base) and _present(summaries.get((demand, scheme, s))) for s in d)
    rows = [[ROW_LABELS[agent]] + [MISSING if d[s][agent] is None else _fmt(d[s][agent]) for s in d]
            for agent in REWARD_ROWS]
    return header, rows, complete


def inventory_table(summaries, demand, schemes=SCHEMES, scenarios=SCENARIOS):
    header = ['scheme', 'agent'] + [SCENARIO_LABELS[s] for s in scenarios]
    complete = True
    rows = []
    for scheme in schemes:
        for agent in ('factory', 'retailer'):
            row = [scheme, ROW_LABELS[agent]]
            for scenario in scenarios:
                summary = summaries.get((demand, scheme, scenario))
                if not _present(summary):
                    row.append(MISSING)
                    complete = False
                else:
                    row.append(_fmt(summary.mean_inventory[agent]))
            rows.append(row)
    return header, rows, complete


def service_table(summaries, demand, schemes=SCHEMES, scenarios=SCENARIOS):
    ''' Share of days with a stockout and with a backlog, per scheme and agent
    '''
    header = ['scheme', 'agent', 'rate'] + [SCENARIO_LABELS[s] for s in scenarios]
    rows = []
    for scheme in schemes:
        for agent in ('factory', 'retailer'):
            for rate in SERVICE_RATES:
                row = [scheme, ROW_LABELS[agent], rate]
                for scenario in scenarios:
                    summary = summaries.get((demand, scheme, scenario))
                    if not _present(summary):
                        row.append(MISSING)
                    else:
                        row.append('{:.2f}%'.format(100.0 * getattr(summary, rate)[agent]))
                rows.append(row)
    return header, rows


def mixed_table(summaries, demands=DEMANDS, schemes=SCHEMES):
    ''' How often the factory chose each kind under Mixed, with the rewards of those runs
    '''
    header = (['demand', 'scheme'] + [SCENARIO_LABELS[k.value] for k in MIXED_CHOICES]
              + [ROW_LABELS[agent] for agent in REWARD_ROWS])
    rows = []
    for demand in demands:
        for scheme in schemes:
            summary = summaries.get((demand, scheme, CommKind.MIXED.value))
            if summary is None or not summary.kind_percentages:
                continue
            rows.append([demand, scheme]
                        + ['{:.2f}%'.format(summary.kind_percentages[k.value]) for k in MIXED_CHOICES]
                        + [_fmt(summary.reward_mean[agent]) for agent in REWARD_ROWS])
    return header, rows


def render_tables(summaries, out_dir, demands=DEMANDS, schemes=SCHEMES, formats=('csv', 'txt'),
                  scenarios=SCENARIOS):
    ''' Write the reward, delta, inventory, service and mixed-strategy tables plus summary.json

    Returns:
        (tuple): list of written paths, and True if the requested grid was complete
    '''
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    complete = True

    def write(name, header, rows):
        return _write_table(os.path.join(out_dir, name), header, rows, formats)

    for demand in demands:
        for scheme in schemes:
            prefix = '{}_{}'.format(demand, scheme)
            header, rows, ok = reward_table(summaries, demand, scheme, scenarios=scenarios)
            paths += write(prefix + '_rewards', header, rows)
            complete = complete and ok
            if scheme == 'collaborative':
                header, rows, _ = reward_table(summaries, demand, scheme, 'reward_shaped_mean', scenarios)
                paths += write(prefix + '_rewards_shaped', header, rows)
            header, rows, _ = reward_table(summaries, demand, scheme, 'reward_per_day_mean', scenarios)
            paths += write(prefix + '_rewards_per_day', header, rows)
            if CommKind.NO_COMMS.value in scenarios:
                header, rows, ok = delta_table(summaries, demand, scheme, scenarios)
                paths += write(prefix + '_deltas', header, rows)
                complete = complete and ok
                header, rows, _ = delta_table(summaries, demand, scheme, scenarios, percent=True)
                paths += write(prefix + '_deltas_percent', header, rows)
        header, rows, _ = inventory_table(summaries, demand, schemes, scenarios)
        paths += write('{}_inventory'.format(demand), header, rows)
        header, rows = service_table(summaries, demand, schemes, scenarios)
        paths += write('{}_service_rates'.format(demand), header, rows)
    header, rows = mixed_table(summaries, demands, schemes)
    paths += write('mixed_breakdown', header, rows)

    summary_path = os.path.join(out_dir, 'summary.json')
    with open(summary_path, 'w') as jsonfile:
        json.dump({'cells': [summaries[key].to_dict() for key in sorted(summaries)], 'complete': complete},
                  jsonfile, indent=4, sort_keys=True)
    paths.append(summary_path)
    if not complete:
        log.warning('report grid is incomplete, missing cells are marked %s', MISSING)
    return paths, complete


def _bar_chart(path, title, groups, series, ylabel):
    ''' groups: x labels; series: label -> list of heights (None drawn as 0)
    '''
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt
    import numpy as np

    with plt.rc_context({'svg.hashsalt': 'rlsupply', 'svg.fonttype': 'none'}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        x = np.arange(len(groups))
        width = 0.8 / max(len(series), 1)
        for i, (label, heights) in enumerate(series.items()):
            values = [0.0 if h is None else h for h in heights]
            ax.bar(x + (i - (len(series) - 1) / 2.0) * width, values, width, label=label)
        ax.axhline(0.0, color='black', linewidth=0.8)
        ax.set_xticks(x)
        ax.set_xticklabels(groups)
        ax.set(ylabel=ylabel, title=title)
        ax.legend(fontsize='small')
        fig.tight_layout()
        fig.savefig(path, format='svg', metadata={'Date': None})
        plt.close(fig)
    return path


def _per_scenario(summaries, demand, scheme, scenarios, value):
    heights = []
    for scenario in scenarios:
        summary = summaries.get((demand, scheme, scenario))
        heights.append(value(summary) if _present(summary) else None)
    return heights


def render_plots(summaries, out_dir, demands=DEMANDS, schemes=SCHEMES, scenarios=SCENARIOS):
    ''' SVG bar charts: deltas vs NoComms per (demand, scheme), and mean
    inventory and service rates per demand

    Returns:
        (list): written paths
    '''
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    groups = [SCENARIO_LABELS[s] for s in scenarios]
    for demand in demands:
        for scheme in schemes:
            if CommKind.NO_COMMS.value not in scenarios:
                continue
            d = deltas(summaries, demand, scheme, scenarios)
            series = OrderedDict((ROW_LABELS[a], [d[s][a] for s in d]) for a in REWARD_ROWS)
            paths.append(_bar_chart(os.path.join(out_dir, '{}_{}_deltas.svg'.format(demand, scheme)),
                                    '{} demand, {} rewards vs NoComms'.format(demand, scheme),
                                    [SCENARIO_LABELS[s] for s in d], series, 'reward difference per episode'))
        series = OrderedDict()
        for scheme in schemes:
            for agent in ('factory', 'retailer'):
                series['{} {}'.format(scheme, agent)] = _per_scenario(
                    summaries, demand, scheme, scenarios, lambda s: s.mean_inventory[agent])
        paths.append(_bar_chart(os.path.join(out_dir, '{}_inventory.svg'.format(demand)),
                                '{} demand, mean inventory'.format(demand), groups, series, 'units'))
        series = OrderedDict()
        for scheme in schemes:
            for agent in ('factory', 'retailer'):
                for rate in SERVICE_RATES:
                    series['{} {} {}'.format(scheme, agent, rate.split('_')[0])] = _per_scenario(
                        summaries, demand, scheme, scenarios, lambda s: 100.0 * getattr(s, rate)[agent])
        paths.append(_bar_chart(os.path.join(out_dir, '{}_service_rates.svg'.format(demand)),
                                '{} demand, days with a stockout or backlog'.format(demand), groups, series,
                                'percent of days'))
    return paths


def report(in_dir, out_dir, demands=DEMANDS, schemes=SCHEMES, formats=('csv', 'txt'), plots=False,
           phase='eval', last_n=None, scenarios=SCENARIOS):
    ''' Discover, aggregate and render

    Returns:
        (tuple): written paths, and True if the requested grid was complete
    '''
    groups = discover(in_dir, phase)
    groups = {k: v for k, v in groups.items() if k[0] in demands and k[1] in schemes and k[2] in scenarios}
    summaries = aggregate(groups, last_n)
    paths, complete = render_tables(summaries, out_dir, demands, schemes, formats, scenarios)
    if plots:
        paths += render_plots(summaries, out_dir, demands, schemes, scenarios)
    return paths, complete
