''' Command line entry point: train, eval, verify and report

    rlsupply train --config configs/low_collaborative_truth.ini --replicates 2 --out results/run
    rlsupply eval --checkpoint-dir results/run/replicate_00/checkpoints/final --episodes 30
    rlsupply verify --out verification.json
    rlsupply report --in results --out tables --grid high,low:baseline,collaborative --plots
    rlsupply report --in results --out tables --grid low:collaborative:no_comms,truth,lying
'''

import argparse
import json
import logging
import os
import sys

from termcolor import colored

from rlsupply.games.supplychain.supply_chain_error import SupplyChainError, VerificationError

EXIT_ERROR = 1
EXIT_VERIFICATION = 2
EXIT_INCOMPLETE = 3


def _error(message):
    print(colored('error: {}'.format(message), 'red'), file=sys.stderr)


def _warn(message):
    print(colored('warning: {}'.format(message), 'yellow'), file=sys.stderr)


def parse_grid(text):
    ''' Parse 'high,low:baseline,collaborative[:truth,lying]' into (demands, schemes, scenarios)

    An empty or missing axis means all of its default values. Scenarios are
    returned in table column order.
    '''
    from rlsupply.experiments.reporting import DEMANDS, KNOWN_DEMANDS, SCENARIOS, SCHEMES
    if not text:
        return DEMANDS, SCHEMES, SCENARIOS
    parts = text.split(':')
    if len(parts) not in (2, 3):
        raise SupplyChainError('--grid: expected <demands>:<schemes>[:<scenarios>], got {!r}'.format(text))
    axes = [tuple(v for v in part.split(',') if v) for part in parts] + [()]
    demands, schemes, scenarios = axes[:3]
    for name, values, known in (('demand', demands, KNOWN_DEMANDS), ('reward scheme', schemes, SCHEMES),
                                ('scenario', scenarios, SCENARIOS)):
        for value in values:
            if value not in known:
                raise SupplyChainError('--grid: unknown {} {!r}'.format(name, value))
    scenarios = tuple(s for s in SCENARIOS if s in scenarios)
    return demands or DEMANDS, schemes or SCHEMES, scenarios or SCENARIOS


def cmd_train(args):
    from rlsupply.experiments.config import ExperimentConfig, load_config
    from rlsupply.experiments.runner import run_experiment

    config = load_config(args.config) if args.config else ExperimentConfig()
    config = config.with_overrides(replicates=args.replicates, seed_base=args.seed_base, output_dir=args.out,
                                   total_days=args.total_days, workers=args.workers)
    manifest = run_experiment(config, args.config)
    print('manifest: {}'.format(os.path.join(config.output_dir, 'manifest.json')))
    print('summary: {}'.format(manifest.summary_path))
    return 0


def cmd_eval(args):
    from rlsupply.experiments.config import load_config
    from rlsupply.experiments.runner import evaluate

    config = load_config(args.config) if args.config else None
    summary = evaluate(args.checkpoint_dir, config=config, eval_episodes=args.episodes, seed=args.seed,
                       trajectory_path=args.trajectory, policy=args.policy)
    text = json.dumps(summary.to_dict(), indent=4, sort_keys=True)
    if args.out:
        with open(args.out, 'w') as f:
            f.write(text)
        print('summary: {}'.format(args.out))
    else:
        print(text)
    return 0


def cmd_verify(args):
    from rlsupply.verify.oracle import run_suite, write_report

    report = run_suite()
    if args.out:
        write_report(report, args.out)
        print('report: {}'.format(args.out))
    failed = [r for r in report['instances'] if not r['passed']]
    for r in failed:
        _error('{}/{}/{}: {} mismatches, first: {}'.format(
            r['name'], r['scheme'], r['scenario'], len(r['mismatches']),
            {k: v for k, v in r['mismatches'][0].items() if k != 'record'}))
    for n in report['neutrality']:
        if not n['passed']:
            _error('{}/{}: rewards depend on the communication scenario'.format(n['name'], n['scheme']))
    if not report['passed']:
        raise VerificationError('{} of {} cross-checks failed'.format(len(failed), len(report['instances'])))
    print('verified {} cross-checks, 0 mismatches'.format(len(report['instances'])))
    return 0


def cmd_report(args):
    from rlsupply.experiments.reporting import report

    demands, schemes, scenarios = parse_grid(args.grid)
    formats = tuple(args.format) if args.format else ('csv', 'txt')
    paths, complete = report(args.in_dir, args.out, demands, schemes, formats, plots=args.plots,
                             phase=args.phase, last_n=args.last_episodes, scenarios=scenarios)
    for path in paths:
        print(path)
    if not complete:
        _warn('grid is incomplete, missing cells are marked n/a')
        return EXIT_INCOMPLETE
    return 0


def build_parser():
    parser = argparse.ArgumentParser('rlsupply', description='Two-echelon supply chain MARL lab')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    train = subparsers.add_parser('train', help='train replicates of one experiment')
    train.add_argument('--config', type=str, default=None, help='experiment INI file')
    train.add_argument('--replicates', type=int, default=None)
    train.add_argument('--seed-base', type=int, default=None)
    train.add_argument('--out', type=str, default=None, help='output directory')
    train.add_argument('--total-days', type=int, default=None)
    train.add_argument('--workers', type=int, default=None)
    train.set_defaults(func=cmd_train)

    ev = subparsers.add_parser('eval', help='evaluate a checkpoint set')
    ev.add_argument('--checkpoint-dir', type=str, default=None, help='required for the sac policy')
    ev.add_argument('--episodes', type=int, default=None)
    ev.add_argument('--config', type=str, default=None, help='defaults to the config.ini of the run')
    ev.add_argument('--policy', type=str, choices=['sac', 'base-stock', 'constant-order'], default='sac')
    ev.add_argument('--seed', type=int, default=None)
    ev.add_argument('--trajectory', type=str, default=None, help='write evaluation days to this CSV')
    ev.add_argument('--out', type=str, default=None, help='write the summary JSON here')
    ev.set_defaults(func=cmd_eval)

    verify = subparsers.add_parser('verify', help='cross-check the env against the brute-force oracle')
    verify.add_argument('--out', type=str, default=None, help='write the JSON report here')
    verify.set_defaults(func=cmd_verify)

    rep = subparsers.add_parser('report', help='render tables and plots from experiment directories')
    rep.add_argument('--in', dest='in_dir', type=str, required=True)
    rep.add_argument('--out', type=str, required=True)
    rep.add_argument('--grid', type=str, default=None,
                     help='<demands>:<schemes>[:<scenarios>], e.g. high,low:baseline:no_comms,truth')
    rep.add_argument('--format', type=str, action='append', choices=['csv', 'txt'])
    rep.add_argument('--plots', action='store_true')
    rep.add_argument('--phase', type=str, choices=['eval', 'train'], default='eval')
    rep.add_argument('--last-episodes', type=int, default=None)
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except VerificationError as e:
        _error(str(e))
        return EXIT_VERIFICATION
    except (SupplyChainError, OSError) as e:
        _error(str(e))
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
