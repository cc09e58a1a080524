import contextlib
import io
import json
import os
import tempfile
import unittest

from rlsupply.cli import EXIT_ERROR, EXIT_INCOMPLETE, main, parse_grid
from rlsupply.games.supplychain.supply_chain_error import SupplyChainError

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestCli(unittest.TestCase):

    def test_parse_grid(self):
        all_scenarios = ('no_comms', 'truth', 'lying', 'mixed')
        self.assertEqual(parse_grid('high:baseline,collaborative'),
                         (('high',), ('baseline', 'collaborative'), all_scenarios))
        self.assertEqual(parse_grid(None), (('high', 'low'), ('baseline', 'collaborative'), all_scenarios))
        self.assertEqual(parse_grid('low:collaborative:lying,no_comms'),
                         (('low',), ('collaborative',), ('no_comms', 'lying')))
        self.assertEqual(parse_grid('constant::'), (('constant',), ('baseline', 'collaborative'), all_scenarios))
        with self.assertRaises(SupplyChainError):
            parse_grid('high')
        with self.assertRaises(SupplyChainError):
            parse_grid('medium:baseline')
        with self.assertRaises(SupplyChainError):
            parse_grid('high:baseline:gossip')
        with self.assertRaises(SupplyChainError):
            parse_grid('high:baseline:truth:extra')

    def test_report_scenario_axis(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, _, _ = run(['train', '--config', os.path.join(FIXTURES, 'tiny_experiment.ini'),
                              '--replicates', '1', '--out', os.path.join(tmp, 'run')])
            self.assertEqual(code, 0)
            out = os.path.join(tmp, 'tables')
            code, _, _ = run(['report', '--in', tmp, '--out', out, '--grid', 'low:collaborative:truth',
                              '--format', 'csv'])
            self.assertEqual(code, 0)
            with open(os.path.join(out, 'low_collaborative_rewards.csv')) as f:
                self.assertEqual(f.readline().strip(), 'agent,Truth')
            self.assertFalse(os.path.exists(os.path.join(out, 'low_collaborative_deltas.csv')))

    def test_train_eval_report(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, 'low_collaborative_truth')
            code, stdout, _ = run(['train', '--config', os.path.join(FIXTURES, 'tiny_experiment.ini'),
                                   '--replicates', '1', '--out', out])
            self.assertEqual(code, 0)
            self.assertIn('manifest.json', stdout)

            summary_path = os.path.join(tmp, 'eval.json')
            code, _, _ = run(['eval', '--checkpoint-dir', os.path.join(out, 'replicate_00', 'checkpoints', 'final'),
                              '--episodes', '2', '--out', summary_path])
            self.assertEqual(code, 0)
            with open(summary_path) as f:
                self.assertEqual(json.load(f)['replicates'], 1)

            code, stdout, stderr = run(['report', '--in', tmp, '--out', os.path.join(tmp, 'tables'),
                                        '--grid', 'low:collaborative', '--format', 'csv'])
            self.assertEqual(code, EXIT_INCOMPLETE)
            self.assertIn('low_collaborative_rewards.csv', stdout)
            self.assertIn('incomplete', stderr)

    def test_verify(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'verification.json')
            code, _, _ = run(['verify', '--out', path])
            self.assertEqual(code, 0)
            with open(path) as f:
                self.assertTrue(json.load(f)['passed'])

    def test_errors(self):
        code, _, stderr = run(['train', '--config', os.path.join(FIXTURES, 'missing.ini')])
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn('missing.ini', stderr)
        code, _, stderr = run(['train', '--config', os.path.join(FIXTURES, 'unknown_key.ini')])
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn('env.warehouse_count', stderr)
        with tempfile.TemporaryDirectory() as tmp:
            code, _, _ = run(['eval', '--checkpoint-dir', tmp])
            self.assertEqual(code, EXIT_ERROR)


if __name__ == '__main__':
    unittest.main()
