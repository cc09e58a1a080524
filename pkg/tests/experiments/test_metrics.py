import unittest

from rlsupply.experiments.metrics import replicate_metrics, summarize, ReplicateMetrics
from rlsupply.games.supplychain.supply_chain_error import SchemaError


def row(episode, day, base=(1.0, 2.0), shaped=None, inventory=(10, 20), stockout=(0, 0), backlog=(0, 0),
        kind='no_comms'):
    shaped = base if shaped is None else shaped
    return {
        'episode': episode, 'day': day, 'omega_scenario_chosen': kind,
        'reward_retailer_base': base[0], 'reward_factory_base': base[1],
        'reward_retailer_shaped': shaped[0], 'reward_factory_shaped': shaped[1],
        'reward_retailer_adjusted': base[0], 'reward_factory_adjusted': base[1],
        'retailer_inventory': inventory[0], 'factory_inventory': inventory[1],
        'retailer_stockout_qty': stockout[0], 'factory_stockout_qty': stockout[1],
        'retailer_backlog_qty': backlog[0], 'factory_backlog_qty': backlog[1],
    }


class TestReplicateMetrics(unittest.TestCase):

    def test_empty(self):
        metrics = replicate_metrics([])
        self.assertTrue(metrics.is_empty)

    def test_rewards(self):
        rows = [row(0, 0, (1.0, 2.0)), row(0, 1, (3.0, 4.0)), row(1, 0, (-1.0, 0.5))]
        metrics = replicate_metrics(rows)
        self.assertEqual(metrics.episodes, 2)
        self.assertEqual(metrics.days, 3)
        self.assertEqual(metrics.reward['retailer'], 1.5)
        self.assertEqual(metrics.reward['factory'], 3.25)
        self.assertEqual(metrics.reward['global'], 4.75)
        self.assertAlmostEqual(metrics.reward_per_day['retailer'], 1.0)

    def test_collaborative_headline_is_adjusted(self):
        rows = [row(0, 0, (1.0, 2.0), shaped=(-9.0, -18.0))]
        metrics = replicate_metrics(rows, collaborative=True)
        self.assertEqual(metrics.reward['retailer'], 1.0)
        self.assertEqual(metrics.reward_shaped['retailer'], -9.0)

    def test_service_levels(self):
        rows = [row(0, 0, inventory=(4, 30), stockout=(2, 0), backlog=(0, 1)),
                row(0, 1, inventory=(0, 10), stockout=(3, 1)),
                row(0, 2, inventory=(8, 20))]
        metrics = replicate_metrics(rows)
        self.assertEqual(metrics.mean_inventory['retailer'], 4.0)
        self.assertEqual(metrics.mean_inventory['factory'], 20.0)
        self.assertAlmostEqual(metrics.stockout_rate['retailer'], 2.0 / 3.0)
        self.assertAlmostEqual(metrics.stockout_rate['factory'], 1.0 / 3.0)
        self.assertAlmostEqual(metrics.backlog_rate['factory'], 1.0 / 3.0)

    def test_mixed_kinds(self):
        rows = [row(0, 0, kind='truth'), row(0, 1, kind='truth'), row(0, 2, kind='lying'), row(0, 3)]
        metrics = replicate_metrics(rows, mixed=True)
        self.assertEqual(metrics.kind_counts, {'no_comms': 1, 'lying': 1, 'truth': 2})
        self.assertEqual(metrics.kind_frequencies()['truth'], 0.5)
        with self.assertRaises(SchemaError):
            replicate_metrics([row(0, 0, kind='mixed')], mixed=True)


class TestSummarize(unittest.TestCase):

    def test_mean_and_std(self):
        a = replicate_metrics([row(0, 0, (1.0, 1.0))])
        b = replicate_metrics([row(0, 0, (3.0, 1.0))])
        summary = summarize([a, b, ReplicateMetrics()], 'high', 'baseline', 'no_comms')
        self.assertEqual(summary.replicates, 2)
        self.assertEqual(summary.reward_mean['retailer'], 2.0)
        self.assertAlmostEqual(summary.reward_std['retailer'], 2 ** 0.5)
        self.assertEqual(summary.reward_std['factory'], 0.0)
        self.assertEqual(summary.reward_mean['global'], 4.0)
        self.assertEqual(summary.key, ('high', 'baseline', 'no_comms'))

    def test_order_does_not_matter(self):
        ms = [replicate_metrics([row(0, 0, (v, 0.1 * v))]) for v in (0.1, 0.7, 1e6, -3.3)]
        a = summarize(ms, 'low', 'baseline', 'truth')
        b = summarize(list(reversed(ms)), 'low', 'baseline', 'truth')
        self.assertEqual(a.reward_mean, b.reward_mean)

    def test_kind_percentages(self):
        a = replicate_metrics([row(0, 0, kind='truth'), row(0, 1, kind='lying')], mixed=True)
        b = replicate_metrics([row(0, 0, kind='truth'), row(0, 1, kind='truth')], mixed=True)
        summary = summarize([a, b], 'high', 'baseline', 'mixed')
        self.assertEqual(summary.kind_percentages, {'no_comms': 0.0, 'lying': 25.0, 'truth': 75.0})

    def test_empty(self):
        summary = summarize([], 'high', 'baseline', 'mixed')
        self.assertTrue(summary.is_empty)

    def test_global_identity(self):
        m = replicate_metrics([row(0, 0)])
        m.reward['global'] = 100.0
        with self.assertRaises(SchemaError):
            summarize([m], 'high', 'baseline', 'no_comms')


if __name__ == '__main__':
    unittest.main()
