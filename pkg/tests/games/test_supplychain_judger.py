import unittest
from fractions import Fraction

import numpy as np

from rlsupply.games.supplychain.judger import (
    RewardKind,
    RewardScheme,
    SupplyChainJudger,
    comparability_adjust,
    cross_penalties,
    factory_reward_base,
    money,
    retailer_reward_base,
    shaped_rewards,
)
from rlsupply.games.supplychain.params import EnvParams
from rlsupply.games.supplychain.supply_chain_error import ConfigurationError, UsageError

COLLABORATIVE = RewardScheme('collaborative')


class TestRewardScheme(unittest.TestCase):

    def test_from_name(self):
        self.assertEqual(RewardScheme.from_name('baseline').kind, RewardKind.BASELINE)
        self.assertTrue(RewardScheme.from_name('collaborative').is_collaborative)
        with self.assertRaises(ConfigurationError):
            RewardScheme.from_name('competitive')

    def test_negative_coefficients(self):
        with self.assertRaises(ConfigurationError):
            RewardScheme('collaborative', shaping_coeff_retailer=-1.0)


class TestSupplyChainRewards(unittest.TestCase):

    def test_money_is_exact(self):
        self.assertEqual(money(0.2), Fraction(1, 5))
        self.assertEqual(money(3), Fraction(3))
        self.assertEqual(money(0.2) * 14, Fraction(14, 5))

    def test_retailer_reward(self):
        reward = retailer_reward_base(prev_demand=10, inventory=14, order=10, demand=10)
        self.assertEqual(reward, Fraction(-14, 5))
        reward = retailer_reward_base(prev_demand=0, inventory=0, order=15, demand=30, available=20)
        self.assertEqual(reward, -1490)

    def test_factory_reward(self):
        reward = factory_reward_base(prev_order=10, inventory=14, order=10, retailer_order=10)
        self.assertEqual(reward, Fraction(276, 5))
        reward = factory_reward_base(prev_order=0, inventory=61, order=0, retailer_order=0)
        self.assertEqual(reward, -Fraction(61, 5) - 1)

    def test_backlog_threshold(self):
        params = EnvParams(backlog_penalty_threshold_retailer=5)
        at = retailer_reward_base(0, 5, 0, 0, params)
        above = retailer_reward_base(0, 6, 0, 0, params)
        self.assertEqual(at - above, Fraction(1, 5) + 1)

    def test_cross_penalties(self):
        penalty_r, penalty_f = cross_penalties(retailer_order=15, factory_available=10,
                                               demand=30, retailer_available=20, scheme=COLLABORATIVE)
        self.assertEqual(penalty_r, 50)
        self.assertEqual(penalty_f, 200)

    def test_shaped_never_above_base(self):
        for q1, avail_f, d, avail_r in [(0, 0, 0, 0), (15, 10, 30, 20), (20, 40, 3, 30)]:
            shaped_r, shaped_f = shaped_rewards(-5, 7, q1, avail_f, d, avail_r, COLLABORATIVE)
            self.assertLessEqual(shaped_r, -5)
            self.assertLessEqual(shaped_f, 7)

    def test_adjustment_cancels_shaping(self):
        base_r, base_f = Fraction(-32, 5), Fraction(3)
        penalty_r, penalty_f = cross_penalties(15, 10, 30, 20, COLLABORATIVE)
        shaped_r, shaped_f = shaped_rewards(base_r, base_f, 15, 10, 30, 20, COLLABORATIVE)
        self.assertEqual(comparability_adjust(shaped_r, penalty_r, COLLABORATIVE), base_r)
        self.assertEqual(comparability_adjust(shaped_f, penalty_f, COLLABORATIVE), base_f)

    def test_baseline_rejects_shaping(self):
        with self.assertRaises(UsageError):
            shaped_rewards(0, 0, 1, 0, 1, 0, RewardScheme())
        with self.assertRaises(UsageError):
            comparability_adjust(0, 0, RewardScheme())

    def test_judge_day(self):
        day = {'prev_demand': 0, 'prev_retailer_order': 0, 'retailer_inventory': 0, 'factory_inventory': 0,
               'retailer_available': 20, 'factory_available': 10, 'retailer_order': 15, 'factory_order': 0,
               'demand': 30}
        baseline = SupplyChainJudger(EnvParams()).judge_day(day)
        self.assertEqual(baseline['retailer_shaped'], baseline['retailer_base'])
        self.assertEqual(baseline['factory_cross_penalty'], 0)
        collaborative = SupplyChainJudger(EnvParams(), COLLABORATIVE).judge_day(day)
        self.assertEqual(collaborative['retailer_base'], baseline['retailer_base'])
        self.assertEqual(collaborative['retailer_shaped'], -1540)
        self.assertEqual(collaborative['factory_shaped'], -550)
        self.assertEqual(collaborative['retailer_adjusted'], collaborative['retailer_base'])


class TestRewardDecomposition(unittest.TestCase):

    def test_random_days(self):
        params = EnvParams()
        baseline = SupplyChainJudger(params)
        collaborative = SupplyChainJudger(params, COLLABORATIVE)
        hold, factory_buy = Fraction('0.2'), Fraction('0.2')
        rng = np.random.RandomState(7)
        columns = [rng.randint(0, 31, 100000), rng.randint(0, 21, 100000), rng.randint(0, 81, 100000),
                   rng.randint(0, 81, 100000), rng.randint(0, 81, 100000), rng.randint(0, 81, 100000),
                   rng.randint(0, 21, 100000), rng.randint(0, 21, 100000), rng.randint(0, 31, 100000)]
        for prev_d, prev_q1, inv_r, inv_f, avail_r, avail_f, q1, q2, d in zip(*[c.tolist() for c in columns]):
            day = {'prev_demand': prev_d, 'prev_retailer_order': prev_q1, 'retailer_inventory': inv_r,
                   'factory_inventory': inv_f, 'retailer_available': avail_r, 'factory_available': avail_f,
                   'retailer_order': q1, 'factory_order': q2, 'demand': d}
            lost_r, lost_f = max(d - avail_r, 0), max(q1 - avail_f, 0)
            base_r = 6 * prev_d - hold * inv_r - 6 * q1 - 140 * lost_r - max(inv_r - 20, 0)
            base_f = 6 * prev_q1 - hold * inv_f - factory_buy * q2 - 70 * lost_f - max(inv_f - 60, 0)

            plain = baseline.judge_day(day)
            self.assertEqual((plain['retailer_base'], plain['factory_base']), (base_r, base_f))
            self.assertEqual((plain['retailer_shaped'], plain['factory_shaped']), (base_r, base_f))

            shaped = collaborative.judge_day(day)
            self.assertEqual(shaped['retailer_shaped'], base_r - 10 * lost_f)
            self.assertEqual(shaped['factory_shaped'], base_f - 20 * lost_r)
            self.assertEqual(shaped['retailer_shaped'] + shaped['retailer_cross_penalty'], base_r)
            self.assertEqual(shaped['factory_shaped'] + shaped['factory_cross_penalty'], base_f)
            self.assertEqual((shaped['retailer_adjusted'], shaped['factory_adjusted']), (base_r, base_f))


if __name__ == '__main__':
    unittest.main()
