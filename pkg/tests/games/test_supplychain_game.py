import unittest
from dataclasses import replace

import numpy as np

from rlsupply.games.supplychain import Game, ActionPair, EnvParams, RewardScheme
from rlsupply.games.supplychain.communication import CommKind
from rlsupply.games.supplychain.game import reset, step, TerminationCause, RETAILER, FACTORY
from rlsupply.games.supplychain.judger import SupplyChainJudger
from rlsupply.games.supplychain.supply_chain_error import ActionError, ConfigurationError, ProtocolError


def play(params, days, scheme=None):
    ''' days: list of (retailer_order, factory_order, demand)
    '''
    judger = SupplyChainJudger(params, scheme or RewardScheme())
    state = reset(params)
    records = []
    for q1, q2, d in days:
        state, record = step(state, ActionPair(q1, q2), d, params, judger)
        records.append(record)
    return state, records


class TestSupplyChainParams(unittest.TestCase):

    def test_defaults(self):
        params = EnvParams()
        self.assertEqual(params.capacity_retailer, 19)
        self.assertEqual(params.capacity_factory, 59)
        self.assertEqual(params.backlog_penalty_threshold_retailer, 20)
        self.assertEqual(params.backlog_penalty_threshold_factory, 60)
        self.assertEqual(params.order_max, 20)
        self.assertEqual(params.episode_length, 30)
        self.assertEqual(params.max_stockout_events, 6)
        self.assertIs(params.validate(), params)

    def test_validate(self):
        with self.assertRaises(ConfigurationError):
            EnvParams(holding_cost=-0.1).validate()
        with self.assertRaises(ConfigurationError):
            EnvParams(episode_length=0).validate()
        with self.assertRaises(ConfigurationError):
            EnvParams(initial_inventory=-1).validate()

    def test_from_dict(self):
        params = EnvParams.from_dict({'initial_inventory': '14', 'holding_cost': '0.3'})
        self.assertEqual(params.initial_inventory, 14)
        self.assertEqual(params.holding_cost, 0.3)
        with self.assertRaises(ConfigurationError):
            EnvParams.from_dict({'warehouse_count': 3})
        with self.assertRaises(ConfigurationError):
            EnvParams.from_dict({'order_max': 'many'})


class TestSupplyChainDynamics(unittest.TestCase):

    def test_reset(self):
        state = reset(EnvParams())
        self.assertEqual(state.retailer.inventory, 10)
        self.assertEqual(state.factory.inventory, 10)
        self.assertEqual(state.day, 0)
        self.assertFalse(state.terminated)

    def test_ordinary_day(self):
        state, (record,) = play(EnvParams(), [(5, 0, 3)])
        self.assertEqual(record.shipped_to_retailer, 5)
        self.assertEqual(record.factory_inventory, 5)
        self.assertEqual(record.retailer_inventory, 12)
        self.assertEqual(record.retailer_stockout_qty, 0)
        self.assertEqual(record.factory_stockout_qty, 0)
        self.assertAlmostEqual(record.reward_retailer_base, -32.4, places=12)
        self.assertAlmostEqual(record.reward_factory_base, -1.0, places=12)
        self.assertEqual(state.day, 1)
        self.assertEqual(state.last_customer_demand, 3)
        self.assertEqual(state.last_retailer_order, 5)

    def test_step_does_not_modify_state(self):
        params = EnvParams()
        state = reset(params)
        step(state, ActionPair(5, 5), 3, params)
        self.assertEqual(state.retailer.inventory, 10)
        self.assertEqual(state.day, 0)

    def test_stockouts_are_lost_sales(self):
        _, (record,) = play(EnvParams(), [(15, 0, 30)])
        self.assertEqual(record.shipped_to_retailer, 10)
        self.assertEqual(record.factory_stockout_qty, 5)
        self.assertEqual(record.retailer_stockout_qty, 10)
        self.assertEqual(record.retailer_inventory, 0)
        self.assertEqual(record.factory_inventory, 0)
        self.assertEqual(record.reward_retailer_base, -1490.0)
        self.assertEqual(record.reward_factory_base, -350.0)

    def test_collaborative_shaping(self):
        scheme = RewardScheme('collaborative')
        _, (record,) = play(EnvParams(), [(15, 0, 30)], scheme)
        self.assertEqual(record.reward_retailer_shaped, -1540.0)
        self.assertEqual(record.reward_factory_shaped, -550.0)
        self.assertEqual(record.reward_retailer_adjusted, record.reward_retailer_base)
        self.assertEqual(record.reward_factory_adjusted, record.reward_factory_base)

    def test_backlog(self):
        params = EnvParams(initial_inventory=25)
        state = reset(params)
        self.assertEqual(state.retailer.backlog, 6)
        _, (record,) = play(params, [(0, 0, 0)])
        self.assertEqual(record.retailer_backlog_qty, 6)
        self.assertEqual(record.factory_backlog_qty, 0)
        self.assertEqual(record.reward_retailer_base, -10.0)
        self.assertEqual(record.reward_factory_base, -5.0)

    def test_revenue_lag(self):
        # with 14 units of stock an order of 10 against a demand of 10 keeps inventory flat
        _, records = play(EnvParams(initial_inventory=14), [(10, 10, 10), (10, 10, 10)])
        self.assertEqual(records[1].retailer_inventory, 14)
        self.assertEqual(records[1].reward_retailer_base, -2.8)
        self.assertAlmostEqual(records[1].reward_factory_base, 55.2, places=12)

    def test_inventories_never_negative(self):
        _, records = play(EnvParams(), [(20, 0, 50), (0, 20, 40), (20, 20, 0)])
        for record in records:
            self.assertGreaterEqual(record.retailer_inventory, 0)
            self.assertGreaterEqual(record.factory_inventory, 0)

    def test_invalid_orders(self):
        params = EnvParams()
        state = reset(params)
        for q in (21, -1, 2.5, True):
            with self.assertRaises(ActionError):
                step(state, ActionPair(q, 0), 3, params)
        with self.assertRaises(ActionError):
            step(state, ActionPair(0, 21), 3, params)


class TestSupplyChainTermination(unittest.TestCase):

    def test_days_exhausted(self):
        state, records = play(EnvParams(), [(0, 0, 0)] * 30)
        self.assertTrue(state.terminated)
        self.assertEqual(state.termination_cause, TerminationCause.DAYS_EXHAUSTED)
        self.assertEqual([r.terminated for r in records].count(True), 1)
        self.assertEqual(records[-1].termination_cause, 'days_exhausted')
        with self.assertRaises(ProtocolError):
            step(state, ActionPair(0, 0), 0, EnvParams())

    def test_retailer_stockouts(self):
        params = EnvParams()
        judger = SupplyChainJudger(params)
        state = reset(params)
        records = []
        while not state.terminated:
            state, record = step(state, ActionPair(0, 0), 30, params, judger)
            records.append(record)
        # the seventh stockout ends the episode
        self.assertEqual(len(records), 7)
        self.assertEqual(state.termination_cause, TerminationCause.RETAILER_STOCKOUTS)

    def test_factory_stockouts(self):
        params = EnvParams(max_stockout_events=0, initial_inventory=0)
        state, (record,) = play(params, [(5, 0, 0)])
        self.assertTrue(state.terminated)
        self.assertEqual(record.termination_cause, 'factory_stockouts')

    def test_retailer_checked_first(self):
        params = EnvParams(max_stockout_events=0, initial_inventory=0)
        state, _ = play(params, [(5, 0, 5)])
        self.assertEqual(state.termination_cause, TerminationCause.RETAILER_STOCKOUTS)

    def test_random_policy_episodes(self):
        game = Game()
        game.seed(2024)
        rng = np.random.RandomState(2024)
        causes = set()
        for _ in range(10000):
            game.init_game()
            records = []
            while not game.is_over():
                q1, q2 = rng.randint(0, 21, 2).tolist()
                records.append(game.step(ActionPair(q1, q2))[1])
            self.assertLessEqual(len(records), 30)
            retailer = sum(1 for r in records if r.retailer_stockout_qty > 0)
            factory = sum(1 for r in records if r.factory_stockout_qty > 0)
            cause = records[-1].termination_cause
            causes.add(cause)
            if cause == 'retailer_stockouts':
                self.assertEqual(retailer, 7)
            elif cause == 'factory_stockouts':
                self.assertEqual(factory, 7)
                self.assertLessEqual(retailer, 6)
            else:
                self.assertEqual(cause, 'days_exhausted')
                self.assertEqual(len(records), 30)
                self.assertLessEqual(max(retailer, factory), 6)
        self.assertIn('retailer_stockouts', causes)


class TestSupplyChainGame(unittest.TestCase):

    def test_init_game(self):
        game = Game()
        game.seed(3)
        observations, player_ids = game.init_game()
        self.assertEqual(player_ids, [RETAILER, FACTORY])
        self.assertEqual(observations[RETAILER].shape, (6,))
        self.assertEqual(observations[FACTORY].shape, (5,))
        self.assertFalse(game.is_over())

    def test_step_before_init(self):
        with self.assertRaises(ProtocolError):
            Game().step(ActionPair(0, 0))

    def test_seeded_demand(self):
        demands = []
        for _ in range(2):
            game = Game()
            game.seed(11)
            game.init_game()
            days = []
            while not game.is_over():
                _, record = game.step(ActionPair(10, 10))
                days.append(record.customer_demand)
            demands.append(days)
        self.assertEqual(demands[0], demands[1])

    def test_fixed_scenario_overrides_kind(self):
        game = Game(scenario=CommKind.TRUTH)
        game.seed(0)
        game.init_game()
        _, record = game.step(ActionPair(5, 5, CommKind.LYING), demand=3)
        self.assertEqual(record.omega_scenario_chosen, 'truth')
        self.assertEqual(record.communicated_inventory, record.factory_inventory)

    def test_payoffs(self):
        game = Game(params=EnvParams(), scheme=RewardScheme('collaborative'))
        game.seed(0)
        game.init_game()
        _, record = game.step(ActionPair(15, 0), demand=30)
        self.assertEqual(game.get_payoffs(), [record.reward_retailer_shaped, record.reward_factory_shaped])

    def test_constant_demand(self):
        game = Game(params=EnvParams(initial_inventory=14), demand='constant', demand_level=10)
        game.seed(0)
        game.init_game()
        records = []
        while not game.is_over():
            records.append(game.step(ActionPair(10, 10))[1])
        self.assertEqual(len(records), 30)
        self.assertEqual({r.customer_demand for r in records}, {10})
        self.assertEqual({r.retailer_inventory for r in records}, {14})
        self.assertEqual([r.reward_retailer_base for r in records[1:]], [-2.8] * 29)

    def test_params_are_validated(self):
        with self.assertRaises(ConfigurationError):
            Game(params=replace(EnvParams(), order_max=0))


if __name__ == '__main__':
    unittest.main()
