import unittest

import numpy as np

import rlsupply
from rlsupply.agents.random_agent import RandomAgent
from rlsupply.envs.supplychain import decode_action
from rlsupply.games.supplychain import EnvParams, RewardScheme
from rlsupply.games.supplychain.communication import CommKind
from rlsupply.games.supplychain.game import RETAILER, FACTORY
from rlsupply.games.supplychain.supply_chain_error import ActionError, ConfigurationError, ProtocolError
from rlsupply.models.supplychain_rule_models import ConstantOrderAgent
from .determism_util import is_deterministic


def random_agents(env, seed=0):
    return [RandomAgent(env.action_shape[i][0], seed=seed + i) for i in range(env.num_players)]


class TestSupplyChainEnv(unittest.TestCase):

    def test_reset_and_extract_state(self):
        env = rlsupply.make('supply-chain', config={'seed': 0})
        states, player_ids = env.reset()
        self.assertEqual(player_ids, [RETAILER, FACTORY])
        self.assertEqual(states[RETAILER]['obs'].size, 6)
        self.assertEqual(states[FACTORY]['obs'].size, 5)
        self.assertEqual(states[RETAILER]['raw_obs']['inventory'], 10)
        self.assertEqual(states[RETAILER]['raw_obs']['factory_inventory'], 0)
        self.assertNotIn('factory_inventory', states[FACTORY]['raw_obs'])
        self.assertEqual(env.state_shape, [[6], [5]])
        self.assertEqual(env.action_shape, [[1], [2]])

    def test_truth_shares_inventory_from_the_start(self):
        env = rlsupply.make('supply-chain', config={'seed': 0, 'game_scenario': 'truth'})
        states, _ = env.reset()
        self.assertEqual(states[RETAILER]['raw_obs']['factory_inventory'], 10)

    def test_unknown_config(self):
        with self.assertRaises(ConfigurationError):
            rlsupply.make('supply-chain', config={'game_warehouses': 3})
        with self.assertRaises(ConfigurationError):
            rlsupply.make('supply-chain', config={'game_scenario': 'gossip'})
        with self.assertRaises(ConfigurationError):
            rlsupply.make('supply-chain', config={'game_reward_scheme': 'selfish'})
        with self.assertRaises(ConfigurationError):
            rlsupply.make('supply-chain', config={'game_demand': 'medium'})
        with self.assertRaises(ConfigurationError):
            rlsupply.make('supply-chain', config={'game_params': 'defaults'})
        with self.assertRaises(ConfigurationError):
            rlsupply.make('supply-chain-2')

    def test_game_params(self):
        env = rlsupply.make('supply-chain', config={'game_params': {'initial_inventory': 14}})
        self.assertEqual(env.params.initial_inventory, 14)
        env = rlsupply.make('supply-chain', config={'game_params': EnvParams(order_max=10),
                                                    'game_reward_scheme': RewardScheme('collaborative', 1.0, 2.0)})
        self.assertEqual(env.params.order_max, 10)
        self.assertEqual(env.scheme.shaping_coeff_factory, 2.0)

    def test_decode_action(self):
        self.assertEqual(decode_action([0.0], RETAILER, CommKind.NO_COMMS), (0, None))
        self.assertEqual(decode_action([0.5], 'retailer', CommKind.NO_COMMS), (10, None))
        self.assertEqual(decode_action([1.0], RETAILER, CommKind.NO_COMMS), (20, None))
        self.assertEqual(decode_action([1.7], RETAILER, CommKind.NO_COMMS), (20, None))
        self.assertEqual(decode_action([-0.3], RETAILER, CommKind.NO_COMMS), (0, None))
        self.assertEqual(decode_action([0.5, 0.1], FACTORY, CommKind.TRUTH), (10, CommKind.TRUTH))
        self.assertEqual(decode_action([0.5, 0.1], FACTORY, CommKind.MIXED), (10, CommKind.NO_COMMS))
        self.assertEqual(decode_action([0.5, 0.5], FACTORY, CommKind.MIXED), (10, CommKind.LYING))
        self.assertEqual(decode_action([0.5, 0.9], 'factory', CommKind.MIXED), (10, CommKind.TRUTH))

    def test_decode_action_errors(self):
        with self.assertRaises(ActionError):
            decode_action([0.5, 0.5], RETAILER, CommKind.NO_COMMS)
        with self.assertRaises(ActionError):
            decode_action([0.5], FACTORY, CommKind.NO_COMMS)
        with self.assertRaises(ActionError):
            decode_action([np.nan], RETAILER, CommKind.NO_COMMS)
        with self.assertRaises(ActionError):
            decode_action([0.2, np.inf], FACTORY, CommKind.MIXED)

    def test_step(self):
        env = rlsupply.make('supply-chain', config={'seed': 0})
        env.reset()
        states, record = env.step([np.array([0.25]), np.array([0.5, 0.0])])
        self.assertEqual(record.retailer_order, 5)
        self.assertEqual(record.factory_order, 10)
        self.assertEqual(record.day, 0)
        self.assertEqual(states[RETAILER]['raw_obs']['day'], 1)
        self.assertEqual(states[FACTORY]['raw_obs']['last_demand'], 5)

    def test_step_after_over(self):
        env = rlsupply.make('supply-chain', config={'seed': 0})
        env.reset()
        while not env.is_over():
            env.step([[0.0], [0.0, 0.0]])
        with self.assertRaises(ProtocolError):
            env.step([[0.0], [0.0, 0.0]])

    def test_run(self):
        env = rlsupply.make('supply-chain', config={'seed': 1})
        env.set_agents(random_agents(env))
        records, payoffs = env.run(is_training=False)
        self.assertLessEqual(len(records), 30)
        self.assertTrue(records[-1].terminated)
        self.assertAlmostEqual(payoffs[0], sum(r.reward_retailer_base for r in records), places=6)
        self.assertAlmostEqual(payoffs[1], sum(r.reward_factory_base for r in records), places=6)

    def test_run_collaborative(self):
        env = rlsupply.make('supply-chain', config={'seed': 1, 'game_reward_scheme': 'collaborative'})
        env.set_agents(random_agents(env))
        records, payoffs = env.run(is_training=True)
        self.assertAlmostEqual(payoffs[0], sum(r.reward_retailer_shaped for r in records), places=6)
        self.assertEqual(env.get_step_rewards(records[0]),
                         [records[0].reward_retailer_shaped, records[0].reward_factory_shaped])

    def test_run_max_days(self):
        env = rlsupply.make('supply-chain', config={'seed': 1})
        env.set_agents(random_agents(env))
        records, _ = env.run(max_days=4)
        self.assertLessEqual(len(records), 4)

    def test_run_without_agents(self):
        env = rlsupply.make('supply-chain')
        with self.assertRaises(ProtocolError):
            env.run()

    def test_mixed_scenario_logs_chosen_kind(self):
        env = rlsupply.make('supply-chain', config={'seed': 2, 'game_scenario': 'mixed'})
        env.set_agents([ConstantOrderAgent(10, 'retailer'),
                        ConstantOrderAgent(10, 'factory', comm_kind=CommKind.TRUTH)])
        records, _ = env.run()
        for record in records:
            self.assertEqual(record.omega_scenario_chosen, 'truth')
            self.assertEqual(record.communicated_inventory, record.factory_inventory)

    def test_lying_scenario(self):
        env = rlsupply.make('supply-chain', config={'seed': 2, 'game_scenario': 'lying'})
        env.set_agents(random_agents(env))
        records, _ = env.run()
        for record in records:
            self.assertEqual(record.omega_scenario_chosen, 'lying')
            self.assertLess(record.communicated_inventory, env.params.capacity_factory)

    def test_get_perfect_information(self):
        env = rlsupply.make('supply-chain', config={'seed': 0})
        env.reset()
        info = env.get_perfect_information()
        self.assertEqual(info['day'], 0)
        self.assertEqual(info['retailer']['inventory'], 10)
        self.assertEqual(info['termination_cause'], 'none')

    def test_is_deterministic(self):
        for scenario in ('no_comms', 'lying', 'mixed'):
            self.assertTrue(is_deterministic({'game_scenario': scenario}))

    def test_seeds_change_demand(self):
        demands = []
        for seed in (0, 1):
            env = rlsupply.make('supply-chain', config={'seed': seed})
            env.set_agents([ConstantOrderAgent(10, 'retailer'), ConstantOrderAgent(10, 'factory')])
            records, _ = env.run()
            demands.append([r.customer_demand for r in records])
        self.assertNotEqual(demands[0], demands[1])


if __name__ == '__main__':
    unittest.main()
