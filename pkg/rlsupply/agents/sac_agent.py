''' Soft actor-critic agent

One SACAgent per echelon. Each agent owns its policy, twin critics with
target copies, entropy temperature, optimizers, replay memory and random
streams; nothing is shared between agents.
'''

import hashlib
import json
import logging
import math
import os

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from rlsupply.agents.prioritized_memory import PrioritizedMemory
from rlsupply.games.supplychain.supply_chain_error import CheckpointError, ShapeError
from rlsupply.utils.seeding import np_random, derive_seed

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT_VERSION = 1

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0
LOG_2 = math.log(2.0)


def squash(u):
    ''' Map an unbounded Gaussian sample to [0, 1]
    '''
    return (torch.tanh(u) + 1.0) / 2.0


def squash_log_det(u):
    ''' log |d squash / du|, computed as 2 (log 2 - u - softplus(-2u)) - log 2
    '''
    return 2.0 * (LOG_2 - u - F.softplus(-2.0 * u)) - LOG_2


def mlp(input_dim, mlp_layers, output_dim):
    layer_dims = [input_dim] + list(mlp_layers)
    fc = []
    for i in range(len(layer_dims) - 1):
        fc.append(nn.Linear(layer_dims[i], layer_dims[i + 1], bias=True))
        fc.append(nn.Tanh())
    fc.append(nn.Linear(layer_dims[-1], output_dim, bias=True))
    return nn.Sequential(*fc)


class PolicyNetwork(nn.Module):
    ''' Squashed Gaussian policy. The trunk is a series of tanh layers with
    separate mean and log-std heads.
    '''

    def __init__(self, state_dim, action_dim, mlp_layers):
        super(PolicyNetwork, self).__init__()
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.mlp_layers = list(mlp_layers)

        layer_dims = [state_dim] + self.mlp_layers
        trunk = []
        for i in range(len(layer_dims) - 1):
            trunk.append(nn.Linear(layer_dims[i], layer_dims[i + 1], bias=True))
            trunk.append(nn.Tanh())
        self.trunk = nn.Sequential(*trunk)
        self.mean = nn.Linear(layer_dims[-1], action_dim)
        self.log_std = nn.Linear(layer_dims[-1], action_dim)

    def forward(self, s):
        x = self.trunk(s)
        log_std = torch.clamp(self.log_std(x), LOG_STD_MIN, LOG_STD_MAX)
        return self.mean(x), log_std

    def sample(self, s, noise=None, generator=None):
        ''' Reparameterized sample

        Args:
            s (Tensor): (batch, state_dim)
            noise (Tensor): standard normal noise of shape (batch, action_dim);
                drawn from `generator` when None

        Returns:
            (tuple): action in [0, 1]^d and its log-probability, shape (batch,)
        '''
        mean, log_std = self.forward(s)
        if noise is None:
            noise = torch.randn(mean.shape, generator=generator, dtype=mean.dtype, device=mean.device)
        u = mean + log_std.exp() * noise
        log_prob = (-0.5 * noise.pow(2) - log_std - 0.5 * math.log(2 * math.pi)) - squash_log_det(u)
        return squash(u), log_prob.sum(dim=-1)

    def deterministic(self, s):
        mean, _ = self.forward(s)
        return squash(mean)


class CriticNetwork(nn.Module):
    ''' Q(s, a) estimator
    '''

    def __init__(self, state_dim, action_dim, mlp_layers):
        super(CriticNetwork, self).__init__()
        self.fc_layers = mlp(state_dim + action_dim, mlp_layers, 1)

    def forward(self, s, a):
        return self.fc_layers(torch.cat([s, a], dim=-1)).squeeze(-1)


class SACAgent(object):
    ''' Soft actor-critic with twin critics, target networks, learned
    entropy temperature and prioritized replay
    '''

    def __init__(self,
                 agent_id='agent',
                 state_shape=None,
                 action_dim=1,
                 mlp_layers=None,
                 discount_factor=0.99,
                 actor_learning_rate=3e-4,
                 critic_learning_rate=3e-4,
                 alpha_learning_rate=1e-3,
                 batch_size=256,
                 initial_alpha=1.0,
                 tau=0.005,
                 target_entropy=None,
                 replay_memory_size=100000,
                 replay_memory_init_size=1000,
                 train_every=1,
                 prioritized_replay_alpha=0.6,
                 prioritized_replay_beta=0.4,
                 prioritized_replay_eps=1e-6,
                 seed=0,
                 device=None,
                 dtype=torch.float32):
        '''
        Args:
            agent_id (str): 'retailer' or 'factory', written into checkpoints
            state_shape (list): the shape of the observation vector
            action_dim (int): the number of raw action dimensions
            mlp_layers (list): hidden widths of every network, [256, 256] by default
            discount_factor (float): gamma
            actor_learning_rate (float): Adam rate of the policy
            critic_learning_rate (float): Adam rate of both critics
            alpha_learning_rate (float): Adam rate of the log temperature
            batch_size (int): transitions per update
            initial_alpha (float): starting entropy temperature
            tau (float): soft update rate of the target critics
            target_entropy (float): defaults to -action_dim
            replay_memory_size (int): capacity of the replay memory
            replay_memory_init_size (int): transitions stored before the first update
            train_every (int): train every X fed transitions
            prioritized_replay_alpha, prioritized_replay_beta, prioritized_replay_eps (float):
                prioritized replay exponents and offset
            seed (int): seeds network init, action noise and replay sampling
            device (torch.device): cpu by default
            dtype (torch.dtype): float32, or float64 for gradient checks
        '''
        if not 0.0 < discount_factor < 1.0:
            raise ValueError('discount_factor must be in (0, 1), got {}'.format(discount_factor))
        if not 0.0 < tau <= 1.0:
            raise ValueError('tau must be in (0, 1], got {}'.format(tau))
        if batch_size < 1:
            raise ValueError('batch_size must be >= 1, got {}'.format(batch_size))
        if initial_alpha <= 0.0:
            raise ValueError('initial_alpha must be > 0, got {}'.format(initial_alpha))

        self.use_raw = False
        self.agent_id = agent_id
        self.state_shape = list(state_shape)
        self.state_dim = int(np.prod(self.state_shape))
        self.action_dim = action_dim
        self.mlp_layers = [256, 256] if mlp_layers is None else list(mlp_layers)
        self.discount_factor = discount_factor
        self.actor_learning_rate = actor_learning_rate
        self.critic_learning_rate = critic_learning_rate
        self.alpha_learning_rate = alpha_learning_rate
        self.batch_size = batch_size
        self.initial_alpha = initial_alpha
        self.tau = tau
        self.target_entropy = -float(action_dim) if target_entropy is None else float(target_entropy)
        self.replay_memory_init_size = replay_memory_init_size
        self.train_every = train_every
        self.seed = seed
        self.device = torch.device('cpu') if device is None else device
        self.dtype = dtype

        # Total timesteps
        self.total_t = 0

        # Total training step
        self.train_t = 0

        with torch.random.fork_rng(devices=[]):
            torch.manual_seed(derive_seed(seed, 'init') % 2**63)
            self.policy = PolicyNetwork(self.state_dim, action_dim, self.mlp_layers)
            self.critic1 = CriticNetwork(self.state_dim, action_dim, self.mlp_layers)
            self.critic2 = CriticNetwork(self.state_dim, action_dim, self.mlp_layers)
        self.target1 = CriticNetwork(self.state_dim, action_dim, self.mlp_layers)
        self.target2 = CriticNetwork(self.state_dim, action_dim, self.mlp_layers)
        for net in self.networks().values():
            net.to(device=self.device, dtype=self.dtype)
        self.target1.load_state_dict(self.critic1.state_dict())
        self.target2.load_state_dict(self.critic2.state_dict())
        for p in list(self.target1.parameters()) + list(self.target2.parameters()):
            p.requires_grad_(False)

        self.log_alpha = torch.tensor(math.log(initial_alpha), dtype=self.dtype, device=self.device,
                                      requires_grad=True)

        self.actor_optimizer = torch.optim.Adam(self.policy.parameters(), lr=actor_learning_rate)
        self.critic_optimizer = torch.optim.Adam(
            list(self.critic1.parameters()) + list(self.critic2.parameters()), lr=critic_learning_rate)
        self.alpha_optimizer = torch.optim.Adam([self.log_alpha], lr=alpha_learning_rate)

        self.memory = PrioritizedMemory(replay_memory_size, batch_size, prioritized_replay_alpha,
                                        prioritized_replay_beta, prioritized_replay_eps)

        self.generator = torch.Generator(device=self.device)
        self.generator.manual_seed(derive_seed(seed, 'actions') % 2**63)
        self.np_random, _ = np_random(derive_seed(seed, 'replay'))

    @property
    def alpha(self):
        return self.log_alpha.exp()

    def networks(self):
        return {'policy': self.policy, 'critic1': self.critic1, 'critic2': self.critic2,
                'target1': self.target1, 'target2': self.target2}

    def hyperparams(self):
        return {
            'action_dim': self.action_dim,
            'state_shape': self.state_shape,
            'mlp_layers': self.mlp_layers,
            'discount_factor': self.discount_factor,
            'actor_learning_rate': self.actor_learning_rate,
            'critic_learning_rate': self.critic_learning_rate,
            'alpha_learning_rate': self.alpha_learning_rate,
            'batch_size': self.batch_size,
            'initial_alpha': self.initial_alpha,
            'tau': self.tau,
            'target_entropy': self.target_entropy,
            'replay_memory_size': self.memory.memory_size,
            'replay_memory_init_size': self.replay_memory_init_size,
            'train_every': self.train_every,
            'prioritized_replay_alpha': self.memory.alpha,
            'prioritized_replay_beta': self.memory.beta,
            'prioritized_replay_eps': self.memory.eps,
            'seed': self.seed,
        }

    def hyperparams_hash(self):
        text = json.dumps(self.hyperparams(), sort_keys=True)
        return hashlib.sha256(text.encode('utf8')).hexdigest()

    def _tensor(self, x):
        return torch.as_tensor(np.asarray(x), dtype=self.dtype, device=self.device)

    def act(self, obs, deterministic=False):
        ''' Raw action in [0, 1]^d for one observation

        Args:
            obs (numpy.array): the observation vector
            deterministic (boolean): the squashed mean instead of a sample

        Returns:
            (numpy.array): float64 action of shape (action_dim,)
        '''
        obs = np.asarray(obs, dtype=np.float64).reshape(-1)
        if obs.shape[0] != self.state_dim:
            raise ShapeError('{}: observation width {} does not match the policy input {}'.format(
                self.agent_id, obs.shape[0], self.state_dim))
        with torch.no_grad():
            s = self._tensor(obs).unsqueeze(0)
            if deterministic:
                action = self.policy.deterministic(s)
            else:
                action, _ = self.policy.sample(s, generator=self.generator)
        return action[0].cpu().numpy().astype(np.float64)

    def step(self, state):
        ''' Stochastic action for generating training data

        Args:
            state (dict): the state dict of the env, 'obs' holds the vector

        Returns:
            (numpy.array): raw action in [0, 1]^d
        '''
        return self.act(state['obs'], deterministic=False)

    def eval_step(self, state):
        ''' Deterministic action for evaluation

        Returns:
            action (numpy.array): the squashed mean
            info (dict): A dictionary containing information
        '''
        action = self.act(state['obs'], deterministic=True)
        return action, {'mean_action': action.tolist()}

    def feed(self, ts):
        ''' Store a transition and train once the memory holds enough data

        Args:
            ts (list): a list of 5 elements that represent the transition
        '''
        (state, action, reward, next_state, done) = tuple(ts)
        self.memory.save(state['obs'], action, reward, next_state['obs'], done)
        self.total_t += 1
        tmp = self.total_t - self.replay_memory_init_size
        if tmp >= 0 and tmp % self.train_every == 0:
            return self.train()
        return None

    def critic_target(self, rewards, next_states, dones, next_noise=None):
        ''' y = r + gamma (1 - done) (min target Q(s', a') - alpha log pi(a' | s'))
        '''
        with torch.no_grad():
            next_actions, next_log_prob = self.policy.sample(next_states, noise=next_noise,
                                                             generator=self.generator)
            q_next = torch.min(self.target1(next_states, next_actions), self.target2(next_states, next_actions))
            soft_value = q_next - self.alpha * next_log_prob
            return rewards + self.discount_factor * (1.0 - dones) * soft_value

    def critic_loss(self, states, actions, rewards, next_states, dones, weights=None, next_noise=None):
        ''' Importance-weighted squared TD error of both critics

        Returns:
            (tuple): loss tensor and absolute TD errors of shape (batch,)
        '''
        y = self.critic_target(rewards, next_states, dones, next_noise)
        q1 = self.critic1(states, actions)
        q2 = self.critic2(states, actions)
        if weights is None:
            weights = torch.ones_like(y)
        loss = 0.5 * (weights * (q1 - y).pow(2)).mean() + 0.5 * (weights * (q2 - y).pow(2)).mean()
        td_errors = 0.5 * ((q1 - y).abs() + (q2 - y).abs())
        return loss, td_errors.detach()

    def actor_loss(self, states, noise=None):
        ''' E[alpha log pi(a|s) - min Q(s, a)] with reparameterized actions

        Returns:
            (tuple): loss tensor and the log-probabilities of the sampled actions
        '''
        actions, log_prob = self.policy.sample(states, noise=noise, generator=self.generator)
        q = torch.min(self.critic1(states, actions), self.critic2(states, actions))
        loss = (self.alpha.detach() * log_prob - q).mean()
        return loss, log_prob

    def alpha_loss(self, log_prob):
        return -(self.log_alpha * (log_prob.detach() + self.target_entropy)).mean()

    def train(self):
        ''' One gradient step on the critics, the policy and the temperature,
        followed by a soft update of the target critics.

        Returns:
            (dict): loss diagnostics; {'skipped': True, ...} before the memory is filled
        '''
        needed = max(self.replay_memory_init_size, 1)
        if len(self.memory) < needed:
            log.debug('%s: update skipped, %d of %d transitions stored', self.agent_id, len(self.memory), needed)
            return {'skipped': True, 'reason': 'replay memory holds {} of {} transitions'.format(
                len(self.memory), needed)}

        states, actions, rewards, next_states, dones, weights, indices = self.memory.sample(self.np_random)
        states, actions, next_states = self._tensor(states), self._tensor(actions), self._tensor(next_states)
        rewards, dones, weights = self._tensor(rewards), self._tensor(dones), self._tensor(weights)

        critic_loss, td_errors = self.critic_loss(states, actions, rewards, next_states, dones, weights)
        self.critic_optimizer.zero_grad()
        critic_loss.backward()
        self.critic_optimizer.step()

        actor_loss, log_prob = self.actor_loss(states)
        self.actor_optimizer.zero_grad()
        actor_loss.backward()
        self.actor_optimizer.step()

        alpha_loss = self.alpha_loss(log_prob)
        self.alpha_optimizer.zero_grad()
        alpha_loss.backward()
        self.alpha_optimizer.step()

        self.soft_update()
        self.memory.update_priorities(indices, td_errors.cpu().numpy())
        self.train_t += 1

        diagnostics = {
            'skipped': False,
            'critic_loss': critic_loss.item(),
            'actor_loss': actor_loss.item(),
            'alpha_loss': alpha_loss.item(),
            'alpha': self.alpha.item(),
            'entropy': -log_prob.mean().item(),
        }
        for name in ('critic_loss', 'actor_loss', 'alpha_loss', 'alpha'):
            if not math.isfinite(diagnostics[name]):
                raise FloatingPointError('{}: {} is not finite after update {}'.format(
                    self.agent_id, name, self.train_t))
        log.debug('%s: update %d %s', self.agent_id, self.train_t, diagnostics)
        return diagnostics

    def soft_update(self, tau=None):
        ''' target <- (1 - tau) target + tau online, element-wise
        '''
        tau = self.tau if tau is None else tau
        with torch.no_grad():
            for online, target in ((self.critic1, self.target1), (self.critic2, self.target2)):
                for p, tp in zip(online.parameters(), target.parameters()):
                    tp.copy_(tp * (1.0 - tau) + p * tau)

    def layer_shapes(self):
        return {'{}.{}'.format(name, key): list(value.shape)
                for name, net in self.networks().items()
                for key, value in net.state_dict().items()}

    def checkpoint_attributes(self):
        '''
        Return the current checkpoint attributes (dict)
        The header keys identify the agent and the network shapes; the rest
        restores the networks, the temperature and the optimizers.
        '''
        return {
            'format_version': CHECKPOINT_FORMAT_VERSION,
            'agent_type': 'SACAgent',
            'agent_id': self.agent_id,
            'layer_shapes': self.layer_shapes(),
            'hyperparams_hash': self.hyperparams_hash(),
            'hyperparams': self.hyperparams(),
            'networks': {name: net.state_dict() for name, net in self.networks().items()},
            'log_alpha': self.log_alpha.detach().clone(),
            'actor_optimizer': self.actor_optimizer.state_dict(),
            'critic_optimizer': self.critic_optimizer.state_dict(),
            'alpha_optimizer': self.alpha_optimizer.state_dict(),
            'total_t': self.total_t,
            'train_t': self.train_t,
        }

    @classmethod
    def from_checkpoint(cls, checkpoint, state_shape=None, action_dim=None, device=None):
        '''
        Restore the agent from a checkpoint

        Args:
            checkpoint (dict): the checkpoint attributes generated by checkpoint_attributes()
            state_shape (list): expected observation shape, checked when given
            action_dim (int): expected action width, checked when given

        Raises:
            CheckpointError: on a format or shape mismatch
        '''
        if checkpoint.get('format_version') != CHECKPOINT_FORMAT_VERSION:
            raise CheckpointError('unsupported checkpoint format {!r}'.format(checkpoint.get('format_version')))
        params = dict(checkpoint['hyperparams'])
        if state_shape is not None and list(state_shape) != list(params['state_shape']):
            raise CheckpointError('{}: checkpoint observation shape {} does not match {}'.format(
                checkpoint['agent_id'], params['state_shape'], list(state_shape)))
        if action_dim is not None and action_dim != params['action_dim']:
            raise CheckpointError('{}: checkpoint action width {} does not match {}'.format(
                checkpoint['agent_id'], params['action_dim'], action_dim))

        dtype = checkpoint['networks']['policy']['mean.weight'].dtype
        agent = cls(agent_id=checkpoint['agent_id'], device=device, dtype=dtype, **params)
        if agent.layer_shapes() != checkpoint['layer_shapes']:
            raise CheckpointError('{}: layer shapes do not match the checkpoint header'.format(agent.agent_id))
        try:
            for name, net in agent.networks().items():
                net.load_state_dict(checkpoint['networks'][name])
            agent.actor_optimizer.load_state_dict(checkpoint['actor_optimizer'])
            agent.critic_optimizer.load_state_dict(checkpoint['critic_optimizer'])
            agent.alpha_optimizer.load_state_dict(checkpoint['alpha_optimizer'])
        except (KeyError, RuntimeError, ValueError) as e:
            raise CheckpointError('{}: cannot restore checkpoint: {}'.format(agent.agent_id, e))
        with torch.no_grad():
            agent.log_alpha.copy_(checkpoint['log_alpha'])
        agent.total_t = checkpoint['total_t']
        agent.train_t = checkpoint['train_t']
        return agent

    def save_checkpoint(self, path, filename=None):
        ''' Save the model checkpoint

        Args:
            path (str): the directory to save the model in
            filename (str): defaults to '<agent_id>.pt'
        '''
        os.makedirs(path, exist_ok=True)
        filename = filename or '{}.pt'.format(self.agent_id)
        full_path = os.path.join(path, filename)
        torch.save(self.checkpoint_attributes(), full_path)
        return full_path

    @classmethod
    def load_checkpoint(cls, file_path, state_shape=None, action_dim=None, device=None):
        try:
            checkpoint = torch.load(file_path, map_location='cpu')
        except FileNotFoundError:
            raise
        except Exception as e:
            raise CheckpointError('{}: not a readable checkpoint: {}'.format(file_path, e))
        return cls.from_checkpoint(checkpoint, state_shape, action_dim, device)
