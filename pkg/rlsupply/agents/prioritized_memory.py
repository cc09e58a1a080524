''' Prioritized replay memory backed by a sum tree
'''

import numpy as np

from rlsupply.games.supplychain.supply_chain_error import UsageError


class SumTree(object):
    ''' Binary tree over `capacity` leaves where each parent holds the sum of its children.
    Leaf i lives at index i + capacity - 1.
    '''

    def __init__(self, capacity):
        if capacity < 1:
            raise UsageError('sum tree capacity must be >= 1, got {}'.format(capacity))
        self.capacity = capacity
        self.tree = np.zeros(2 * capacity - 1, dtype=np.float64)

    def update(self, point, weight):
        idx = point + self.capacity - 1
        self.tree[idx] = weight
        while idx > 0:
            idx = (idx - 1) // 2
            # recompute from the children so rounding never accumulates
            self.tree[idx] = self.tree[2 * idx + 1] + self.tree[2 * idx + 2]

    def get(self, point):
        return self.tree[point + self.capacity - 1]

    def get_total(self):
        return self.tree[0]

    def leaves(self, size=None):
        size = self.capacity if size is None else size
        return self.tree[self.capacity - 1:self.capacity - 1 + size]

    def find(self, v):
        ''' Index of the leaf whose cumulative range contains v, 0 <= v < total
        '''
        idx = 0
        while idx < self.capacity - 1:
            l_idx = idx * 2 + 1
            if v < self.tree[l_idx]:
                idx = l_idx
            else:
                v -= self.tree[l_idx]
                idx = l_idx + 1
        return idx - (self.capacity - 1)


class PrioritizedMemory(object):
    ''' Replay memory that samples transition k with probability
    (p_k + eps)^alpha / sum_j (p_j + eps)^alpha and returns the importance
    weights (N * P(k))^-beta normalized by the largest weight of the batch.
    '''

    def __init__(self, memory_size, batch_size, alpha=0.6, beta=0.4, eps=1e-6):
        ''' Initialize

        Args:
            memory_size (int): the number of transitions kept, oldest replaced first
            batch_size (int): default number of transitions per sample
            alpha (float): priority exponent
            beta (float): importance-sampling exponent
            eps (float): added to every priority so nothing has zero probability
        '''
        self.memory_size = memory_size
        self.batch_size = batch_size
        self.alpha = alpha
        self.beta = beta
        self.eps = eps
        self.tree = SumTree(memory_size)
        self.max_priority = 1.0
        self.size = 0
        self.next_idx = 0
        self.states = None

    def __len__(self):
        return self.size

    def _allocate(self, state, action):
        self.states = np.zeros((self.memory_size,) + np.shape(state), dtype=np.float32)
        self.next_states = np.zeros_like(self.states)
        self.actions = np.zeros((self.memory_size,) + np.shape(action), dtype=np.float32)
        self.rewards = np.zeros(self.memory_size, dtype=np.float64)
        self.dones = np.zeros(self.memory_size, dtype=np.float64)

    def save(self, state, action, reward, next_state, done):
        ''' Save transition into memory with the largest priority seen so far

        Args:
            state (numpy.array): the current observation
            action (numpy.array): the raw action in [0, 1]^d
            reward (float): the reward received
            next_state (numpy.array): the next observation
            done (boolean): whether the episode ended on this transition
        '''
        if self.states is None:
            self._allocate(state, action)
        i = self.next_idx
        self.states[i] = state
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_states[i] = next_state
        self.dones[i] = float(done)
        self.tree.update(i, self._weight(self.max_priority))

        self.next_idx = (self.next_idx + 1) % self.memory_size
        self.size = min(self.size + 1, self.memory_size)

    def _weight(self, priority):
        return (abs(priority) + self.eps) ** self.alpha

    def probabilities(self):
        ''' Sampling probability of every stored transition
        '''
        leaves = self.tree.leaves(self.size)
        return leaves / self.tree.get_total()

    def sample(self, rng, batch_size=None):
        ''' Sample a minibatch with independent draws

        Args:
            rng (numpy.random.RandomState): the sampling stream
            batch_size (int): defaults to the memory's batch size

        Returns:
            (tuple): states, actions, rewards, next_states, dones, weights, indices
        '''
        if self.size == 0:
            raise UsageError('cannot sample from an empty replay memory')
        batch_size = self.batch_size if batch_size is None else batch_size
        total = self.tree.get_total()
        indices = np.empty(batch_size, dtype=np.int64)
        for b, v in enumerate(rng.random_sample(batch_size) * total):
            indices[b] = min(self.tree.find(v), self.size - 1)

        probs = self.tree.leaves()[indices] / total
        weights = (self.size * probs) ** (-self.beta)
        weights = weights / weights.max()
        return (self.states[indices], self.actions[indices], self.rewards[indices],
                self.next_states[indices], self.dones[indices], weights, indices)

    def update_priorities(self, indices, priorities):
        ''' Set new priorities, e.g. the TD errors of a sampled batch
        '''
        for idx, priority in zip(indices, priorities):
            priority = float(abs(priority))
            self.tree.update(int(idx), self._weight(priority))
            self.max_priority = max(self.max_priority, priority)
