import csv
import logging
import os
import random

import numpy as np
import torch

log = logging.getLogger(__name__)


def set_seed(seed):
    ''' Seed the global generators of random, numpy and torch
    '''
    if seed is not None:
        torch.backends.cudnn.deterministic = True
        torch.manual_seed(seed % 2**63)
        np.random.seed(seed % 2**32)
        random.seed(seed)


def get_device(prefer_gpu=False):
    ''' Device for the networks. The CPU is the default so runs stay bit-reproducible.
    '''
    if prefer_gpu and torch.cuda.is_available():
        device = torch.device("cuda:0")
        log.info("--> Running on the GPU")
    else:
        device = torch.device("cpu")
        log.info("--> Running on the CPU")
    return device


def tournament(env, num):
    ''' Evaluate the performance of the agents in the environment

    Args:
        env (Env class): The environment to be evaluated.
        num (int): The number of episodes to play.

    Returns:
        (tuple): (list of average payoffs per player, list of the records of every episode)
    '''
    payoffs = [0.0 for _ in range(env.num_players)]
    episodes = []
    for _ in range(num):
        records, _payoffs = env.run(is_training=False)
        episodes.append(records)
        for i, _ in enumerate(payoffs):
            payoffs[i] += float(_payoffs[i])
    if num > 0:
        payoffs = [p / num for p in payoffs]
    return payoffs, episodes


def plot_curve(csv_path, save_path, label):
    ''' Read a performance.csv and plot the episode returns
    '''
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    with open(csv_path) as csvfile:
        reader = csv.DictReader(csvfile)
        xs, retailer, factory, total = [], [], [], []
        for row in reader:
            xs.append(int(row['day']))
            retailer.append(float(row['reward_retailer']))
            factory.append(float(row['reward_factory']))
            total.append(float(row['reward_global']))
    fig, ax = plt.subplots()
    ax.plot(xs, retailer, label='retailer')
    ax.plot(xs, factory, label='factory')
    ax.plot(xs, total, label='global')
    ax.set(xlabel='day', ylabel='episode reward', title=label)
    ax.legend()
    ax.grid()

    save_dir = os.path.dirname(save_path)
    if save_dir:
        os.makedirs(save_dir, exist_ok=True)

    plt.rcParams['svg.hashsalt'] = 'rlsupply'
    fig.savefig(save_path, metadata={'Date': None})
    plt.close(fig)
