#The MIT License
#
#Copyright (c) 2020 DATA Lab at Texas A&M University
#Copyright (c) 2016 OpenAI (https://openai.com)
#
#Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
#The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
#THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import hashlib
import os

import numpy as np

from rlsupply.games.supplychain.supply_chain_error import ConfigurationError

MAX_SEED_BYTES = 8


def np_random(seed=None):
    ''' Create a RandomState whose stream depends only on the seed

    Args:
        seed (int or None): a non-negative integer; None draws one from the OS

    Returns:
        (tuple): Tuple containing:

            (numpy.random.RandomState): the seeded stream
            (int): the seed that was used
    '''
    if seed is not None and not (isinstance(seed, (int, np.integer)) and seed >= 0):
        raise ConfigurationError('seed: must be a non-negative integer or omitted, not {}'.format(seed))
    seed = create_seed(seed)
    rng = np.random.RandomState()
    rng.seed(_int_list_from_bigint(hash_seed(seed)))
    return rng, seed


def derive_seed(base_seed, *keys):
    ''' Derive an independent child seed, e.g. for one replicate or one stream

    Args:
        base_seed (int): the parent seed
        keys (str or int): labels that identify the child ('demand', 3, ...)

    Returns:
        (int): a seed in [0, 2**63)
    '''
    text = ':'.join([str(int(base_seed))] + [str(k) for k in keys])
    digest = hashlib.sha512(text.encode('utf8')).digest()
    return _bigint_from_bytes(digest[:MAX_SEED_BYTES]) % 2**63


def hash_seed(seed=None, max_bytes=MAX_SEED_BYTES):
    ''' Hash a seed so that linearly related seeds give unrelated streams
    '''
    if seed is None:
        seed = create_seed(max_bytes=max_bytes)
    _hash = hashlib.sha512(str(seed).encode('utf8')).digest()
    return _bigint_from_bytes(_hash[:max_bytes])


def create_seed(a=None, max_bytes=MAX_SEED_BYTES):
    if a is None:
        a = _bigint_from_bytes(os.urandom(max_bytes))
    elif isinstance(a, (int, np.integer)):
        a = int(a) % 2**(8 * max_bytes)
    else:
        raise ConfigurationError('seed: invalid type {} ({})'.format(type(a), a))
    return a


def _bigint_from_bytes(_bytes):
    return int.from_bytes(_bytes, byteorder='little')


def _int_list_from_bigint(bigint):
    if bigint < 0:
        raise ConfigurationError('seed: must be non-negative, not {}'.format(bigint))
    elif bigint == 0:
        return [0]

    ints = []
    while bigint > 0:
        bigint, mod = divmod(bigint, 2 ** 32)
        ints.append(mod)
    return ints
