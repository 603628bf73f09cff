"""Counter-based random streams.

Every Bernoulli draw of an adjacency matrix is a pure function of
``(seed, i, j)``, so rows can be sampled in any order or in parallel and the
result never changes.  The mixer is SplitMix64's finalizer applied twice.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_INV53 = 2.0**-53

MAX_SEED = 2**64 - 1


def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def entry_uniforms(seed, rows, cols):
    """Uniforms in [0, 1) for index arrays ``rows`` and ``cols`` (broadcast).

    The value at ``(i, j)`` depends only on ``seed``, ``i`` and ``j``.
    """
    rows = np.asarray(rows, dtype=np.uint64)
    cols = np.asarray(cols, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _mix(np.uint64(check_seed(seed)) + _GOLDEN)
        z = _mix((rows << _S32) | cols)
        z = _mix(z ^ key)
    return (z >> _S11).astype(np.float64) * _INV53


def derive_seed(*words) -> int:
    """Deterministic 64-bit seed from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(w) for w in words]).generate_state(2, np.uint32)
    return (int(state[0]) << 32) | int(state[1])
