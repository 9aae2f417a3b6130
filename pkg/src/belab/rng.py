"""Counter-based random bits keyed by (seed, stream, path, word).

Every 64-bit word is a pure function of its key, so a path can be regenerated
in isolation and Monte Carlo results do not depend on how paths are split
across workers.  Each path is a splitmix64 sequence whose starting state is a
hash of (seed, stream, path).  Step ``t`` of a path is bit ``t % 64`` of word
``t // 64``.
"""
import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_PATH_MUL = np.uint64(0xD1342543DE82EF95)

# independent streams carved out of one seed
STEPS = 0
PAD = 1
INNOVATIONS = 2


def _mix(x):
    with np.errstate(over="ignore"):
        x = x ^ (x >> np.uint64(30))
        x = x * _M1
        x = x ^ (x >> np.uint64(27))
        x = x * _M2
        return x ^ (x >> np.uint64(31))


def _key(seed, stream):
    s = np.uint64(int(seed) & MASK64)
    with np.errstate(over="ignore"):
        return _mix(s + _GOLDEN * np.uint64(stream + 1))


def as_paths(paths):
    """Normalize a path index, range, or array to a 1-d uint64 array."""
    if isinstance(paths, range):
        return np.arange(paths.start, paths.stop, paths.step, dtype=np.uint64)
    arr = np.atleast_1d(np.asarray(paths))
    if arr.size and arr.min() < 0:
        raise ValueError("path indices must be non-negative")
    return arr.astype(np.uint64)


def words(seed, paths, n_words, stream=STEPS):
    """Random uint64 words of shape (len(paths), n_words)."""
    p = as_paths(paths)
    base = _mix(_key(seed, stream) ^ (p * _PATH_MUL))
    ctr = np.arange(1, n_words + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix(base[:, None] + ctr[None, :] * _GOLDEN)


def bits(seed, paths, n, stream=STEPS):
    """0/1 matrix (uint8) of shape (len(paths), n)."""
    w = words(seed, paths, max(1, -(-n // 64)), stream).astype("<u8")
    b = np.unpackbits(w.view(np.uint8), axis=1, bitorder="little")
    return b[:, :n]


def signs(seed, paths, n, stream=STEPS):
    """Rademacher signs (int8, values +-1) of shape (len(paths), n)."""
    return (bits(seed, paths, n, stream).astype(np.int8) << 1) - 1


def uniforms(seed, paths, n, stream=STEPS):
    """Uniform [0, 1) doubles of shape (len(paths), n), one word per step."""
    w = words(seed, paths, n, stream)
    return (w >> np.uint64(11)).astype(np.float64) * 2.0**-53


def count_ones(seed, paths, start, stop, stream=STEPS):
    """Number of one-bits among steps [start, stop) of each path."""
    if stop <= start:
        return np.zeros(len(as_paths(paths)), dtype=np.int64)
    w = words(seed, paths, -(-stop // 64), stream)
    first, last = start // 64, (stop - 1) // 64
    w = w[:, first:last + 1].copy()
    lo = start - 64 * first
    hi = stop - 64 * last
    w[:, 0] &= np.uint64((MASK64 << lo) & MASK64)
    if hi < 64:
        w[:, -1] &= np.uint64((1 << hi) - 1)
    return np.bitwise_count(w).sum(axis=1, dtype=np.int64)
