import numpy as np
import pytest
from hypothesis import given, strategies as st

from belab import rng


def test_words_are_pure_functions_of_key():
    a = rng.words(123, [0, 5, 9], 4)
    b = rng.words(123, [9, 0, 5], 4)
    assert np.array_equal(a[[2, 0, 1]], b)
    assert np.array_equal(rng.words(123, [5], 4)[0], a[1])


def test_streams_and_seeds_differ():
    base = rng.words(1, range(8), 2)
    assert not np.array_equal(base, rng.words(2, range(8), 2))
    assert not np.array_equal(base, rng.words(1, range(8), 2, stream=rng.PAD))


def test_sign_prefix_is_stable_in_length():
    # step t of a path does not depend on how many steps were requested
    long = rng.signs(7, range(3), 200)
    short = rng.signs(7, range(3), 70)
    assert np.array_equal(long[:, :70], short)


@given(st.integers(0, 300), st.integers(0, 300), st.integers(0, 2**64 - 1))
def test_count_ones_matches_unpacked_bits(a, b, seed):
    lo, hi = min(a, b), max(a, b)
    bits = rng.bits(seed, range(4), max(hi, 1))
    expect = bits[:, lo:hi].sum(axis=1)
    assert np.array_equal(rng.count_ones(seed, range(4), lo, hi), expect)


def test_bits_look_fair():
    b = rng.bits(0, range(2000), 512)
    m = b.mean()
    assert abs(m - 0.5) < 4 * 0.5 / np.sqrt(b.size)
    # neighbouring paths and neighbouring steps are uncorrelated
    s = 2.0 * b - 1
    assert abs(np.mean(s[1:] * s[:-1])) < 4 / np.sqrt(s[1:].size)
    assert abs(np.mean(s[:, 1:] * s[:, :-1])) < 4 / np.sqrt(s[:, 1:].size)


def test_uniforms_in_unit_interval():
    u = rng.uniforms(3, range(100), 50)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_negative_path_rejected():
    with pytest.raises(ValueError):
        rng.words(0, [-1], 1)
