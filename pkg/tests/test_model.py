import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from belab.model import (KINDS, MdsModel, PathBatch, brackets, condition_report,
                         conditional_moment, increments, sample_path, simulate_batch)


def all_sign_paths(n):
    return np.array(list(itertools.product([-1, 1], repeat=n)), dtype=np.int8)


models = st.one_of(
    st.builds(MdsModel, kind=st.just("scaled-rademacher"), n=st.integers(1, 40),
              rho=st.floats(0.05, 4)),
    st.builds(MdsModel, kind=st.just("pair-compensated"), n=st.integers(1, 20).map(lambda k: 2 * k),
              rho=st.floats(0.05, 4), eta=st.floats(0, 0.5)),
    st.builds(MdsModel, kind=st.just("tilted"), n=st.integers(1, 40), rho=st.floats(0.05, 4),
              delta=st.floats(0, 0.5)),
    st.builds(MdsModel, kind=st.just("skewed-violation"), n=st.integers(1, 40), rho=st.floats(0.05, 4),
              skew=st.floats(0.05, 3) | st.floats(-3, -0.05)),
)


# -- construction and serialization -----------------------------------------

@pytest.mark.parametrize("kw", [
    dict(kind="tilted", delta=0.6), dict(kind="tilted", delta=-0.1),
    dict(kind="pair-compensated", eta=0.51), dict(kind="pair-compensated", n=1),
    dict(kind="pair-compensated", n=7), dict(kind="nope"), dict(rho=0.0),
    dict(kind="skewed-violation", skew=0.0), dict(n=0),
])
def test_invalid_parameters_rejected(kw):
    with pytest.raises(ValueError):
        MdsModel(**kw)


def test_json_round_trip():
    m = MdsModel("pair-compensated", 8, rho=0.5, eta=0.25)
    assert MdsModel.from_json(m.to_json()) == m
    assert set(m.to_json()) == {"kind", "n", "rho", "eta", "delta", "skew"}
    with pytest.raises(ValueError):
        MdsModel.from_json({"kind": "tilted", "n": 4, "bogus": 1})


# -- sample_path ------------------------------------------------------------

def test_single_rademacher_step():
    p = sample_path(MdsModel(n=1), 11, 0)
    assert abs(p.xi[0]) == 1.0 and p.bracket.tolist() == [1.0] and abs(p.x_n) == 1.0


def test_sample_path_is_deterministic():
    m = MdsModel(n=4)
    a, b = sample_path(m, 2**63 + 5, 17), sample_path(m, 2**63 + 5, 17)
    assert a.xi.tobytes() == b.xi.tobytes() and a.bracket.tobytes() == b.bracket.tobytes()
    assert a.x_n == b.x_n


def test_tilted_bracket_by_enumeration():
    m = MdsModel("tilted", 4, delta=0.3)
    _, s2 = increments(m, all_sign_paths(4))
    final = brackets(m, s2)[:, -1]
    expect = {1 - 0.09 * 3 / 4, 1 + 0.09 * 3 / 4}
    assert all(min(abs(f - e) for e in expect) < 1e-15 for f in final)
    assert {round(f, 12) for f in final} == {round(e, 12) for e in expect}


@given(models, st.integers(0, 2**64 - 1), st.integers(0, 10**6))
def test_path_invariants(m, seed, j):
    p = sample_path(m, seed, j)
    assert p.xi.shape == (m.n,)
    assert math.isclose(p.x_n, float(np.sum(p.xi)), abs_tol=1e-12)
    assert np.all(np.diff(p.bracket) >= 0) and p.bracket[0] >= 0
    # bracket increments equal the closed-form conditional variance of each step
    laws = {round(v[0] ** 2 * q[0] + v[1] ** 2 * q[1], 15) for v, q in m.conditional_laws()}
    inc = np.diff(np.concatenate([[0.0], p.bracket]))
    assert all(min(abs(x - L) for L in laws) < 1e-12 for x in inc)
    # telescoping to the closed-form terminal bracket
    if m.kind == "tilted":
        closed = 1 + m.delta**2 * np.sign(p.xi[0]) * (m.n - 1) / m.n
    else:
        closed = 1.0
    assert abs(p.bracket[-1] - closed) <= 1e-12 * m.n


@pytest.mark.parametrize("kind,kw", [("scaled-rademacher", {}), ("tilted", {"delta": 0.4}),
                                     ("pair-compensated", {"eta": 0.5}),
                                     ("skewed-violation", {"skew": 1.5})])
def test_batch_agrees_with_single_paths(kind, kw):
    m = MdsModel(kind, 130, **kw)
    batch = simulate_batch(m, 99, 40, 25)
    ref = PathBatch.from_paths(sample_path(m, 99, j) for j in range(40, 65))
    assert np.allclose(batch.x_n, ref.x_n, atol=1e-12, rtol=0)
    assert np.allclose(batch.bracket_n, ref.bracket_n, atol=1e-12, rtol=0)
    assert np.allclose(batch.max_abs_xi, ref.max_abs_xi, atol=1e-15, rtol=0)


@pytest.mark.parametrize("kind,kw", [("scaled-rademacher", {}), ("tilted", {"delta": 0.5}),
                                     ("pair-compensated", {"eta": 0.5}),
                                     ("skewed-violation", {"skew": -2.0})])
def test_monte_carlo_mean_is_zero(kind, kw):
    M = 200_000
    x = simulate_batch(MdsModel(kind, 32, **kw), 5, 0, M).x_n
    assert abs(x.mean()) <= 4 * x.std() / math.sqrt(M)


# -- conditional laws and certification --------------------------------------

@given(models)
def test_martingale_and_third_moment_in_closed_form(m):
    for v, q in m.conditional_laws():
        assert abs(conditional_moment(v, q, 1, absolute=False)) < 1e-15
        third = conditional_moment(v, q, 3, absolute=False)
        if m.kind == "skewed-violation":
            assert third != 0
        else:
            assert third == 0.0


def test_report_rademacher_n4():
    r = condition_report(MdsModel(n=4, rho=1.0))
    assert (r.epsilon_n, r.delta_n, r.third_moment_max, r.satisfied) == (0.5, 0.0, 0.0, True)


@given(st.integers(1, 10**6), st.floats(0.01, 10))
def test_rademacher_epsilon_is_inverse_sqrt(n, rho):
    assert condition_report(MdsModel(n=n, rho=rho)).epsilon_n == 1.0 / math.sqrt(n)


def test_skewed_flagged():
    r = condition_report(MdsModel("skewed-violation", 100, skew=0.8))
    assert r.third_moment_max > 0 and not r.satisfied


def test_tilted_delta():
    r = condition_report(MdsModel("tilted", 10, delta=0.4))
    assert math.isclose(r.delta_n**2, 0.16 * 9 / 10, rel_tol=1e-14)
    assert math.isclose(r.epsilon_n, math.sqrt(1.16 / 10), rel_tol=1e-14)


@given(models)
def test_epsilon_is_tight(m):
    r = condition_report(m)
    gaps = []
    for v, q in m.conditional_laws():
        lhs = conditional_moment(v, q, 3 + m.rho)
        rhs = r.epsilon_n ** (1 + m.rho) * conditional_moment(v, q, 2)
        assert lhs <= rhs * (1 + 1e-12)
        gaps.append(abs(lhs - rhs) / rhs)
    assert min(gaps) < 1e-12


@given(models)
def test_satisfied_iff_conditions(m):
    r = condition_report(m)
    assert r.satisfied == (r.third_moment_max == 0 and r.delta_n <= 0.5 and r.epsilon_n <= 0.5)


@given(models)
def test_variance_and_moment_domination(m):
    r = condition_report(m)
    assert r.lemma2_ok
    for v, q in m.conditional_laws():
        var = conditional_moment(v, q, 2)
        assert var <= r.epsilon_n**2 * (1 + 1e-12)
        if r.satisfied:
            for t in (3.0, 3.0 + m.rho / 2):
                assert conditional_moment(v, q, t) <= r.epsilon_n ** (t - 2) * var * (1 + 1e-12)


def test_all_kinds_covered():
    assert set(KINDS) == {"scaled-rademacher", "pair-compensated", "tilted", "skewed-violation"}
