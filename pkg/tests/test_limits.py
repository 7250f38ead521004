from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwalk.checks import truncated_sum
from qwalk.coin import Family, coin_from_theta, grover, inverse_coin
from qwalk.errors import NotPermutation, PermutationCoin
from qwalk.evolve import InitialCoinState, initial_state, return_probabilities, run, probability
from qwalk.limits import (
    decay_base,
    escaping_state,
    is_localized,
    limit_measure,
    limit_measure_permutation,
    limit_params,
    limit_profile,
    localization_sum,
)
from qwalk.oracle import empirical_limit
from qwalk.spectral import eigensystems, quadrature_nodes

from conftest import coin_states, families, generic_theta, thetas

SQRT3 = math.sqrt(3.0)


def test_grover_nu_exact():
    assert decay_base("X", -1 / 3) == pytest.approx(2 * math.sqrt(6) - 5, abs=1e-15)


def test_mu_at_negative_grover():
    assert decay_base("Y", 1 / 3) == pytest.approx(2 * math.sqrt(6) - 5, abs=1e-15)


def test_nu_continuous_through_zero():
    assert decay_base("X", 0.0) == 0.0
    assert decay_base("X", 1e-10) == pytest.approx(1e-10 / 3, rel=1e-6)


def test_nu_tends_to_one():
    assert decay_base("X", 1 - 1e-12) == pytest.approx(1.0, abs=1e-5)


def test_grover_a_b(sym):
    p = limit_params(grover(), sym)
    assert p.a == pytest.approx(2 / SQRT3) and p.b == pytest.approx(2 / SQRT3)


@given(st.floats(-1 / 3, 1.0, exclude_max=True, allow_nan=False))
def test_nu_range(x):
    nu = decay_base("X", x)
    assert 2 * math.sqrt(6) - 5 - 1e-15 <= nu < 1


@given(st.floats(-1.0, 1 / 3, exclude_min=True, allow_nan=False))
def test_mu_range(x):
    mu = decay_base("Y", x)
    assert 2 * math.sqrt(6) - 5 - 1e-15 <= mu < 1


@pytest.mark.parametrize(
    "family, theta, expected",
    [
        ("X", math.pi, 0.3031),
        ("X", math.pi / 4, 0.3548),
        ("Y", 0.0, 0.3031),
        ("Y", math.pi / 6, 0.3123),
    ],
)
def test_figure_limits(sym, family, theta, expected):
    assert limit_measure(coin_from_theta(family, theta), sym, 0) == pytest.approx(expected, abs=1e-4)


def test_y_at_pi_over_six_has_x():
    assert coin_from_theta("Y", math.pi / 6).x == pytest.approx((SQRT3 - 1) / 3, abs=1e-15)


def _spectral_limit(coin, init, m, n=2048):
    # Constant-branch projection: (1/2pi) int e^{ikm} <v1|psi0> v1 dk.
    ks = quadrature_nodes(n)
    _, vecs, _ = eigensystems(coin, ks)
    v1 = vecs[:, :, 0]
    amp = (np.exp(1j * ks * m)[:, None] * (v1.conj() @ init.as_array())[:, None] * v1).sum(axis=0) / n
    return float(np.sum(np.abs(amp) ** 2))


@given(families, thetas, coin_states(), st.integers(-4, 4))
def test_limit_matches_spectral_projection(family, theta, init, m):
    if not generic_theta(theta, family):
        return
    c = coin_from_theta(family, theta)
    assert limit_measure(c, init, m) == pytest.approx(_spectral_limit(c, init, m), abs=1e-10)


@given(families, thetas, coin_states(), st.integers(-30, 30))
def test_positivity(family, theta, init, m):
    c = coin_from_theta(family, theta)
    value = limit_measure_permutation(c, init, m) if c.is_permutation else limit_measure(c, init, m)
    assert value >= 0.0


@given(families, thetas, coin_states())
def test_sum_identity(family, theta, init):
    if not generic_theta(theta, family):
        return
    c = coin_from_theta(family, theta)
    assert localization_sum(c, init) == pytest.approx(truncated_sum(c, init), abs=1e-8)


@given(families, thetas, coin_states())
def test_sum_equals_constant_branch_weight(family, theta, init):
    if not generic_theta(theta, family):
        return
    c = coin_from_theta(family, theta)
    ks = quadrature_nodes(2048)
    _, vecs, _ = eigensystems(c, ks)
    weight = np.mean(np.abs(vecs[:, :, 0].conj() @ init.as_array()) ** 2)
    assert localization_sum(c, init) == pytest.approx(weight, abs=1e-10)


@given(families, thetas)
def test_inverse_invariance_for_symmetric_states(family, theta):
    if not generic_theta(theta, family):
        return
    c = coin_from_theta(family, theta)
    for init in (InitialCoinState.symmetric(), InitialCoinState.left_right()):
        assert limit_measure(c, init, 0) == pytest.approx(limit_measure(inverse_coin(c), init, 0), abs=1e-12)


def test_inverse_invariance_fails_for_generic_state():
    # Only states symmetric under swapping chiralities 1 and 3 are covered.
    c = coin_from_theta("X", 1.1)
    init = InitialCoinState.normalized([1.0, 0.3j, -0.4])
    assert abs(limit_measure(c, init, 0) - limit_measure(inverse_coin(c), init, 0)) > 1e-3


def test_central_term_nonzero():
    for x in np.linspace(-1 / 3, 0.99, 50):
        if abs(x) < 1e-9:
            continue
        nu = decay_base("X", x)
        assert abs(2 + nu * (1 - 3 * x)) > 0


@given(families, thetas)
def test_escaping_state_has_zero_limit(family, theta):
    if not generic_theta(theta, family):
        return
    c = coin_from_theta(family, theta)
    esc = escaping_state(c)
    for m in range(-3, 4):
        assert limit_measure(c, esc, m) <= 1e-12
    ks = quadrature_nodes(64)
    _, vecs, _ = eigensystems(c, ks)
    assert np.abs(vecs[:, :, 0].conj() @ esc.as_array()).max() <= 1e-12


def test_grover_escaping_state_value():
    esc = escaping_state(grover())
    assert np.allclose(esc.as_array(), np.array([1, -2, 1]) / math.sqrt(6), atol=1e-15)


def test_escaping_simulation_decays():
    esc = escaping_state(grover())
    assert probability(run(initial_state(esc), grover(), 2000), 0) < 0.01


def test_middle_term_mirror():
    # The limit for m and -m agrees with simulation at small |m|.
    c = coin_from_theta("X", 2.3)
    init = InitialCoinState.normalized([1.0, 0.5j, 0.2])
    for m in (-2, -1, 1, 2):
        assert limit_measure(c, init, m) == pytest.approx(empirical_limit(c, init, m, 4000), abs=1e-2)


@pytest.mark.parametrize("family, theta", [("X", math.pi), ("X", 1.2), ("Y", -0.8), ("Y", 2.5)])
def test_simulation_converges(sym, family, theta):
    c = coin_from_theta(family, theta)
    p = return_probabilities(c, sym, 5000)
    lim = limit_measure(c, sym, 0)
    assert abs(p[-1] - lim) <= 2e-2
    assert abs(p[2500:].mean() - lim) <= 1e-2


def test_permutation_raises_in_closed_form(sym):
    with pytest.raises(PermutationCoin):
        limit_measure(coin_from_theta("X", 0.0), sym, 0)
    with pytest.raises(PermutationCoin):
        escaping_state(coin_from_theta("Y", math.pi / 3))
    with pytest.raises(PermutationCoin):
        localization_sum(coin_from_theta("X", 2 * math.pi / 3), sym)


def test_not_permutation(sym):
    with pytest.raises(NotPermutation):
        limit_measure_permutation(grover(), sym, 0)


def test_permutation_table_values():
    init = InitialCoinState.normalized([1.0, 2.0, 3.0])
    pa, pb, pc = 1 / 14, 4 / 14, 9 / 14
    ident = coin_from_theta("X", 0.0)
    p123 = coin_from_theta("X", 2 * math.pi / 3)
    p132 = coin_from_theta("X", -2 * math.pi / 3)
    assert limit_measure_permutation(ident, init, 0) == pytest.approx(pb)
    assert limit_measure_permutation(p123, init, 1) == pytest.approx(2 * pa / 3)
    assert limit_measure_permutation(p132, init, -1) == pytest.approx(2 * pc / 3)
    assert limit_measure_permutation(p123, init, 5) == 0.0


@pytest.mark.parametrize(
    "family, theta",
    [("X", 0.0), ("X", 2 * math.pi / 3), ("X", -2 * math.pi / 3), ("Y", math.pi), ("Y", math.pi / 3), ("Y", -math.pi / 3)],
)
def test_permutation_table_matches_long_run_average(family, theta):
    c = coin_from_theta(family, theta)
    init = InitialCoinState.normalized([0.3 + 0.1j, -0.5, 0.7j])
    for m in (-1, 0, 1):
        # 60 samples cover whole periods of the period-3 motion.
        emp = empirical_limit(c, init, m, 300, window=59)
        assert limit_measure_permutation(c, init, m) == pytest.approx(emp, abs=1e-12)


def test_permutation_table_sums_to_retained_weight():
    init = InitialCoinState.normalized([0.3, 0.5, 0.8])
    for theta in (2 * math.pi / 3, -2 * math.pi / 3):
        c = coin_from_theta("X", theta)
        assert sum(limit_measure_permutation(c, init, m) for m in (-1, 0, 1)) == pytest.approx(1.0)


def test_is_localized_examples(sym):
    assert is_localized(grover(), sym)
    assert not is_localized(grover(), escaping_state(grover()))
    v = is_localized(coin_from_theta("X", 0.0), [0, 1, 0])
    assert v.localized and v.limit_p0 == 1.0
    assert v.sum_positive


def test_limit_profile_dispatch(sym):
    prof = limit_profile(coin_from_theta("X", 2 * math.pi / 3), sym, range(-2, 3))
    assert prof.tolist() == pytest.approx([0, 2 / 9, 5 / 9, 2 / 9, 0])
