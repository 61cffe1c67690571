"""Two-state switching process: transitions, side effects, statistics."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opinionscape import (Agent, AgentState, DmpParams, InitialStatePolicy,
                          InitPolicyKind, Vec2, apply_transition_side_effects,
                          derive_generator, dmp_step, expected_messenger_ratio,
                          expected_sojourn_time, initial_state,
                          make_radial_cone, simulate_states,
                          stationary_ratio_or_zero)

EXAMPLE = DmpParams(p_e=0.003, p_m=0.0004)


def test_params_validation():
    with pytest.raises(ValueError, match="p_e"):
        DmpParams(p_e=-0.1)
    with pytest.raises(ValueError, match="p_m"):
        DmpParams(p_m=1.5)
    DmpParams(p_e=0.0, p_m=0.0)


def test_step_zero_probability_never_switches():
    rng = derive_generator(0, 0, 0, 3)
    params = DmpParams(p_e=0.5, p_m=0.0)
    for _ in range(100):
        assert dmp_step(AgentState.EXPLOITER, params, rng) is (
            AgentState.EXPLOITER)


def test_step_certain_probability_always_switches():
    rng = derive_generator(0, 0, 0, 3)
    params = DmpParams(p_e=1.0, p_m=1.0)
    for _ in range(50):
        assert dmp_step(AgentState.MESSENGER, params, rng) is (
            AgentState.EXPLOITER)
        assert dmp_step(AgentState.EXPLOITER, params, rng) is (
            AgentState.MESSENGER)


def test_step_consumes_exactly_one_draw():
    rng = derive_generator(9, 0, 0, 3)
    twin = derive_generator(9, 0, 0, 3)
    twin.random()
    dmp_step(AgentState.EXPLOITER, DmpParams(p_e=0.1, p_m=0.1), rng)
    assert rng.random() == twin.random()


def test_step_switch_rate_matches_probability():
    params = DmpParams(p_e=0.5, p_m=0.0004)
    rng = derive_generator(123, 0, 0, 3)
    n = 1_000_000
    switches = sum(
        dmp_step(AgentState.EXPLOITER, params, rng) is AgentState.MESSENGER
        for _ in range(n))
    expected = n * params.p_m
    assert abs(switches - expected) < 3.0 * np.sqrt(expected)


def test_sojourn_means_match_switch_rates():
    params = DmpParams(p_e=0.01, p_m=0.02)
    res = simulate_states(params, n_agents=2000, t_final=5000, master_seed=77)
    assert res.messenger_sojourns.size > 10_000
    assert res.exploiter_sojourns.size > 10_000
    assert res.messenger_sojourns.mean() == pytest.approx(1.0 / params.p_e,
                                                          rel=0.1)
    assert res.exploiter_sojourns.mean() == pytest.approx(1.0 / params.p_m,
                                                          rel=0.1)


def test_fraction_tracks_stationary_ratio():
    params = DmpParams(p_e=0.01, p_m=0.02)
    res = simulate_states(params, n_agents=2000, t_final=5000, master_seed=77)
    tail = res.messenger_fraction[2500:]
    assert tail.mean() == pytest.approx(expected_messenger_ratio(params),
                                        abs=0.02)


def test_simulate_states_is_reproducible_and_shaped():
    params = DmpParams(p_e=0.05, p_m=0.05)
    a = simulate_states(params, 50, 200, master_seed=5)
    b = simulate_states(params, 50, 200, master_seed=5)
    assert a.messenger_fraction.shape == (201,)
    assert np.array_equal(a.messenger_fraction, b.messenger_fraction)
    assert np.array_equal(a.messenger_sojourns, b.messenger_sojourns)
    c = simulate_states(params, 50, 200, master_seed=6)
    assert not np.array_equal(a.messenger_fraction, c.messenger_fraction)


def test_simulate_states_requires_positive_probabilities():
    with pytest.raises(ValueError):
        simulate_states(DmpParams(p_e=0.1, p_m=0.0), 10, 10, master_seed=0)
    with pytest.raises(ValueError):
        simulate_states(DmpParams(p_e=0.0, p_m=0.1), 10, 10, master_seed=0)


def test_simulate_states_all_exploiters_start():
    policy = InitialStatePolicy(InitPolicyKind.ALL_EXPLOITERS)
    res = simulate_states(DmpParams(p_e=0.2, p_m=0.2), 40, 50,
                          master_seed=3, policy=policy)
    assert res.messenger_fraction[0] == 0.0


def _messenger(pos=Vec2(1.5, 1.0)) -> Agent:
    return Agent(id=0, pos=pos, prev_pos=Vec2(0.1, 0.2), opinion=0.77,
                 state=AgentState.MESSENGER, grad_mem=Vec2(3.0, 4.0),
                 prev_dissonance=0.9)


def test_side_effects_on_return_to_exploiter():
    cone = make_radial_cone()
    rng = derive_generator(0, 0, 0, 1)
    out = apply_transition_side_effects(
        _messenger(), AgentState.MESSENGER, AgentState.EXPLOITER, cone, rng)
    assert out.state is AgentState.EXPLOITER
    assert out.opinion == 0.5
    assert out.grad_mem == Vec2(0.0, 0.0)
    assert out.prev_pos == out.pos
    assert out.prev_dissonance == 0.0


def test_side_effects_return_resample_uses_noise_stream():
    cone = make_radial_cone()
    rng = derive_generator(4, 0, 0, 1)
    twin = derive_generator(4, 0, 0, 1)
    out = apply_transition_side_effects(
        _messenger(), AgentState.MESSENGER, AgentState.EXPLOITER, cone, rng,
        noise_sigma=0.001)
    assert out.opinion == 0.5 + 0.001 * twin.standard_normal()
    assert rng.random() == twin.random()


def test_side_effects_on_becoming_messenger_freeze_opinion():
    cone = make_radial_cone()
    rng = derive_generator(0, 0, 0, 1)
    before = Agent(id=3, pos=Vec2(0.4, 0.9), prev_pos=Vec2(0.4, 0.898),
                   opinion=0.31, grad_mem=Vec2(1.0, -1.0),
                   prev_dissonance=0.05)
    out = apply_transition_side_effects(
        before, AgentState.EXPLOITER, AgentState.MESSENGER, cone, rng)
    assert out.state is AgentState.MESSENGER
    assert out.opinion == 0.31
    assert out.grad_mem == before.grad_mem
    assert out.prev_pos == before.prev_pos
    assert out.prev_dissonance == before.prev_dissonance
    # no randomness consumed on this direction
    assert rng.random() == derive_generator(0, 0, 0, 1).random()


def test_side_effects_require_an_actual_transition():
    cone = make_radial_cone()
    rng = derive_generator(0, 0, 0, 1)
    with pytest.raises(ValueError):
        apply_transition_side_effects(
            _messenger(), AgentState.MESSENGER, AgentState.MESSENGER, cone,
            rng)


def test_expected_sojourn_time_examples():
    assert expected_sojourn_time(DmpParams(p_e=0.5, p_m=0.5)) == 2.0
    assert expected_sojourn_time(EXAMPLE) == pytest.approx(
        1416.6666666666667, rel=1e-12)
    swapped = DmpParams(p_e=EXAMPLE.p_m, p_m=EXAMPLE.p_e)
    assert expected_sojourn_time(EXAMPLE) == expected_sojourn_time(swapped)
    with pytest.raises(ValueError):
        expected_sojourn_time(DmpParams(p_e=0.0, p_m=0.5))
    with pytest.raises(ValueError):
        expected_sojourn_time(DmpParams(p_e=0.5, p_m=0.0))


def test_expected_messenger_ratio_examples():
    assert expected_messenger_ratio(DmpParams(p_e=0.2, p_m=0.2)) == 0.5
    assert expected_messenger_ratio(EXAMPLE) == pytest.approx(
        0.11764705882352941, rel=1e-12)
    assert expected_messenger_ratio(DmpParams(p_e=0.3, p_m=0.0)) == 0.0
    with pytest.raises(ValueError):
        expected_messenger_ratio(DmpParams(p_e=0.0, p_m=0.0))


@given(p_e=st.floats(1e-9, 1.0), p_m=st.floats(1e-9, 1.0))
def test_ratio_bounds_and_sojourn_floor(p_e, p_m):
    params = DmpParams(p_e=p_e, p_m=p_m)
    ratio = expected_messenger_ratio(params)
    assert 0.0 <= ratio <= 1.0
    assert expected_sojourn_time(params) >= 1.0


def test_stationary_ratio_or_zero_degenerate_case():
    assert stationary_ratio_or_zero(DmpParams(p_e=0.0, p_m=0.0)) == 0.0
    assert stationary_ratio_or_zero(EXAMPLE) == expected_messenger_ratio(
        EXAMPLE)


def test_initial_state_fixed_count_prefix_without_draws():
    policy = InitialStatePolicy(InitPolicyKind.FIXED_COUNT, count=3)
    rng = derive_generator(0, 0, 0, 0)
    states = [initial_state(policy, EXAMPLE, i, rng) for i in range(5)]
    assert states == [AgentState.MESSENGER] * 3 + [AgentState.EXPLOITER] * 2
    assert rng.random() == derive_generator(0, 0, 0, 0).random()


def test_initial_state_all_exploiters_without_draws():
    policy = InitialStatePolicy(InitPolicyKind.ALL_EXPLOITERS)
    rng = derive_generator(0, 0, 0, 0)
    assert initial_state(policy, EXAMPLE, 0, rng) is AgentState.EXPLOITER
    assert rng.random() == derive_generator(0, 0, 0, 0).random()


def test_initial_state_stationary_ratio_draw_discipline():
    policy = InitialStatePolicy(InitPolicyKind.STATIONARY_RATIO)
    # zero ratio consumes nothing
    rng = derive_generator(0, 0, 0, 0)
    assert initial_state(policy, DmpParams(p_e=0.5, p_m=0.0), 0, rng) is (
        AgentState.EXPLOITER)
    assert rng.random() == derive_generator(0, 0, 0, 0).random()
    # positive ratio consumes exactly one uniform
    ratio = expected_messenger_ratio(DmpParams(p_e=0.1, p_m=0.3))
    for seed in range(8):
        rng = derive_generator(seed, 0, 0, 0)
        twin = derive_generator(seed, 0, 0, 0)
        got = initial_state(policy, DmpParams(p_e=0.1, p_m=0.3), 0, rng)
        want = (AgentState.MESSENGER if twin.random() < ratio
                else AgentState.EXPLOITER)
        assert got is want
        assert rng.random() == twin.random()
