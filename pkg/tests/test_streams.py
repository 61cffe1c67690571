"""Stream derivation keys and the block-buffered bank vs scalar draws."""

from __future__ import annotations

import numpy as np

from opinionscape import (PURPOSE_INIT, PURPOSE_NOISE, PURPOSE_STATE,
                          PURPOSE_WALK, StreamBank, derive_generator,
                          seed_streams)


def test_same_key_reproduces_draws():
    a = derive_generator(42, 0, 7, PURPOSE_NOISE)
    b = derive_generator(42, 0, 7, PURPOSE_NOISE)
    assert np.array_equal(a.random(16), b.random(16))


def test_distinct_agents_distinct_first_draws():
    draws = [derive_generator(1, 0, i, PURPOSE_INIT).random()
             for i in range(10_000)]
    assert len(set(draws)) == len(draws)


def test_run_index_changes_every_agent_stream():
    for agent in range(20):
        r0 = derive_generator(9, 0, agent, PURPOSE_WALK).random()
        r1 = derive_generator(9, 1, agent, PURPOSE_WALK).random()
        assert r0 != r1


def test_purposes_are_independent_streams():
    firsts = {p: derive_generator(3, 0, 5, p).random()
              for p in (PURPOSE_INIT, PURPOSE_NOISE, PURPOSE_WALK,
                        PURPOSE_STATE)}
    assert len(set(firsts.values())) == 4


def test_seed_streams_bundles_cover_agents():
    rs = seed_streams(11, 2, 5)
    assert [a.agent_id for a in rs.agents] == [0, 1, 2, 3, 4]
    direct = derive_generator(11, 2, 3, PURPOSE_STATE)
    assert rs.agents[3].state.random() == direct.random()
    run_first = rs.run.random()
    agent_firsts = {derive_generator(11, 2, i, PURPOSE_INIT).random()
                    for i in range(5)}
    assert run_first not in agent_firsts


def _scalar_draw(gen, kind):
    if kind == "random":
        return gen.random()
    if kind == "standard_normal":
        return gen.standard_normal()
    return gen.uniform(-1.0, 1.0)


def test_bank_matches_scalar_sequences():
    """Bank takes equal scalar generator draws element for element.

    The odd block size forces pair takes to straddle refill boundaries, so
    the carry-over path is exercised too.
    """
    rng = np.random.default_rng(123)
    for kind in ("random", "standard_normal", "uniform_pm1"):
        bank = StreamBank(5, 1, 8, PURPOSE_WALK, kind, block=7)
        gens = [derive_generator(5, 1, i, PURPOSE_WALK) for i in range(8)]
        for _ in range(200):
            k = int(rng.integers(1, 9))
            idx = np.sort(rng.choice(8, size=k, replace=False))
            if rng.random() < 0.5:
                got = bank.take(idx)
                want = np.array([_scalar_draw(gens[i], kind) for i in idx])
            else:
                got = bank.take_pair(idx)
                want = np.array([[_scalar_draw(gens[i], kind),
                                  _scalar_draw(gens[i], kind)] for i in idx])
            assert np.array_equal(got, want), kind


def test_bank_pair_straddling_block_boundary():
    bank = StreamBank(2, 0, 1, PURPOSE_NOISE, "random", block=4)
    gen = derive_generator(2, 0, 0, PURPOSE_NOISE)
    want = gen.random(9)
    idx = np.array([0])
    got = [bank.take(idx)[0]]
    for _ in range(4):  # cursor passes 4 mid-pair on the second take
        got.extend(bank.take_pair(idx)[0])
    assert np.array_equal(np.array(got), want)
