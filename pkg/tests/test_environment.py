"""Reward tapes: determinism, distribution sanity, stream layout."""

import numpy as np
import pytest

from bufalu import BanditInstance, EpisodeRng, reward_tape, sample_reward


def test_tape_is_deterministic_in_id_and_seed():
    inst = BanditInstance.parse(["bern:0.25", "bern:0.5"])
    a = reward_tape(inst, "exp", 7, 500)
    b = reward_tape(inst, "exp", 7, 500)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, reward_tape(inst, "exp", 8, 500))
    assert not np.array_equal(a, reward_tape(inst, "other", 7, 500))


def test_tape_shape_and_support():
    inst = BanditInstance.parse(["bern:0.25", "det:0.7", "gauss:0.0"])
    tape = reward_tape(inst, "exp", 1, 200)
    assert tape.shape == (3, 200)
    assert set(np.unique(tape[0])) <= {0.0, 1.0}
    assert np.all(tape[1] == 0.7)
    assert tape[2].min() < 0.0 < tape[2].max()  # unclamped normal draws


def test_tape_means_near_truth():
    """Sample means sit within 5 sigma of the arm means (CLT scale)."""
    inst = BanditInstance.parse(["bern:0.25", "gauss:0.3"])
    n = 20_000
    tape = reward_tape(inst, "clt", 3, n)
    se_bern = np.sqrt(0.25 * 0.75 / n)
    assert abs(tape[0].mean() - 0.25) < 5 * se_bern
    assert abs(tape[1].mean() - 0.3) < 5 / np.sqrt(n)
    assert abs(tape[1].std(ddof=1) - 1.0) < 0.05


def test_deterministic_arms_consume_no_randomness():
    """Inserting a det arm must not shift later rows' draws."""
    with_det = BanditInstance.parse(["bern:0.25", "det:1", "bern:0.5"])
    without = BanditInstance.parse(["bern:0.25", "bern:0.5"])
    t1 = reward_tape(with_det, "exp", 42, 300)
    t2 = reward_tape(without, "exp", 42, 300)
    assert np.array_equal(t1[0], t2[0])
    assert np.array_equal(t1[2], t2[1])


def test_rows_fill_in_arm_order():
    """Row a is the stream's a-th block, independent of the other arms' kinds."""
    two = BanditInstance.parse(["bern:0.5", "bern:0.5"])
    tape = reward_tape(two, "order", 9, 100)
    rng = EpisodeRng("order", 9)
    first = (rng.stream.random(100) < 0.5).astype(float)
    second = (rng.stream.random(100) < 0.5).astype(float)
    assert np.array_equal(tape[0], first)
    assert np.array_equal(tape[1], second)


def test_sample_reward_matches_tape_prefix():
    inst = BanditInstance.parse(["bern:0.5", "det:0.3"])
    tape = reward_tape(inst, "exp", 11, 50)
    rng = EpisodeRng("exp", 11)
    draws = [sample_reward(inst, 0, rng) for _ in range(50)]
    assert np.array_equal(np.array(draws), tape[0])
    assert sample_reward(inst, 1, rng) == 0.3


def test_episode_rng_reproducible():
    r1 = EpisodeRng("exp", 5).stream.random(10)
    r2 = EpisodeRng("exp", 5).stream.random(10)
    assert np.array_equal(r1, r2)
    # negative and huge seeds are rejected by the integer seeding contract
    with pytest.raises(ValueError):
        EpisodeRng("exp", -1)
