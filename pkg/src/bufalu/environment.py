"""Seeded reward generation.

Rewards exist every round whether or not the agent pays to see them, so
the generator is policy-independent: a tape indexed by (arm, visit
count) is drawn up front from (experiment id, seed). Policies sharing a
seed then face literally the same rewards on the same visits, which is
the common-random-numbers setup the table comparisons rely on.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .core import ArmKind, ArmModel, BanditInstance


def _seed_sequence(experiment_id: str, seed: int) -> np.random.SeedSequence:
    digest = hashlib.sha256(experiment_id.encode("utf-8")).digest()
    return np.random.SeedSequence([int.from_bytes(digest, "little"), int(seed)])


@dataclass
class EpisodeRng:
    """Deterministic stream for one episode, keyed by (experiment id, seed)."""

    experiment_id: str
    seed: int

    def __post_init__(self) -> None:
        self.stream = np.random.default_rng(_seed_sequence(self.experiment_id, self.seed))


def sample_reward(instance: BanditInstance, a: int, rng: EpisodeRng) -> float:
    """One draw from arm a. Deterministic arms consume no randomness."""
    arm = instance.arms[a]
    if arm.kind is ArmKind.BERNOULLI:
        return 1.0 if rng.stream.random() < arm.param else 0.0
    if arm.kind is ArmKind.GAUSSIAN_UNIT:
        return arm.param + rng.stream.standard_normal()
    return arm.param


def reward_tape(instance: BanditInstance, experiment_id: str, seed: int,
                horizon: int) -> np.ndarray:
    """(K, horizon) array; tape[a, k] is the reward of arm a's (k+1)-th play.

    Rows are filled in arm order from a single stream. An episode can
    play one arm at most `horizon` times, so the tape covers any policy.
    """
    rng = EpisodeRng(experiment_id, seed)
    tape = np.empty((instance.n_arms, horizon), dtype=np.float64)
    for a, arm in enumerate(instance.arms):
        if arm.kind is ArmKind.BERNOULLI:
            tape[a, :] = (rng.stream.random(horizon) < arm.param).astype(np.float64)
        elif arm.kind is ArmKind.GAUSSIAN_UNIT:
            tape[a, :] = arm.param + rng.stream.standard_normal(horizon)
        else:
            tape[a, :] = arm.param
    return tape
