"""Monte Carlo sampling of single and joint measurement outcomes.

Every draw is +/-1; only the averages reproduce the smooth cos(theta)
curves. Sampling is deterministic for a given seed: streams come from
numpy's Philox engine via SeedSequence spawning, and shard results are
merged in shard order, so the same seed gives identical trials for any
fixed parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .bell import BellState, CHSHSetting, JointSetting, chsh_combination, joint_distribution
from .errors import DomainError
from .spin import Outcome, QubitState, UnitVector3, projection_probabilities

RNG_DISCIPLINE = "philox:seedsequence-spawn:shard-ordered"

_MAX_SEED = 2**64 - 1


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= _MAX_SEED:
        raise DomainError(f"seed must fit in an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def _spawn_generators(seed: int, shards: int) -> list[np.random.Generator]:
    if shards <= 0:
        raise DomainError(f"shards must be positive, got {shards}")
    children = np.random.SeedSequence(_check_seed(seed)).spawn(shards)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _shard_sizes(n: int, shards: int) -> list[int]:
    base, extra = divmod(n, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


@dataclass(frozen=True)
class TrialRecord:
    """One sampled trial.

    `theta` is the angle between the two measurement settings (joint
    runs) or between preparation and setting (single runs). `alice` is
    None for single-qubit runs, where `bob` holds the lone outcome.
    """

    index: int
    theta: float
    alice: Outcome | None
    bob: Outcome


@dataclass(frozen=True)
class RunStats:
    """Summary of a sampled run of +/-1 outcomes.

    `mean` averages the per-trial value (the outcome for single runs,
    the outcome product for joint runs). `conditional_means` maps
    Alice's outcome to Bob's average over the matching trials; it is
    empty for single-qubit runs and omits outcomes Alice never produced.
    """

    n: int
    mean: float
    stderr: float
    seed: int
    shards: int
    rng: str = RNG_DISCIPLINE
    conditional_means: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        if not -1.0 <= self.mean <= 1.0:
            raise DomainError(f"mean of +/-1 outcomes must lie in [-1, 1], got {self.mean!r}")
        object.__setattr__(self, "conditional_means", MappingProxyType(dict(self.conditional_means)))


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    n = int(values.size)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return mean, stderr


def sample_single(
    state: QubitState,
    setting: UnitVector3,
    n: int,
    seed: int,
    shards: int = 1,
    keep_records: bool = True,
) -> tuple[list[TrialRecord], RunStats]:
    """Sample n projections of `state` onto `setting`.

    Outcomes are +/-1 with p_up from the Born rule; the mean converges
    to cos(theta). Pass keep_records=False to skip materializing the
    per-trial list for large n (the statistics are unchanged).
    """
    if n <= 0:
        raise DomainError(f"n must be positive, got {n}")
    dist = projection_probabilities(state, setting)
    theta = state.bloch_vector.angle_to(setting).radians
    parts = []
    for gen, size in zip(_spawn_generators(seed, shards), _shard_sizes(n, shards)):
        if size:
            parts.append(np.where(gen.random(size) < dist.p_up, 1.0, -1.0))
    values = np.concatenate(parts)
    records: list[TrialRecord] = []
    if keep_records:
        records = [
            TrialRecord(i, theta, None, Outcome.UP if v > 0 else Outcome.DOWN)
            for i, v in enumerate(values)
        ]
    mean, stderr = _mean_stderr(values)
    return records, RunStats(n=n, mean=mean, stderr=stderr, seed=_check_seed(seed), shards=shards)


# outcome pairs indexed 0..3: (+,+), (+,-), (-,+), (-,-)
_ALICE_SIGN = np.array([1.0, 1.0, -1.0, -1.0])
_BOB_SIGN = np.array([1.0, -1.0, 1.0, -1.0])


def sample_joint(
    state: BellState,
    setting: JointSetting,
    n: int,
    seed: int,
    shards: int = 1,
    keep_records: bool = True,
) -> tuple[list[TrialRecord], RunStats]:
    """Sample n joint trials of `state` at the given pair of settings.

    The run mean is the empirical correlation (the product of the two
    +/-1 outcomes per trial); conditional means give Bob's average for
    each value of Alice's outcome.
    """
    if n <= 0:
        raise DomainError(f"n must be positive, got {n}")
    dist = joint_distribution(state, setting)
    theta = setting.separation.radians
    cdf = np.cumsum(dist.probabilities())
    idx_parts = []
    for gen, size in zip(_spawn_generators(seed, shards), _shard_sizes(n, shards)):
        if size:
            u = gen.random(size)
            idx_parts.append(np.searchsorted(cdf, u, side="right").clip(0, 3))
    idx = np.concatenate(idx_parts)
    alice = _ALICE_SIGN[idx]
    bob = _BOB_SIGN[idx]
    mean, stderr = _mean_stderr(alice * bob)
    conditional = {}
    for sign in (1, -1):
        mask = alice == sign
        if mask.any():
            conditional[sign] = float(bob[mask].mean())
    records: list[TrialRecord] = []
    if keep_records:
        records = [
            TrialRecord(
                i,
                theta,
                Outcome.UP if a > 0 else Outcome.DOWN,
                Outcome.UP if b > 0 else Outcome.DOWN,
            )
            for i, (a, b) in enumerate(zip(alice, bob))
        ]
    stats = RunStats(
        n=n,
        mean=mean,
        stderr=stderr,
        seed=_check_seed(seed),
        shards=shards,
        conditional_means=conditional,
    )
    return records, stats


@dataclass(frozen=True)
class EmpiricalCHSH:
    """CHSH estimate from four independently sampled correlations."""

    value: float
    stderr: float
    terms: tuple[RunStats, RunStats, RunStats, RunStats]
    seed: int

    def __float__(self) -> float:
        return self.value


def empirical_chsh(
    state: BellState,
    setting: CHSHSetting,
    n_per_pair: int,
    seed: int,
    shards: int = 1,
) -> EmpiricalCHSH:
    """Estimate S by sampling each of the four correlations with its own
    sub-seed derived from `seed`; same inputs, same estimate."""
    term_seeds = np.random.SeedSequence(_check_seed(seed)).spawn(4)
    stats = []
    for (a, b), child in zip(setting.pairs(), term_seeds):
        js = JointSetting.in_plane(setting.plane, a, b)
        term_seed = int(child.generate_state(1, dtype=np.uint64)[0])
        _, run = sample_joint(state, js, n_per_pair, term_seed, shards, keep_records=False)
        stats.append(run)
    value = chsh_combination(*(s.mean for s in stats))
    stderr = math.sqrt(sum(s.stderr**2 for s in stats))
    return EmpiricalCHSH(value, stderr, tuple(stats), _check_seed(seed))
