"""Rectilinear coincidence detection behind two polarizing beam splitters.

Detector assignment: D1 = H in mode 1, D2 = V in mode 1, D3 = H in mode 2,
D4 = V in mode 2. A coincidence between one detector per mode identifies the
rectilinear pair state; the vacuum never produces a coincidence.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .circuits import DETECTION_TABLE, bell_analyzer, run_circuit
from .state import BellLabel, PairState, RectLabel

__all__ = [
    "Outcome",
    "OutcomeDistribution",
    "ShotRecord",
    "outcome_distribution",
    "sample_shots",
    "identify_bell",
    "COINCIDENCE_FOR",
]


class Outcome(str, enum.Enum):
    D1_D3 = "D1*D3"
    D1_D4 = "D1*D4"
    D2_D3 = "D2*D3"
    D2_D4 = "D2*D4"
    NO_COINCIDENCE = "no_coincidence"


COINCIDENCE_FOR = {
    RectLabel.HH: Outcome.D1_D3,
    RectLabel.HV: Outcome.D1_D4,
    RectLabel.VH: Outcome.D2_D3,
    RectLabel.VV: Outcome.D2_D4,
}
RECT_FOR = {outcome: rect for rect, outcome in COINCIDENCE_FOR.items()}

#: Share of the coincidence probability one outcome needs for a verdict.
VERDICT_FRACTION = 1.0 - 1e-9


@dataclass(frozen=True)
class OutcomeDistribution:
    p: dict

    def __getitem__(self, outcome: Outcome) -> float:
        return self.p[Outcome(outcome)]

    @property
    def coincidence_probability(self) -> float:
        return sum(self.p[o] for o in COINCIDENCE_FOR.values())

    def as_array(self) -> np.ndarray:
        return np.array([self.p[o] for o in Outcome])


@dataclass(frozen=True)
class ShotRecord:
    shots: int
    counts: dict
    seed: int

    def frequency(self, outcome: Outcome) -> float:
        return self.counts.get(Outcome(outcome), 0) / self.shots if self.shots else 0.0


def outcome_distribution(state: PairState, efficiency: float = 1.0) -> OutcomeDistribution:
    """Probabilities of the four coincidences and of no coincidence.

    Each photon is registered with probability ``efficiency``, so coincidences
    scale as ``efficiency**2``.
    """
    if not 0.0 <= efficiency <= 1.0:
        raise ValueError("efficiency must lie in [0, 1]")
    norm = state.total_norm_sq
    if not norm > 0 or not math.isfinite(norm):
        raise ValueError("state has zero (or non-finite) norm")
    weights = np.abs(state.pair_amps) ** 2 / norm
    p = {COINCIDENCE_FOR[k]: efficiency ** 2 * float(weights[k]) for k in RectLabel}
    p[Outcome.NO_COINCIDENCE] = max(0.0, 1.0 - sum(p.values()))
    return OutcomeDistribution(p)


def sample_shots(dist: OutcomeDistribution, shots: int, seed: int) -> ShotRecord:
    """Draw ``shots`` independent outcomes with a generator seeded by ``seed``."""
    if shots < 0:
        raise ValueError("shots must be nonnegative")
    if shots == 0:
        return ShotRecord(0, {}, seed)
    probs = dist.as_array()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    drawn = rng.multinomial(shots, probs)
    counts = {o: int(n) for o, n in zip(Outcome, drawn) if n}
    return ShotRecord(shots, counts, seed)


def identify_bell(state: PairState, epsilon: complex,
                  efficiency: float = 1.0) -> tuple[BellLabel | None, float]:
    """Run the analyzer set for ``epsilon`` and read the Bell label off the detectors.

    Returns ``(label, probability of that coincidence)``. When the coincidences
    are spread over several outcomes (wrong vacuum superposition, mismatched
    epsilon, a non-Bell input, or the pure vacuum, from which the switch alone
    makes an HH pair) no label is given and the success probability is 0.
    """
    out = run_circuit(state, bell_analyzer(epsilon))
    dist = outcome_distribution(out, efficiency)
    total = dist.coincidence_probability
    if total == 0.0:
        return None, 0.0
    best = max(COINCIDENCE_FOR.values(), key=lambda o: dist.p[o])
    if dist.p[best] < VERDICT_FRACTION * total:
        return None, 0.0
    rect = RECT_FOR[best]
    bell = next(b for b, r in DETECTION_TABLE.items() if r is rect)
    return bell, dist.p[best]
