"""Seeded detector statistics behind the analyzer.

Each trial gives one of four coincidences or nothing. With eps = 0.1 the
analyzer fires its single coincidence about once in 101 trials; a million
seeded shots land within a few binomial standard deviations of that, and the
same seed gives the same counts every time.

    python demos/04_detection_statistics.py
"""

import math

from bellswitch import (
    BellLabel,
    bell_analyzer,
    bell_vector,
    make_downconversion_state,
    outcome_distribution,
    run_circuit,
    sample_shots,
)

EPS, SHOTS = 0.1, 10 ** 6

dist = outcome_distribution(run_circuit(make_downconversion_state(-EPS, bell_vector(BellLabel.PHI_PLUS)),
                                        bell_analyzer(EPS)))
p = dist.coincidence_probability
sigma = math.sqrt(SHOTS * p * (1 - p))
print(f"model coincidence probability {p:.6f} (|eps|^2 = {EPS ** 2:g})")

zs = []
for seed in range(20):
    rec = sample_shots(dist, SHOTS, seed)
    hits = SHOTS - rec.counts.get("no_coincidence", 0)
    zs.append((hits - SHOTS * p) / sigma)
    print(f"  seed {seed:>2}: {dict((o.value, n) for o, n in rec.counts.items())}  z = {zs[-1]:+.2f}")
print(f"largest |z| over 20 seeds: {max(map(abs, zs)):.2f}")
assert sample_shots(dist, SHOTS, 3) == sample_shots(dist, SHOTS, 3)

# Lossy detectors register each photon with probability eta, so coincidences
# drop by eta^2.
analyzed = run_circuit(make_downconversion_state(-EPS, bell_vector(BellLabel.PHI_PLUS)), bell_analyzer(EPS))
for eta in (1.0, 0.8, 0.5):
    print(f"efficiency {eta}: coincidence probability "
          f"{outcome_distribution(analyzed, eta).coincidence_probability:.6f}")
