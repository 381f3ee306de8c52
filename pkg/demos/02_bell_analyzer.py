"""Read Bell states back out as single detector coincidences.

The analyzer runs the creator backwards: plate on mode 1, switch adding +eps
to HH, plates on both modes. Each Bell input lands on exactly one
rectilinear pair, so one coincidence (D1..D4 behind polarizing beam
splitters) names the Bell state. The success probability per trial is
|eps|^2 / (1 + |eps|^2), which is the familiar |eps|^2 for weak pumping.

    python demos/02_bell_analyzer.py
"""

from bellswitch import (
    BellLabel,
    bell_analyzer,
    bell_vector,
    identify_bell,
    make_downconversion_state,
    outcome_distribution,
    run_circuit,
)
from bellswitch.detection import COINCIDENCE_FOR

EPS = 0.01

for bell in BellLabel:
    start = make_downconversion_state(-EPS, bell_vector(bell))
    dist = outcome_distribution(run_circuit(start, bell_analyzer(EPS)))
    fired = {o.value: f"{dist[o]:.3e}" for o in COINCIDENCE_FOR.values() if dist[o] > 1e-20}  # drop rounding dust
    label, p = identify_bell(start, EPS)
    print(f"|0> - eps|{bell.symbol}>  coincidences {fired}  ->  {label.value}  (p = {p:.6e})")

# A superposition of two Bell states is not a Bell state: two detector pairs
# fire and no verdict is given.
mixed = (bell_vector(BellLabel.PSI_PLUS) + bell_vector(BellLabel.PHI_MINUS)) / 2 ** 0.5
print("superposition ->", identify_bell(make_downconversion_state(-EPS, mixed), EPS))

# A wrong eps leaves part of the switch's injection uncancelled.
print("eps mismatch  ->", identify_bell(make_downconversion_state(-EPS, bell_vector(BellLabel.PHI_PLUS)), 2 * EPS))
