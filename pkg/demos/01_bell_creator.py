"""Make each Bell state from a rectilinear pair and watch the amplitudes move.

A weak down-converter emits |0> + eps|XY>. Two 22.5 degree wave plates spread
the pair over all four rectilinear components, the pumped crystal flips the
sign of HH by adding -eps to it, and one more plate on mode 1 leaves a Bell
state with the same small amplitude.

    python demos/01_bell_creator.py
"""

import numpy as np

from bellswitch import RectLabel, bell_components, bell_creator, make_downconversion_state, trace_circuit
from bellswitch.state import rect_vector

EPS = 0.01
np.set_printoptions(precision=5, suppress=True)

creator = bell_creator(EPS)
for label in RectLabel:
    states = trace_circuit(make_downconversion_state(EPS, rect_vector(label)), creator)
    print(f"input |0> + eps|{label.name}>")
    names = ["start", "H1xH2", "switch", "H1xI2"]
    for name, s in zip(names, states):
        print(f"  {name:<8} pairs/eps = {(s.pair_amps / EPS).real}")
    comps = bell_components(states[-1].pair_amps)
    label_out, coeff = max(comps.items(), key=lambda kv: abs(kv[1]))
    print(f"  -> {coeff.real / EPS:+.3f} eps |{label_out.symbol}>, vacuum {states[-1].vacuum_amp.real:g}\n")

# The switch is the only non-unitary step: it changes the norm unless the
# injection is exactly -2 times the target amplitude.
mid = states[1]
print(f"HH amplitude before the switch {mid.pair_amps[0].real:g}, "
      f"injection {creator.elements[1].injection.real:g}")
