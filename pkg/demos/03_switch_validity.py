"""How good is the first-order switch?

The crystal really applies exp(-i H t) with H = kappa a1H+ a2H+ + h.c., which
also depletes the vacuum and makes double pairs. Here the exact evolution in
a Fock space truncated at two photons per mode is compared with the
first-order rule "add mu to HH". The error falls as the square of the
amplitude scale, except on a pure HH input at the phase-flip condition,
where the second-order terms cancel and the error is third order.

    python demos/03_switch_validity.py
"""

from bellswitch import PairState, error_scaling_study, make_downconversion_state, validate_switch
from bellswitch.state import RectLabel, rect_vector

rep = validate_switch(make_downconversion_state(1e-3, rect_vector(RectLabel.HH)), -2e-3)
print(f"pure HH, eps = 1e-3, mu = -2e-3: max deviation {rep.max_deviation:.2e}, "
      f"norm error {rep.norm_error:.1e}")
for key, d in rep.pair_deviations.items():
    print(f"  {key:<6} {abs(d):.2e}")

print("\nscaling on the creator's mid-circuit state (all four pairs, mu = -1 per unit scale)")
study = error_scaling_study([1e-2, 1e-3, 1e-4])
for scale, dev in study.rows():
    print(f"  scale {scale:.0e}: {dev:.3e}")
print(f"  fitted exponent {study.exponent:.3f}")

print("\nthe same at the phase-flip condition on pure HH")
study = error_scaling_study([1e-2, 1e-3, 1e-4], base_state=PairState(1, [1, 0, 0, 0]), base_mu=-2)
for scale, dev in study.rows():
    print(f"  scale {scale:.0e}: {dev:.3e}")
print(f"  fitted exponent {study.exponent:.3f}")
