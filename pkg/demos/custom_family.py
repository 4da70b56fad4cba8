"""Prescribing your own limit sets.

One member: the open ordinate band (1/4, 1/2) whose profile squeezes the whole
top edge towards the segment [-1/4, 1/4]. Ordinates outside every member carry
no prescription: the construction interpolates between neighbouring bands there,
so their limits sit somewhere between the neighbours' targets.
"""

# %%
from fractions import Fraction as F

from rising_orbits import limits
from rising_orbits.builder import init
from rising_orbits.profiles import Envelope, Interval, IntervalFamily, Member, make_profile

squeeze = Envelope.from_table([(-1, -1), (F(-1, 2), F(-1, 4)), (F(1, 2), F(1, 4)), (1, 1)])
omega = IntervalFamily((Member(1, Interval.open(F(1, 4), F(1, 2)), make_profile(squeeze)),), "omega")
m = init(omega, exact=False, max_stage=40)

# %% Inside the band the limit is the envelope value; below it, a compromise.
for r in (-0.4, 0.0, 0.2):
    inside = limits.estimate_omega(m, (r, 0.3), 25)
    outside = limits.estimate_omega(m, (r, 0.1), 25)
    print(f"r={r:+.1f}  band: [{float(inside.lo):+.4f}, {float(inside.hi):+.4f}]"
          f"  off band: [{float(outside.lo):+.4f}, {float(outside.hi):+.4f}]"
          f"  envelope value {float(squeeze(F(str(r)))):+.4f}")
