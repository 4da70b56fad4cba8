"""A walk through the square map for the bundled six-points data.

Run with ``python3 demos/square_tour.py``; SVG files land in the working directory.
"""

# %%
from fractions import Fraction as F

from rising_orbits import limits, render
from rising_orbits.builder import check_conditions
from rising_orbits.config import bundled_config_path, load_config
from rising_orbits.pl1d import f01, to_strip

cfg = load_config(bundled_config_path())
m = cfg.build(mode="exact")

# %% The ordinate law: every orbit climbs through the strips at the pace of f01.
p = (F(1, 10), F(2, 5))
q = m.eval(p)
print("f(1/10, 2/5) =", q)
print("ordinate law holds:", q[1] == f01(p[1]))
print("strip coordinates of 2/5:", to_strip(F(2, 5)))

# %% Exactness: round trips are equalities of rationals, not approximations.
print("f^-1 f(p) == p:", m.eval_inverse(q) == p)

# %% The construction keeps its contraction bounds stage by stage.
rep = check_conditions(m, 6, samples=16)
print("bound violations through stage 6:", rep.violations)

# %% Limit sets. The ordinate 2/5 lies in the open member (1/3, 1/2), whose
# profile sends every abscissa in (-1/2, 1/2) to 0 on the top edge.
fm = cfg.build(mode="float")
for start in [(0.1, 0.4), (-0.5, 0.4), (0.1, 1 / 3)]:
    om = limits.estimate_omega(fm, start, 30)
    al = limits.estimate_alpha(fm, start, 30)
    print(start, "omega in", (float(om.lo), float(om.hi)), "alpha in", (float(al.lo), float(al.hi)))

# %% A picture: strips, anchor arcs of the first stages, two orbits.
orbits = [limits.orbit(fm, s, 12).points for s in [(0.1, 0.4), (-0.7, -0.3)]]
with open("square.svg", "w") as fh:
    fh.write(render.render_square(fm, orbits))
print("wrote square.svg")
