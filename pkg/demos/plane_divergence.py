"""From the square to the plane: bounded boundary, divergent interior.

The unit disk E is the image of the closed set F of the square under the
tangent chart followed by a radial map. Points of the boundary of E have
bounded orbits; points inside E run off to infinity in both time directions.
"""

# %%
import math

from rising_orbits import limits, plane, render
from rising_orbits.config import bundled_config_path, load_config

cfg = load_config(bundled_config_path())
pipe = plane.PlanePipeline(cfg.build(), cfg.disk)
params = cfg.classify_params

# %% Boundary of E: the orbit settles on one of two limit points.
targets = {"x1": pipe.to_plane(plane.SIX.x[0]), "x3": pipe.to_plane(plane.SIX.x[2])}
print("limit points:", targets)
for th in (0.3, 1.6, 2.9, 4.4):
    y = (math.cos(th), math.sin(th))
    c = plane.classify_plane_orbit(pipe, y, params)
    print(f"theta={th:.1f}", c.kind, "omega ->", tuple(round(v, 6) for v in c.omega))

# %% Interior of E: the same test reports divergence both ways.
for y in [(0.0, 0.0), (0.3, -0.2), (-0.4, 0.1)]:
    c = plane.classify_plane_orbit(pipe, y, params)
    print(y, c.kind)

# %% The plane norm along one interior orbit, until the chart overflows.
st = pipe.g.lift(pipe.to_square((0.3, -0.2))[0])
for n in range(1, 45):
    st = pipe.g.step(st)
    try:
        norm = math.hypot(*pipe.state_to_plane(st))
    except plane.Overflow:
        print(f"step {n}: beyond float range")
        break
    if n % 5 == 0:
        print(f"step {n}: |h^n(y)| = {norm:.3e}")

# %% Plane portrait clipped to [-4, 4]^2.
orbs = []
for x in [(-0.5, 0.42), (0.0, 0.4)]:
    pts = []
    for q in limits.orbit(pipe.g, x, 20).points:
        try:
            pts.append(pipe.to_plane(q))
        except plane.Overflow:
            pts.append(None)
    orbs.append(pts)
with open("plane.svg", "w") as fh:
    fh.write(render.render_plane(pipe, orbs))
print("wrote plane.svg")
