"""Render SVG phase portraits for a few representative systems.

Each portrait shows a fan of closed trajectories inside the center region,
the region boundary (dashed), invariant circles, and the asymptote rays of
the unbounded boundary trajectories.  Output lands in demos/output/.
"""

import os

from isochrone.cli import Settings, SystemSpec, _portrait_data, _svg_portrait
from isochrone.polyalg import X, Y, circle_harmonic
from isochrone.system import build_eq2, counterexample_system

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT_DIR, exist_ok=True)

cases = {
    "counterexample.svg": counterexample_system(),
    "harmonic_sin3.svg": build_eq2(circle_harmonic(3, "sin"), (1,)),
    "even_pair.svg": build_eq2(X * X - Y * Y, (1,)),
    "pure_rotation.svg": build_eq2(X, (0,)),
    "invariant_circle.svg": build_eq2(Y, (-1, 1)),
}

for fname, system in cases.items():
    spec = SystemSpec("eq2", factored=system, settings=Settings(boundary_grid=240))
    trajectories, boundary, circles, rays, lim = _portrait_data(
        spec, n_traj=10, rho_max=None, seed=7
    )
    svg = _svg_portrait(trajectories, boundary, circles, rays, lim)
    path = os.path.join(OUT_DIR, fname)
    with open(path, "w") as fh:
        fh.write(svg)
    print(f"wrote {path}  (view radius {lim:.3f}, {len(boundary)} boundary samples)")
