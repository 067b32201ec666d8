"""Why the presets average over velocity with a fine trapezoid grid.

Homogeneous widths are about 2% of the Doppler width, so resonances narrower
than the Gauss-Hermite node spacing alias.  The averaged |chi3/chi4|^2
ratio makes the effect obvious.
"""

from nie import VelocityGrid, load_preset
from nie.checks import averaged_ratio

p = load_preset("na2_down")
for grid in (VelocityGrid("gauss_hermite", 96), VelocityGrid("gauss_hermite", 192),
             VelocityGrid("trapezoid", 1001, 5.0), VelocityGrid("trapezoid", 4001, 5.0),
             VelocityGrid("trapezoid", 8001, 6.0)):
    print(f"{grid.method:14s} {grid.nodes:5d}  <|chi3|>/<|chi4|> squared = {averaged_ratio(p, grid):10.4f}")
