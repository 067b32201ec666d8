"""Velocity-averaged probe absorption in a closed sodium V scheme.

A strong field on l-g reshapes the probe line on l-m.  The probe becomes
amplified near line center although the velocity-averaged l-m population
difference stays positive.
"""

import numpy as np

from nie import load_preset, run_scan
from nie.two_field import awi_classify, coupling_factors, susceptibilities
from nie.scenarios import ScanSpec, point_settings

preset = load_preset("na_closed_fig3")
table = run_scan(preset)
y4, alpha, dr4 = table.column("y4"), table.column("alpha4"), table.column("dr4")

i = int(np.argmin(alpha))
print(f"min alpha4/alpha04 = {alpha[i]:.4f} at y4 = {y4[i]:.2f}")
print(f"averaged r_l - r_m there: {dr4[i]:.4f}")

# at a single velocity the response can be classified directly
fields, _, _ = point_settings(preset, ScanSpec.from_preset(preset), 0.0, "two_field")
r = susceptibilities(preset.scheme, fields, 0.0)
f = coupling_factors(preset.scheme, fields, 0.0)
print("resting atoms:", awi_classify(r, f, preset.scheme))

for S1 in (0.0, 2.0, 10.0, 30.0):
    t = run_scan(preset, ScanSpec.from_preset(preset, fixed={"S1": S1}, points=121))
    print(f"S1 = {S1:5.1f}  min alpha4/alpha04 = {t.column('alpha4').min():+.4f}")
