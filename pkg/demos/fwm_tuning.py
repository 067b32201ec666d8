"""Tuning curves of Raman four-wave mixing in Na2 vapour.

The peak of the averaged |chi4|^2 over the weak-field detuning y3 is tracked
while the strong-field detuning y1 moves (with omega2 locked to k2/k1 omega1).
"""

import numpy as np

from nie import load_preset
from nie.checks import peak_detuning

for name in ("na2_down", "na2_up"):
    p = load_preset(name)
    W1, W3 = p.width(1), p.width(3)
    y1s = np.arange(0, 61, 10.0)
    peaks = [peak_detuning(p, y1) for y1 in y1s]
    print(name)
    for y1, y3 in zip(y1s, peaks):
        print(f"  y1 = {y1:5.1f}  peak y3 = {y3:+8.3f}")
    slope = np.polyfit(y1s[1:], peaks[1:], 1)[0] * W3 / W1
    print(f"  mean dOmega3/dOmega1 over y1 >= 10: {slope:.3f}")

p = load_preset("na2_up:two_strong")
y1s = np.arange(10, 31, 5.0)
peaks = [peak_detuning(p, y1) for y1 in y1s]
slope = np.polyfit(y1s, peaks, 1)[0] * p.width(3) / p.width(1)
print(f"two strong fields: dOmega3/dOmega1 = {slope:.3f}")
