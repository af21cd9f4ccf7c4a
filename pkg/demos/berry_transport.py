"""
Parallel transport over the sphere
==================================

The full eigenframe connection of a spin in a field is flat, while the
connection restricted to one band picks up half the enclosed solid angle.
"""

import numpy as np

from knotgate.holonomy import Loop, berry_phase, loop_transport, plaquette_defect, spin_family

fam = spin_family()

# latitude loops: abelian phase against the solid angle of the cap
for theta in (0.5, 1.0, np.pi / 2, 2.0):
    loop = Loop.latitude(theta, 4000)
    omega = 2 * np.pi * (1 - np.cos(theta))
    print(f"theta={theta:.3f}  phase={berry_phase(fam, loop):+.5f}  -omega/2 mod 2pi="
          f"{np.angle(np.exp(-0.5j * omega)):+.5f}")

# the full frame brings every loop back to the identity
u = loop_transport(fam, Loop.equator(1000))
print("full equator transport:\n", np.round(u, 12))

# small plaquettes: the defect falls off quickly as the side halves
x = np.array([0.8, 1.1])
deltas = 1e-2 / 2 ** np.arange(4)
defects = [plaquette_defect(fam, x, d) for d in deltas]
print("plaquette defects:", ["%.2e" % d for d in defects])
print("ratios:", np.round(np.array(defects[:-1]) / np.array(defects[1:]), 2))
