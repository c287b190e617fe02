"""Particle in a hard-wall well whose width grows linearly.

The exact state is the sin mode of the current width times a chirp
exp(i L' x^2 / (2L)).  It stays entirely in the chirped mode, so the
"invariant" occupation is 1 and the conserved energy is n^2 pi^2 / 2.  The
bare sin mode of the instantaneous well is a slightly different state, and
its occupation dips below 1 by the overlap lost to the chirp.
"""

import math
import warnings

import numpy as np

from lieosc.errors import WellPoleWarning
from lieosc.models import WellSolution, invariant_expectation
from lieosc.quantum import Grid

grid = Grid(-0.5, 3.5, 4096)
sol = WellSolution("1+0.1*t", horizon=10.0)
for n in (1, 2):
    print(f"n = {n}")
    for t in (0.0, 2.5, 5.0, 10.0):
        st = sol.state(n, t, grid)
        inst = sol.instantaneous_eigenstate(n, t, grid)
        inv = sol.invariant_eigenstate(n, t, grid)
        occ_inst = abs(inst.inner(st)) ** 2 / (inst.norm() * st.norm())
        occ_inv = abs(inv.inner(st)) ** 2 / (inv.norm() * st.norm())
        energy = invariant_expectation(sol.invariant(t), st, derivative="fd") / st.norm()
        print(f"  t = {t:4.1f}: sin-mode occupation {occ_inst:.8f}, chirped-mode {occ_inv:.12f}, "
              f"invariant {energy:.4f} (n^2 pi^2/2 = {(n * math.pi) ** 2 / 2:.4f})")

with warnings.catch_warnings():
    # the breathing wall starts at L = 1, where only the frequency diagnostic is singular
    warnings.simplefilter("ignore", WellPoleWarning)
    shaken = WellSolution("1+0.1*sin(3*t)", "0.02*cos(t)", horizon=5.0)
xs = np.array([shaken.h4.at(t).alpha for t in np.linspace(0, 5, 6)])
print("breathing, shaken well: left wall at t = 0..5:", np.round(xs, 5))
