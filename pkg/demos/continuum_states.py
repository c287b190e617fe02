"""Closed-form continuum solutions: posmom eigenfunctions and plane waves.

Both are checked by plugging them into the Schrodinger equation with
finite differences; the residual is at the level of the difference stencil.
"""

import numpy as np

from lieosc.coeffs import caldirola_kanai
from lieosc.models import FreeParticleSolution, PosmomSolution, schrodinger_residual

cs = caldirola_kanai(0.1, 1.0, 2.0)
pos = PosmomSolution(cs, K=1.0, xi=0.5, X0=1.0, horizon=1.2)
x = np.linspace(1.0, 3.0, 9)
for t in (0.4, 0.7, 1.0):
    r, psi = schrodinger_residual(cs, pos, t, x)
    print(f"posmom  t = {t}: max residual {np.max(np.abs(r)):.2e}, |psi| in "
          f"[{np.abs(psi).min():.3f}, {np.abs(psi).max():.3f}]")
print(f"posmom parameters stay finite up to t = {pos.valid_until:.4f}")

cs = caldirola_kanai(0.1, 0.2, 0.8)
free = FreeParticleSolution(cs, E0=0.5, horizon=2.0)
x = np.linspace(-2.0, 2.0, 21)
for frac in (0.2, 0.5, 0.8):
    t = frac * free.pole
    r, _ = schrodinger_residual(cs, free, t, x)
    print(f"plane   t = {t:.3f} ({frac} of the pole): max residual {np.max(np.abs(r)):.2e}")
print(f"plane-wave solution ends at the zero of rho, t = {free.pole:.6f}")
