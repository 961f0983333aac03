"""
Vortex ring dynamics
====================

A circular ring translates rigidly along its axis while the perturbation term
spins it about that axis. Small helical perturbations ride on top as Kelvin
waves with rate n sqrt(n^2 - 1) in units of beta1.
"""

import numpy as np

from qvortex import dynamics, filament

# %%
# The rigid ring: integrate and compare with the closed form.
cfg = dynamics.EvolutionConfig(dtau=1e-3, n_steps=1000, M=16)
r0 = dynamics.exact_ring(0.0, 256, beta1=1.0, epsilon=1.0, omega=1e-3)
traj = dynamics.integrate_lie(r0, cfg, beta1=1.0, epsilon=1.0, omega=1e-3)
ref = dynamics.exact_ring(traj.tau[-1], 256, 1.0, 1.0, 1e-3)
print("max deviation at tau = 1:", np.max(np.abs(traj.curves[-1] - ref)))

# %%
# Seed one Kelvin pair and read its rotation rate off the transverse amplitude.
for n in (2, 3, 4):
    modes = dynamics.ModeSpectrum.seeded(n, amplitude=1.0, M=16)
    curve = filament.reconstruct_curve(modes.to_tangent(1e-4, n=256))
    tr = dynamics.integrate_lie(curve, dynamics.EvolutionConfig(dtau=1e-3, n_steps=300, M=16), 1.0, 1e-4, 0.0)
    rate = dynamics.measure_mode_frequency(tr, n)
    print(f"n={n}: measured {rate:.8f}, predicted {dynamics.kelvin_rate(n):.8f}")

# %%
# omega / n^2 creeps up to 1: the quadratic large-n law.
ns = np.arange(2, 40)
print(np.round([dynamics.kelvin_rate(n) / n**2 for n in ns[::6]], 4))
