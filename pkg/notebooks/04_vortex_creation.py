"""
Creating vortices from the vacuum
=================================

A random-phase 0 <-> 1 coupling displaces every mode into a coherent state
with |beta| = eps t / hbar, so vortex counts are Poisson with mean
mu = (eps t / hbar)^2. Averaging over the phases leaves a diagonal mixture.
"""

import math

import numpy as np

from qvortex import turbulence

# %%
# The truncated matrix exponential agrees with the displacement formula.
psi = turbulence.fock_oracle_evolve(np.exp(0.3j), 1.0, 60)
print("distance:", np.linalg.norm(psi - turbulence.coherent_state(-np.exp(-0.3j), 60)))

# %%
for mu in (0.1, 0.5, 1.0, 1.5):
    dens = turbulence.phase_averaged_density(math.sqrt(mu), 80)
    print(f"mu = {mu}: purity {dens.purity:.6f}, closed form {turbulence.purity_closed_form(mu):.6f}")

# %%
reg = turbulence.ModeRegister(tuple((s, 1, 0, 1) for s in range(10)))
ens = turbulence.CoherentEnsemble.draw(reg, 0.5, rng_seed=1)
counts = turbulence.count_matrix(turbulence.sample_ensemble(ens, 20000), reg)
total = counts.sum(axis=1)
print("mean", total.mean(), "variance", total.var(), "expected", 10 * 0.25)
print("P(at least one vortex):", np.mean(total >= 1), "vs", 1 - math.exp(-2.5))
