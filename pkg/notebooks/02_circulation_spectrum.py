"""
Circulation levels in a torus pipe
==================================

Levels are labelled by (s, m, ell, k): s sets the ring radius R_s, and
(m, ell, k) the Laplacian eigenvalue of the pipe. The smallest circulation sits
at the largest ring that still fits, s = N_max.
"""

import numpy as np

from qvortex import hierarchy, spectrum
from qvortex.filament import FluidDomain

dom = FluidDomain.from_sigma(1e-3, R0=10.0, R1=1000.0, Rf=1.0)
top = spectrum.n_max(dom)
print("N_max =", top)
print("Gamma(N_max, 1, 0, 1) =", spectrum.circulation((top, 1, 0, 1), dom))
print("Gamma_min formula     =", spectrum.gamma_min(dom))

# %%
gap = spectrum.delta_gamma_min(dom, top - 1)
print(f"level gap {gap.exact:.6e} vs closed form {gap.closed_form:.6e} (rel. dev. {gap.relative_deviation:.2e})")

# %%
# Along k the levels are evenly spaced almost at once; along m the axial term
# only dominates once m is well beyond 2 R1 zeta / R0 (about 480 here).
for axis, window in (("k", (50, 100)), ("m", (50, 100)), ("m", (5000, 5050))):
    fit = spectrum.linear_asymptote(dom, axis, window)
    print(f"{axis} in {window}: R^2 = {fit.r2:.10f}")

# %%
# Enumerate a window of a coarser domain and check the time scales.
coarse = FluidDomain.from_sigma(0.1, R0=10.0, R1=1000.0, Rf=1.0)
spec = spectrum.enumerate_spectrum(coarse, spectrum.SpectrumBounds(s_max=spectrum.n_max(coarse), m_max=2,
                                                                    ell_max=1, k_max=2))
print(len(spec), "levels; max T =", spec.T_w.max(), "formula", hierarchy.t_max(coarse))
print("T * Gamma / (4 pi R_s^2) - 1:", np.max(np.abs(spec.T_w * spec.gamma / (4 * np.pi * spec.R_s**2) - 1)))
