"""
Box counting on the circulation levels
======================================

At fixed (m, ell, k) the levels go as 1/(1 + sigma^2 (s + 1/2)), so for large
s they crowd like {1/n}, whose box-counting dimension is 1/2. The scaling stops
once boxes are smaller than the level gap.
"""

from qvortex import hierarchy, spectrum
from qvortex.filament import FluidDomain

ref = hierarchy.box_counting_dimension(hierarchy.reciprocal_set(1, 100000))
print(f"{{1/n}}: D = {ref.dimension:.3f}, CI {ref.ci[0]:.3f}..{ref.ci[1]:.3f}")

# %%
dom = FluidDomain.from_sigma(1e-2, R0=10.0, R1=1000.0, Rf=1.0)
top = spectrum.n_max(dom)
ladder = hierarchy.geometric_ladder(8, 34)
fit = hierarchy.box_counting_dimension(hierarchy.gamma_slice(dom, 1000, top), ladder)
gap = spectrum.delta_gamma_min(dom, top - 1).exact
print(f"Gamma slice: D = {fit.dimension:.3f}, CI {fit.ci[0]:.3f}..{fit.ci[1]:.3f}")
print(f"delta_cut = {fit.delta_cut:.3e}, smallest gap = {gap:.3e}, ratio {fit.delta_cut / gap:.2f}")

# %%
# log N(delta) against log(1/delta): the residuals grow once delta < delta_cut
for d, c, r in zip(fit.deltas, fit.counts, fit.residuals):
    print(f"{d:.3e} {c:>8d} {r:+.3f}")
