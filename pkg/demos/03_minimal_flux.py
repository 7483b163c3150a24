# %% [markdown]
# The minimal entropy flux for given half-space moments (N1, N2, N5) is
# attained by a single drifted Maxwellian. A mixture with the same moments
# always carries more flux.

# %%
import math

from polyevap.gas import GasParams
from polyevap.minflux import (
    MaxwellianComponent,
    maxwellian_from_moments,
    min_flux,
    mixture_half_moments,
    psi_plus_quadrature,
)

gas = GasParams(3)

# %%
mix = [MaxwellianComponent(math.log(0.5), 0.8, 0.3), MaxwellianComponent(math.log(0.5), 1.6, -0.2)]
moments = mixture_half_moments(mix, gas)
best = min_flux(moments, gas)
sol = maxwellian_from_moments(moments, gas)
print("moments:", moments)
print(f"matching Maxwellian: a={sol.a:.6f} beta={sol.beta:.6f} w={sol.w:.6f} (s={sol.s:.6f})")

# %%
print(f"minimal flux          F = {best.f_value:.12f}")
print(f"flux of the mixture Psi = {psi_plus_quadrature(mix, gas):.12f}")
print(f"flux of the Maxwellian  = {psi_plus_quadrature(MaxwellianComponent.from_shape(sol), gas):.12f}")
