# %% [markdown]
# Half-Gaussian moments and the far-field gas model.
#
# Everything is in units where mass, Boltzmann's constant and the wall
# temperature and pressure are one.

# %%
import numpy as np

from polyevap.gas import FarFieldState, GasParams, classify_regime, flux_moments, incoming_half_moments
from polyevap.kernels import half_gauss_moment, log_half_gauss_moment, shape_function, theta

# %%
# I_n(s) = int_0^inf z^n exp(-(z - s)^2) dz. For s << 0 the values underflow,
# so they are kept as mantissa times exp(log_scale).
for s in (-30.0, -3.0, 0.0, 3.0):
    m = half_gauss_moment(2, s)
    print(f"s={s:6.1f}  I_2={m.value:.6e}  log I_2={log_half_gauss_moment(2, s):.10f}")

# %%
gas = GasParams(3)
print("gamma for delta=3:", gas.gamma)
for s in np.linspace(-5, 5, 5):
    print(f"s={s:5.2f}  Phi={shape_function(s, gas):10.5f}  theta={theta(s):8.5f}")

# %%
# moments of the gas arriving at the wall, and the conserved fluxes
state = FarFieldState(p=0.6, T=0.8, mach=0.5)
print(incoming_half_moments(state, gas))
print(flux_moments(state, gas))

# %%
for m in (-2.0, -0.5, 0.0, 0.5, 1.2):
    r = classify_regime(m)
    print(f"M={m:5.2f}  {r.regime.value:25s} free parameters: {r.free_parameters}")
