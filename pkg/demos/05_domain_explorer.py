# %% [markdown]
# Where entropy production can be nonnegative: the evaporation curve of
# maximal Lambda, the condensation surface and slices of Lambda = 0.

# %%
import numpy as np

from polyevap.explorer import boundary_cell, condensation_surface, evaporation_curve, max_positive_mach
from polyevap.gas import GasParams

# %%
for d in (0, 2, 3, 5):
    print(f"delta={d}: Lambda >= 0 possible up to M = {max_positive_mach(GasParams(d)):.3f}")

# %%
curve = evaporation_curve(GasParams(0), np.round(np.arange(0.1, 1.8, 0.2), 10))
for pt in curve:
    print(f"M={pt.mach:4.2f}  p#={pt.p_sharp:.5f}  T#={pt.t_sharp:.5f}  Lambda={pt.lambda_max:.3e}")
print("max Lambda < 0 at:", curve.excluded)

# %%
surf = condensation_surface(GasParams(0), [0.5, 1.0, 2.0], [-1.2, -0.8, -0.4, -0.01])
for s in surf:
    flag = " (at search edge)" if s.boundary else ""
    print(f"T={s.temperature:3.1f} M={s.mach:5.2f}  p*={s.p_star:.5f}{flag}")

# %%
for m in (-0.4, -0.01, 0.3):
    for b in boundary_cell(1.0, m, GasParams(0)):
        print(f"T=1 M={m:5.2f}: Lambda > 0 for p in ({b.p_lower:.6f}, {b.p_upper:.6f})")
