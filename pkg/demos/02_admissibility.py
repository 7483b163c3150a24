# %% [markdown]
# Necessary conditions on the far-field state, with signed margins.

# %%
from polyevap.admissibility import check_all, evaporation_pressure_bound
from polyevap.gas import FarFieldState, GasParams

gas = GasParams(0)

# %%
for state in (FarFieldState(1, 1, 0), FarFieldState(1, 1, 0.1), FarFieldState(0.2, 1, 0.1), FarFieldState(1, 2, -0.5)):
    rep = check_all(state, gas)
    margins = ", ".join(f"{k}={v.margin:+.4f}" for k, v in rep.applicable().items())
    print(f"{state}: admissible={rep.admissible}\n    {margins}")

# %%
# the evaporation pressure cap shrinks quickly with the Mach number
for m in (0.1, 0.5, 1.0, 2.0, 3.0):
    print(f"M={m:3.1f}  p <= {evaporation_pressure_bound(m, gas):.5f}")
