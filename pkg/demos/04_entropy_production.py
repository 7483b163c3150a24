# %% [markdown]
# Upper bound Lambda on the entropy production, evaluated in two
# algebraically equivalent forms. A state can only be realized when
# Lambda >= 0.

# %%
from polyevap.entropy import entropy_bound, lambda_direct, lambda_recast
from polyevap.errors import InfeasibleMomentsError
from polyevap.gas import FarFieldState, GasParams

# %%
for d in (0, 2, 3, 5):
    print(f"delta={d}: Lambda at rest = {entropy_bound(FarFieldState(1, 1, 0), GasParams(d)).value:.2e}")

# %%
gas = GasParams(0)
for state in (FarFieldState(0.27, 0.7, 0.8), FarFieldState(5, 0.5, -1.5), FarFieldState(0.6, 1.0, 0.3)):
    a, b = lambda_direct(state, gas), lambda_recast(state, gas)
    print(f"{state}: direct={a.value:.12f} recast={b.value:.12f} (s={a.s:.3f})")

# %%
# states whose incoming moments cannot come from any distribution are rejected
try:
    entropy_bound(FarFieldState(1, 1, 0.1), gas)
except InfeasibleMomentsError as e:
    print("rejected:", e)
