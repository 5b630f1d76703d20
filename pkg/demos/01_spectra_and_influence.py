"""
Fourier spectra and influences
==============================

Build a few bounded functions, look at their spectra and check Parseval.
Bit i of a point index set means x_i = -1.
"""

# %%
import numpy as np

from boolrestrict import TruthTable, generate, influences, variance, wht_forward, wht_inverse
from boolrestrict.spectral import level_weights, second_moment

# %% [markdown]
# AND of two bits as a {0,1} function: every coefficient has magnitude 1/4.

# %%
and2 = wht_forward(TruthTable(2, np.array([0.0, 0.0, 0.0, 1.0]), bounded=True))
for mask, c in sorted(and2.coeffs.items()):
    print(f"S={mask:02b}  f^(S)={c:+.3f}")

# %% [markdown]
# Majority of three: each coordinate has influence 1/2 in the signed version.

# %%
maj = wht_forward(TruthTable.from_callable(3, lambda x: 1.0 if sum(x) > 0 else -1.0))
print("influences:", influences(maj))
print("level weights:", level_weights(maj))

# %% [markdown]
# Parseval across the family zoo.

# %%
for spec in ["tribes:w=2,t=3", "and_or_tree:h=2", "recursive_maj3:h=2", "smoothed_random:n=8,seed=1"]:
    f, d = generate(spec)
    dense = wht_inverse(f).values
    print(f"{spec:28s} n={f.n:2d} deg={f.degree} (declared {d})  "
          f"E f^2={second_moment(f):.6f} vs {np.mean(dense ** 2):.6f}  Var={variance(f):.4f}")
