"""
Noise interpolation and balanced partitions
===========================================

Recover the linear part of a low-degree polynomial from a few noise rates,
split small linear coefficients into balanced blocks, and run the
block-resampling procedure.
"""

# %%
import numpy as np

from boolrestrict import balanced_partition, generate, interpolation_nodes
from boolrestrict.noise import build_procedure_config, exceedance_rate, minimax_linear_extraction

# %% [markdown]
# Nodes for degree k and the total absolute weight of the linear extractor.

# %%
for k in range(1, 9):
    nodes = interpolation_nodes(k)
    print(f"k={k}  nodes={np.round(nodes.nodes, 3)}  sum|w|={nodes.weight_norm:.3f}")

# %% [markdown]
# Extraction is exact on p(rho) = sum_i a_i rho^i.

# %%
a = np.array([0.0, 0.7, -1.2, 0.4, 2.0])
nodes = interpolation_nodes(4)
values = np.polyval(a[::-1], nodes.nodes)
print("recovered a_1 =", nodes.extract_linear(values))
print("two-sided minimax value:", minimax_linear_extraction(nodes.nodes, 4, two_sided=True))

# %% [markdown]
# Balanced partition: every block ends with at least total/(2L).

# %%
w = np.random.default_rng(3).uniform(0.5, 1.0, size=12)
part = balanced_partition(w.tolist(), 3)
print(part.buckets, np.round(part.sums(w.tolist()), 3), "target", w.sum() / 6)

# %% [markdown]
# The procedure on tribes with every coordinate alive.

# %%
f, d = generate("tribes:w=2,t=3")
cfg = build_procedure_config(f, U=(1 << f.n) - 1, y=0, L=2, d=d, threshold=0.5)
print("blocks:", [f"{b:#x}" for b in cfg.blocks])
print("exceedance:", exceedance_rate(cfg, trials=2000, seed=4).estimate)
