"""
Influential coordinates and block sensitivity
=============================================

After a random restriction, how often does some coordinate keep a large
influence?  And how large is block sensitivity compared with degree?
"""

# %%
from boolrestrict import TruthTable, block_sensitivity, generate, wht_inverse
from boolrestrict.experiments import aa_experiment

# %% [markdown]
# The influential-coordinate experiment reports the sampled rate, the exact
# rate by enumeration (n <= 8), and the quantities used in the variance argument.

# %%
for spec in ["tribes:w=2,t=3", "and_or_tree:h=3", "recursive_maj3:h=1"]:
    f, d = generate(spec)
    rep = aa_experiment(f, max(d, 2), family=spec, trials=2000, seed=2)
    print(spec)
    for s in rep.statistics:
        print(f"  {s.name:30s} {s.estimate:.5f} +- {s.ci_radius:.5f}")

# %% [markdown]
# Block sensitivity against degree.

# %%
for spec in ["tribes:w=2,t=2", "and_or_tree:h=2", "recursive_maj3:h=2", "random_dtree:depth=3,n=8,seed=4"]:
    f, _ = generate(spec)
    t: TruthTable = wht_inverse(f)
    print(f"{spec:34s} deg={f.degree}  bs={block_sensitivity(t):.3f}  6 deg^2={6 * f.degree ** 2}")
