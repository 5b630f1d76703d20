"""
Random restrictions
===================

Sample restrictions that keep each coordinate alive with probability p,
compare Monte Carlo averages with their closed forms, then run the junta
experiment.
"""

# %%
import numpy as np

from boolrestrict import RestrictionDistribution, generate, restrict, variance
from boolrestrict.experiments import junta_experiment, survival_probability
from boolrestrict.restrictions import expected_restricted_variance, expected_tail_above, sample_restriction
from boolrestrict.spectral import weight_above_level

f, d = generate("tribes:w=2,t=3")
p = 0.3
rng = np.random.default_rng(0)
dist = RestrictionDistribution(f.n, p)

# %% [markdown]
# One restriction, printed as the alive mask and the assignment of dead coordinates.

# %%
r = sample_restriction(dist, rng)
print(r.to_line(), "->", len(restrict(f, r)), "nonzero coefficients")

# %% [markdown]
# Restricted variance and weight above level 1, sampled against closed forms.

# %%
samples = [restrict(f, sample_restriction(dist, rng)) for _ in range(5000)]
print("E Var f_rho   MC %.5f  closed form %.5f" %
      (np.mean([variance(g) for g in samples]), expected_restricted_variance(f, p)))
print("E W>1[f_rho]  MC %.5f  closed form %.5f" %
      (np.mean([weight_above_level(g, 1) for g in samples]), expected_tail_above(f, p, 1)))

# %% [markdown]
# Junta experiment at the default survival probability log(d)/d.

# %%
print("p =", survival_probability(d, 1.0))
report = junta_experiment(f, d, family="tribes:w=2,t=3", trials=2000, seed=1)
print(report.to_csv())
print("junta sizes:", report.extras["junta_size_histogram"])
