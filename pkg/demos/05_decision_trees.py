"""
Greedy decision trees
=====================

Query the most influential coordinate, restrict, and repeat.  The L2 error
of the resulting tree is computed exactly from restrictions along each path.
"""

# %%
from boolrestrict import generate, greedy_influence_tree, tree_error
from boolrestrict.querytree import depth, serialize

f, _ = generate("recursive_maj3:h=2")
for budget in range(0, 7):
    tree = greedy_influence_tree(f, 0.0, budget)
    print(f"budget={budget}  depth={depth(tree)}  error={tree_error(f, tree):.5f}")

# %%
tribes, _ = generate("tribes:w=2,t=2")
print(serialize(greedy_influence_tree(tribes, 0.0, 2)))
