# %% [markdown]
# Mixing inequalities and star counts
#
# Random vertex sets should see about (valency/n)|B| neighbours each; the
# spectral inequalities bound the deviation.

# %%
import numpy as np

from ffsimplex.euclid_graph import NormColoring, build_graph
from ffsimplex.mixing import PatternGraph, count_colored_copies, count_colored_stars, mixing_trials
from ffsimplex.simplex import random_subset

print(mixing_trials(build_graph(5, 3, 2), trials=50, seed=1))

# %% [markdown]
# 3-stars with all edges of norm 1 on half-density subsets of GF(q)^5.
# The relative deviation from the random prediction shrinks as q grows.

# %%
for q in (3, 5, 7):
    col = NormColoring(q, 5)
    E0, E1, E2, E3 = [random_subset(q, 5, col.n // 2, i) for i in range(4)]
    rep = count_colored_stars(col, E0, [E1, E2, E3], (1, 1, 1))
    print(f'q={q}: stars={rep.exact_count}, predicted={rep.predicted:.4g}, '
          f'deviation={rep.relative_deviation:.2e}, hypothesis ratio={rep.hypothesis_ratio:.3g}')

# %% [markdown]
# The same counts via the general pattern counter.

# %%
col = NormColoring(3, 3)
sets = [np.arange(27)] * 3
tri = PatternGraph.complete(3, (1, 1, 2))
print('colored triangles in GF(3)^3:', count_colored_copies(col, tri, sets).exact_count)
