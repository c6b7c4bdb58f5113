# %% [markdown]
# Congruence classes of simplexes
#
# Nondegenerate tuples are classified by their edge-norm vectors.  Mirror
# images share a vector but are not related by a rotation, so the isometry
# search runs over the full orthogonal group.

# %%
import numpy as np

from ffsimplex.simplex import census, congruence_trials, proof_pipeline, random_subset

print(congruence_trials(3, 2, 200, seed=1))

# %% [markdown]
# Census of tetrahedra (k = 3) in GF(3)^5: exact on a 60-point set, sampled
# on the whole space.  Both realize 715 of the 729 possible vectors.

# %%
E = random_subset(3, 5, 60, 7)
exact = census(E, 3, 3)
sampled = census(np.arange(243), 3, 3, mode='sampled', samples=10 ** 6, seed=20240601)
print('exact on 60 points:', exact.count, '  sampled on all of GF(3)^5:', sampled.count,
      f'  c = {sampled.lower_bound_fraction:.4f}')

# %% [markdown]
# Replaying the counting argument on GF(5)^5 with star type (1, 1, 1).

# %%
rep = proof_pipeline(np.arange(5 ** 5), 3, (1, 1, 1), 5)
d = rep.to_dict()
for key in ('star_count', 'center', 'sphere_sizes', 'line_sizes', 'projection_ok', 'patterns_realized', 'total_copies'):
    print(f'{key:20s} {d[key]}')
