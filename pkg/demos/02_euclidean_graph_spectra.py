# %% [markdown]
# Spectra of finite Euclidean graphs
#
# G_q(a) joins x and y when ||x - y|| = a.  Its eigenvalues are character sums
# over the sphere S_a, checked here against a dense eigensolve.

# %%
from ffsimplex.euclid_graph import build_graph, check_ramanujan_bound, dense_spectrum, spectra_agree

g = build_graph(5, 2, 1)
print('valency', g.valency, 'eigenvalues', g.spectrum.multiset())
print('dense agrees:', spectra_agree(g.spectrum, dense_spectrum(g)))

# %% [markdown]
# The bound 2 q^((d-1)/2) holds in odd dimension.  For d even and a = 0
# the isotropic characters give (q-1) q^((d-2)/2) - 1, which beats the bound
# from q = 7 on.

# %%
for q, d, a in [(5, 3, 1), (7, 3, 0), (5, 4, 0), (7, 4, 0)]:
    g = build_graph(q, d, a)
    ok, margin = check_ramanujan_bound(g.spectrum)
    print(f'q={q} d={d} a={a}: max |lambda| = {g.spectral_lambda():.3f}, '
          f'bound = {g.ramanujan_bound():.3f}, holds = {ok}')
