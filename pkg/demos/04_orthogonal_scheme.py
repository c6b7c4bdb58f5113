# %% [markdown]
# The scheme on square-type lines
#
# Lines through the origin whose points have nonzero square norm, related by
# the norms of U + V and U - V for unit representatives U, V.

# %%
from ffsimplex.scheme import build_omega, scheme_report

for q in (3, 5, 7):
    rep = scheme_report(q, 5)
    print(f"q={q}: |Omega| = {rep['omega_size']}, partition ok = {rep['partition_ok']}, "
          f"distance relation ok = {rep['distance_relation_ok']}")
    for r in rep['relations']:
        print(f"   R_{r['l']}: valency {r['valency']}, max nontrivial |lambda| {r['max_nontrivial_abs']:.4f}, "
              f"c = {r['certified_c']:.6f}")

# %%
s = build_omega(3, 5)
print(s, 'relation counts per row:', [int((s.relations[0] == l).sum()) for l in range(3)])
