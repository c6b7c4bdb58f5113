# %% [markdown]
# Finite fields and spheres
#
# Elements of GF(q) are ints.  For q = 9 the element c0 + c1 X is 3*c1 + c0.

# %%
from ffsimplex import field_of_order
from ffsimplex.geometry import sphere, sphere_size_formula

f = field_of_order(9)
print(f, 'modulus', f.modulus, 'generator', f.nu)
print('squares:', [a for a in range(9) if f.chi(a) == 1])
r = f.sqrt(6)
print('sqrt(6) =', r, ' check:', f.mul(r, r), ' sqrt(4) =', f.sqrt(4))

# %% [markdown]
# Sphere sizes: the closed form against enumeration.

# %%
for q in (3, 5, 9):
    for d in (2, 3, 4):
        sizes = [sphere(q, d, t).size for t in range(q)]
        formula = [sphere_size_formula(q, d, t) for t in range(q)]
        print(f'q={q} d={d}', sizes, 'ok' if sizes == formula else 'MISMATCH')
