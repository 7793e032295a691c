# %% [markdown]
# # Moebius sieve and Vaughan's identity
#
# mu = c1 + c2 + c3 holds exactly for every cut-off w; c1 splits further by the
# size of its Dirichlet factors.

# %%
import numpy as np

from nbsums.arith import sieve, vaughan_decompose

N = 100_000
table = sieve(N)
print("sum of mu up to N:", int(table.mu[1:].sum()))
for w in (2, 10, 50, 316):
    vd = vaughan_decompose(N, w, table)
    resid = vd.c1 + vd.c2 + vd.c3 - table.mu
    print(f"w={w:4d} max|c1+c2+c3-mu| = {int(np.abs(resid[1:]).max())}  max|c1| = {int(np.abs(vd.c1).max())}")
