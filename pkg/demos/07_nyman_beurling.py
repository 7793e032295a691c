# %% [markdown]
# # Nyman-Beurling distances
#
# d_N^2 for the Moebius-weighted V_N and for the Gram-optimal coefficients,
# compared with the conjectured asymptotic.

# %%
import numpy as np

from nbsums.arith import sieve
from nbsums.nb import dn_squared, gram_minimize, nb_asymptotic, vn_coefficients, zeta_half

print("zeta(1/2 + 14.1347i) =", zeta_half(14.134725141734693).value)

# %%
a = vn_coefficients(4)
print("gram  :", dn_squared(4, a, "gram"))
print("direct:", dn_squared(4, a, "direct"))

# %%
mu = sieve(200)
print(" N   d2(V_N)   d2(opt)   asymptotic")
for N in (10, 20, 50, 100, 200):
    v = dn_squared(N, vn_coefficients(N, mu))[0]
    o = gram_minimize(N).value
    print(f"{N:3d}  {v:.5f}  {o:.5f}  {nb_asymptotic(N):.5f}")
