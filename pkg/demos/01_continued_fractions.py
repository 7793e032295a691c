# %% [markdown]
# # Continued fractions in exact arithmetic
#
# Rationals are expanded with `Fraction`, so every alpha_l and beta_l is exact.
# The gamma_l values are the only floats.

# %%
from fractions import Fraction

from nbsums.contfrac import apply_T, cell_of, cf_expand, gauss_map, gauss_measure

x = Fraction(355, 1130)
cf = cf_expand(x)
print("quotients  ", cf.quotients)
print("convergents", cf.convergents)
print("beta_l     ", [str(cf.beta(l)) for l in range(-1, cf.depth)])

# %% [markdown]
# beta_l is the product of the first l+1 Gauss-map iterates, and q_l beta_{l-1} + q_{l-1} beta_l = 1.

# %%
a = x
prod = Fraction(1)
for l in range(cf.depth):
    prod *= a
    a = gauss_map(a) if a else a
    assert prod == cf.beta(l)
print("product identity holds at every level")

# %% [markdown]
# A fundamental cell [b_1..b_s] is an interval whose Gauss measure shrinks roughly like q_s^-2.

# %%
cell = cell_of([1, 2, 3])
print(cell.endpoint_low, cell.endpoint_high, "q_s =", cell.q_s, "measure =", gauss_measure(float(cell.endpoint_low), float(cell.endpoint_high)))

# %% [markdown]
# T^s applied to log(1/x) recovers gamma_s.

# %%
import math

for s in range(4):
    print(s, apply_T(lambda u: math.log(1 / u), x, s), cf.gamma(s))
