# %% [markdown]
# # The function g: Wilton expansion versus the rational closed form
#
# g is evaluated two ways: through the continued-fraction Wilton route (A, Q, G, delta)
# and, at rationals, through a finite cotangent sum.

# %%
from fractions import Fraction
import math

from nbsums.special_fn import A_ONE, default_atable, eval_A, g_split, g_wilton
from nbsums.sums import calibrated_sign, g_rational, g_sawtooth

print("A(1) =", A_ONE, " log 2pi - gamma =", math.log(2 * math.pi) - 0.5772156649015329)
print("A(3) = 3 A(1/3):", eval_A(3), 3 * eval_A(Fraction(1, 3)))

# %%
A = default_atable()
print("calibrated sign:", calibrated_sign())
for h, k in [(1, 3), (2, 7), (5, 12), (13, 97)]:
    w = g_wilton(Fraction(h, k), A)
    r = g_rational(h, k)
    print(f"{h}/{k}: wilton={w:+.15f} cotangent={r:+.15f} sawtooth={g_sawtooth(h, k):+.15f}")
print("closed value at 1/3:", math.pi / (9 * math.sqrt(3)))

# %% [markdown]
# Splitting g into a smooth partial sum and a singular remainder. The Wilton tail
# shrinks geometrically with the depth s.

# %%
x = Fraction(1_000_003, 3_141_593)
for s in (2, 4, 8, 11):
    d = g_split(x, s, A)
    print(s, f"g_sm={d.g_sm:+.6f} g_sing={d.g_sing:+.6f} wilton_tail={d.wilton_tail:+.2e}")
